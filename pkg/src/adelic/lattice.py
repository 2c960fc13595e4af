"""The free distributive lattice on the generators 01, 02, 12 and a monomial model.

Lattice elements are joins of meets, stored as antichains of nonempty sets
of generators.  The model sends each generator to a union of quadrants
{(i, j) : i >= a, j >= b} in Z^2 (a or b may be -inf), i.e. to the span of
the monomials u^i t^j over that point set.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import combinations, product

GENERATORS = ("01", "02", "12")
NEG_INF = float("-inf")
POS_INF = float("inf")


class LatticeError(ValueError):
    """Malformed term or assignment."""


# -- free lattice terms --------------------------------------------------------------------


def _minimal(sets) -> frozenset:
    sets = set(sets)
    return frozenset(s for s in sets if not any(o < s for o in sets))


@dataclass(frozen=True)
class LatticeTerm:
    """A join of meets; ``clauses`` is an antichain of nonempty generator sets."""

    clauses: frozenset

    def __post_init__(self):
        cl = frozenset(frozenset(c) for c in self.clauses)
        if not cl:
            raise LatticeError("the empty join is not an element of the lattice")
        for c in cl:
            if not c or not c <= set(GENERATORS):
                raise LatticeError(f"clause {sorted(c)} must be a nonempty set of generators")
        object.__setattr__(self, "clauses", _minimal(cl))

    @classmethod
    def gen(cls, g: str) -> "LatticeTerm":
        return cls(frozenset([frozenset([g])]))

    def join(self, other: "LatticeTerm") -> "LatticeTerm":
        return LatticeTerm(self.clauses | other.clauses)

    def meet(self, other: "LatticeTerm") -> "LatticeTerm":
        return LatticeTerm(frozenset(a | b for a in self.clauses for b in other.clauses))

    __or__ = join
    __and__ = meet

    def __le__(self, other: "LatticeTerm") -> bool:
        return self.join(other) == other

    def __lt__(self, other: "LatticeTerm") -> bool:
        return self != other and self <= other

    def evaluate(self, truth: dict) -> bool:
        """Value in the two-element lattice under a truth assignment of the generators."""
        return any(all(truth[g] for g in c) for c in self.clauses)

    def sort_key(self):
        return (sum(len(c) for c in self.clauses), sorted(sorted(c) for c in self.clauses))

    def __str__(self):
        def clause(c):
            return "(" + "∧".join(sorted(c)) + ")"

        return "∨".join(clause(c) for c in sorted(self.clauses, key=lambda c: (len(c), sorted(c))))


def meet(t1: LatticeTerm, t2: LatticeTerm) -> LatticeTerm:
    return t1.meet(t2)


def join(t1: LatticeTerm, t2: LatticeTerm) -> LatticeTerm:
    return t1.join(t2)


def _nonempty_subsets():
    return [frozenset(c) for r in range(1, 4) for c in combinations(GENERATORS, r)]


def _antichains(items):
    items = list(items)
    out = []
    for r in range(1, len(items) + 1):
        for combo in combinations(items, r):
            if all(not (a < b or b < a) for a, b in combinations(combo, 2)):
                out.append(frozenset(combo))
    return out


@dataclass(frozen=True)
class FreeLattice:
    elements: tuple
    covers: tuple  # (lower index, upper index)

    @property
    def top(self) -> LatticeTerm:
        return reduce(join, self.elements)

    @property
    def bottom(self) -> LatticeTerm:
        return reduce(meet, self.elements)

    def to_dot(self) -> str:
        lines = ["digraph free_lattice {", "  rankdir=BT;"]
        for k, t in enumerate(self.elements):
            lines.append(f'  n{k} [label="{t}"];')
        for a, b in self.covers:
            lines.append(f"  n{a} -> n{b};")
        lines.append("}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {"size": len(self.elements), "elements": [str(t) for t in self.elements], "covers": [list(c) for c in self.covers]}


def enumerate_free_lattice() -> FreeLattice:
    """All 18 elements with the covering relations of their order."""
    elems = sorted((LatticeTerm(a) for a in _antichains(_nonempty_subsets())), key=LatticeTerm.sort_key)
    covers = []
    for i, x in enumerate(elems):
        for j, y in enumerate(elems):
            if x < y and not any(x < z < y for z in elems):
                covers.append((i, j))
    return FreeLattice(tuple(elems), tuple(covers))


def monotone_boolean_functions(n: int = 3) -> list[tuple[int, ...]]:
    """Truth tables of all monotone Boolean functions of n variables, by brute force."""
    points = list(product((0, 1), repeat=n))
    out = []
    for table in product((0, 1), repeat=len(points)):
        val = dict(zip(points, table))
        if all(val[x] <= val[y] for x in points for y in points if all(a <= b for a, b in zip(x, y))):
            out.append(table)
    return out


# -- quadrant sets -----------------------------------------------------------------------------


def _coord(v) -> float | int:
    if v in (None, "-inf", NEG_INF):
        return NEG_INF
    if isinstance(v, bool) or not isinstance(v, int):
        raise LatticeError(f"coordinate {v!r} must be an integer or -inf")
    return v


@dataclass(frozen=True)
class QuadrantSet:
    """Union of quadrants {i >= a, j >= b}; ``gens`` is an antichain under componentwise order."""

    gens: frozenset

    def __post_init__(self):
        gs = {(_coord(a), _coord(b)) for a, b in self.gens}
        keep = frozenset(g for g in gs if not any(h != g and h[0] <= g[0] and h[1] <= g[1] for h in gs))
        object.__setattr__(self, "gens", keep)

    @classmethod
    def of(cls, *gens) -> "QuadrantSet":
        return cls(frozenset(gens))

    def union(self, other: "QuadrantSet") -> "QuadrantSet":
        return QuadrantSet(self.gens | other.gens)

    def intersection(self, other: "QuadrantSet") -> "QuadrantSet":
        return QuadrantSet(frozenset((max(a, c), max(b, d)) for a, b in self.gens for c, d in other.gens))

    def __contains__(self, point) -> bool:
        i, j = point
        return any(i >= a and j >= b for a, b in self.gens)

    def invariants(self) -> tuple:
        """(alpha, beta, alpha_-, beta_-): where rows and columns eventually start.

        alpha: min a (rows far up); beta: min b (columns far right);
        alpha_-: min a over quadrants with b = -inf (rows far down);
        beta_-: min b over quadrants with a = -inf (columns far left).
        +inf marks an eventually empty direction.
        """
        g = self.gens
        return (
            min((a for a, _ in g), default=POS_INF),
            min((b for _, b in g), default=POS_INF),
            min((a for a, b in g if b == NEG_INF), default=POS_INF),
            min((b for a, b in g if a == NEG_INF), default=POS_INF),
        )

    def finite_coords(self) -> list[int]:
        return [c for p in self.gens for c in p if c != NEG_INF]

    def to_json(self) -> list:
        def enc(c):
            return "-inf" if c == NEG_INF else c

        return [[enc(a), enc(b)] for a, b in sorted(self.gens)]

    def __str__(self):
        return "∪".join(f"[{'−∞' if a == NEG_INF else a},{'−∞' if b == NEG_INF else b}]" for a, b in sorted(self.gens)) or "∅"


def commensurable(s1: QuadrantSet, s2: QuadrantSet) -> bool:
    """Is the symmetric difference finite?

    Outside a box containing every finite generator coordinate, membership
    in each of the four directions depends only on the invariants, so the
    difference is finite exactly when they agree.
    """
    return s1.invariants() == s2.invariants()


def symmetric_difference_size(s1: QuadrantSet, s2: QuadrantSet, radius: int) -> int:
    """Number of points of the symmetric difference in the box [-radius, radius]^2."""
    r = range(-radius, radius + 1)
    return sum((p in s1) != (p in s2) for p in product(r, r))


# -- the model ---------------------------------------------------------------------------------


def model_evaluate(t: LatticeTerm, assignment: dict) -> QuadrantSet:
    missing = set(GENERATORS) - set(assignment)
    if missing:
        raise LatticeError(f"assignment misses generators {sorted(missing)}")
    meets = [reduce(QuadrantSet.intersection, (assignment[g] for g in sorted(c))) for c in t.clauses]
    return reduce(QuadrantSet.union, meets)


def distinct_classes(assignment: dict, lattice: FreeLattice | None = None) -> int:
    lattice = lattice or enumerate_free_lattice()
    return len({model_evaluate(t, assignment).invariants() for t in lattice.elements})


def injectivity_check(assignment: dict) -> bool:
    """Do the 18 elements evaluate to pairwise non-commensurable sets?"""
    lattice = enumerate_free_lattice()
    return distinct_classes(assignment, lattice) == len(lattice.elements)


def homomorphism_check(assignment: dict) -> bool:
    """model(x op y) == model(x) op model(y) for all pairs and both operations."""
    elems = enumerate_free_lattice().elements
    val = {t: model_evaluate(t, assignment) for t in elems}
    for x, y in product(elems, repeat=2):
        if model_evaluate(x.join(y), assignment) != val[x].union(val[y]):
            return False
        if model_evaluate(x.meet(y), assignment) != val[x].intersection(val[y]):
            return False
    return True


STANDARD_02 = QuadrantSet.of((0, NEG_INF))  # i >= 0
STANDARD_12 = QuadrantSet.of((NEG_INF, 0))  # j >= 0


def candidate_sets(coords=(NEG_INF, 0, 1, 2), max_gens: int = 2):
    """Every QuadrantSet with at most ``max_gens`` quadrants from the coordinate grid."""
    points = list(product(coords, coords))
    seen = set()
    for r in range(1, max_gens + 1):
        for combo in combinations(points, r):
            s = QuadrantSet(frozenset(combo))
            if s not in seen:
                seen.add(s)
                yield s


@dataclass(frozen=True)
class SearchResult:
    assignment: dict
    classes: int
    searched: int

    @property
    def injective(self) -> bool:
        return self.classes == 18


def search_third_generator(coords=(NEG_INF, 0, 1, 2), max_gens: int = 2) -> SearchResult:
    """Best set for 01 given 02 = {i >= 0} and 12 = {j >= 0}, by number of distinct classes."""
    lattice = enumerate_free_lattice()
    best, best_n, n = None, -1, 0
    for s in candidate_sets(coords, max_gens):
        n += 1
        a = {"01": s, "02": STANDARD_02, "12": STANDARD_12}
        k = distinct_classes(a, lattice)
        if k > best_n:
            best, best_n = a, k
    return SearchResult(best, best_n, n)


def search_all_generators(coords=(NEG_INF, 0, 1), max_gens: int = 2) -> SearchResult:
    """Best assignment with all three generators free, up to permuting them."""
    lattice = enumerate_free_lattice()
    cands = list(candidate_sets(coords, max_gens))
    # the class of a value depends only on its invariants; search one representative per vector
    reps = {}
    for s in cands:
        reps.setdefault(s.invariants(), s)
    reps = list(reps.values())
    best, best_n, n = None, -1, 0
    for x, y, z in combinations(reps, 3):
        n += 1
        a = {"01": x, "02": y, "12": z}
        k = distinct_classes(a, lattice)
        if k > best_n:
            best, best_n = a, k
    return SearchResult(best, best_n, n)


# Found by search_third_generator(); the shipped choice for 01.
SHIPPED_01 = QuadrantSet.of((NEG_INF, 1), (1, NEG_INF))


def shipped_assignment() -> dict:
    return {"01": SHIPPED_01, "02": STANDARD_02, "12": STANDARD_12}


def parse_term(text: str) -> LatticeTerm:
    """Parse ``(01∧02)∨(12)``; ``&``/``|`` and ``^``/``v`` are accepted too."""
    s = text.replace("∧", "&").replace("^", "&").replace("∨", "|").replace(" v ", "|").replace(" ", "")
    clauses = []
    for part in s.split("|"):
        part = part.strip("()")
        gens = [g for g in part.split("&") if g]
        bad = [g for g in gens if g not in GENERATORS]
        if not gens or bad:
            raise LatticeError(f"cannot parse clause {part!r} in {text!r}")
        clauses.append(frozenset(gens))
    return LatticeTerm(frozenset(clauses))
