"""Finite adelic windows A(D_high)/A(D_low) on P^1 and the restricted complex.

A window keeps, at each place x of a finite set S, the Laurent coefficients
of exponents ``-D_high(x) <= e < -D_low(x)`` in the local parameter at x.
Each coefficient lives in the residue field of x and is written in
``deg(x)`` coordinates over F_q, so a window is an F_q-vector space of
dimension ``sum (D_high(x) - D_low(x)) * deg(x)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .algebra import Field, nullspace, rank
from .curve import Divisor, factor_places, l_dim, principal_denominator, rr_space_basis
from .series import LaurentSeries1D, Place, RationalFunction, expand_rational_1d


class AdeleError(ValueError):
    """A window or embedding precondition does not hold."""


class InstabilityError(AdeleError):
    """A truncated computation changed when its bounds were enlarged."""


@dataclass(frozen=True)
class PlaceBlock:
    place: Place
    lo: int
    hi: int

    @property
    def dim(self) -> int:
        return (self.hi - self.lo) * self.place.degree

    def exponents(self) -> range:
        return range(self.lo, self.hi)


@dataclass(frozen=True)
class AdeleWindow:
    field: Field
    places: tuple[Place, ...]
    d_low: Divisor
    d_high: Divisor
    blocks: tuple[PlaceBlock, ...]

    @property
    def dim(self) -> int:
        return sum(b.dim for b in self.blocks)

    def block(self, place: Place) -> PlaceBlock:
        for b in self.blocks:
            if b.place == place:
                return b
        raise AdeleError(f"{place.name()} is not in the window's place set")

    def offset(self, place: Place) -> int:
        off = 0
        for b in self.blocks:
            if b.place == place:
                return off
            off += b.dim
        raise AdeleError(f"{place.name()} is not in the window's place set")

    def labels(self) -> list[tuple[Place, int, int]]:
        """(place, exponent, digit) for each coordinate, in coordinate order."""
        return [(b.place, e, i) for b in self.blocks for e in b.exponents() for i in range(b.place.degree)]

    def zero(self) -> "WindowVector":
        return WindowVector(self, (0,) * self.dim)

    def describe(self) -> dict:
        return {
            "q": self.field.order,
            "dim": self.dim,
            "blocks": [{"place": b.place.name(), "exponents": [b.lo, b.hi], "degree": b.place.degree} for b in self.blocks],
        }


@dataclass(frozen=True)
class WindowVector:
    window: AdeleWindow
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.window.dim:
            raise AdeleError("coordinate count does not match the window")

    def blocks(self) -> dict[Place, list[list[int]]]:
        """Per place, one list of F_q digits per exponent."""
        out, k = {}, 0
        for b in self.window.blocks:
            d = b.place.degree
            rows = []
            for _ in b.exponents():
                rows.append(list(self.coords[k : k + d]))
                k += d
            out[b.place] = rows
        return out

    def coefficient(self, place: Place, e: int) -> int:
        """The residue-field coefficient of s^e at ``place``."""
        b = self.window.block(place)
        if not b.lo <= e < b.hi:
            raise AdeleError(f"exponent {e} outside [{b.lo}, {b.hi}) at {place.name()}")
        k = self.window.offset(place) + (e - b.lo) * place.degree
        digits = self.coords[k : k + place.degree]
        return digits[0] if place.degree == 1 else place.residue_field().from_base_digits(list(digits))

    def _zip(self, other: "WindowVector", op) -> "WindowVector":
        if other.window != self.window:
            raise AdeleError("vectors live in different windows")
        return WindowVector(self.window, tuple(op(a, b) for a, b in zip(self.coords, other.coords)))

    def __add__(self, other):
        return self._zip(other, self.window.field.add)

    def __sub__(self, other):
        return self._zip(other, self.window.field.sub)

    def __neg__(self):
        F = self.window.field
        return WindowVector(self.window, tuple(F.neg(c) for c in self.coords))

    def scale(self, c: int) -> "WindowVector":
        F = self.window.field
        return WindowVector(self.window, tuple(F.mul(c, a) for a in self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)


def make_window(S, d_low: Divisor, d_high: Divisor, *, strict: bool = True) -> AdeleWindow:
    """The window A(d_high)/A(d_low) over the places S.

    With ``strict`` the window must satisfy deg d_low <= -1, which makes
    L(d_high) embed injectively.  Dual windows are built with strict=False.
    """
    F = d_low.field
    if d_high.field is not F:
        raise AdeleError("divisors over different fields")
    places = tuple(sorted(set(S), key=Place.sort_key))
    if not places:
        raise AdeleError("the place set S is empty")
    for p in places:
        if p.field is not F:
            raise AdeleError("place over a different field")
    for D, name in ((d_low, "D_low"), (d_high, "D_high")):
        outside = [p.name() for p in D.support if p not in places]
        if outside:
            raise AdeleError(f"{name} is supported outside S at {', '.join(outside)}")
    if not d_low <= d_high:
        raise AdeleError("D_low must be <= D_high at every place")
    if strict and d_low.degree() > -1:
        raise AdeleError(f"deg D_low = {d_low.degree()} must be <= -1 so that L(D_high) embeds injectively")
    blocks = tuple(PlaceBlock(p, -d_high[p], -d_low[p]) for p in places)
    return AdeleWindow(F, places, d_low, d_high, blocks)


def dual_window(W: AdeleWindow) -> AdeleWindow:
    """W((omega) - D_high, (omega) - D_low) for omega = dt, with (dt) = -2 inf."""
    F = W.field
    inf = Place.infinity(F)
    if inf not in W.places:
        raise AdeleError("the dual window needs infinity in S, where dt has its divisor")
    K = Divisor.canonical(F)
    return make_window(W.places, K - W.d_high, K - W.d_low, strict=False)


def _digits(place: Place, c: int) -> list[int]:
    if place.degree == 1:
        return [c]
    return place.residue_field().base_digits(c)


def _series_coords(s: LaurentSeries1D, block: PlaceBlock) -> list[int]:
    out = []
    for e in block.exponents():
        out.extend(_digits(block.place, s.coeff(e)))
    return out


def _check_poles(f: RationalFunction, places, bound) -> None:
    if f.is_zero():
        return
    for p, _ in factor_places(f.field, f.den) if len(f.den) > 1 else []:
        if p not in places:
            raise AdeleError(f"pole at {p.name()} lies outside S")
    for p in places:
        v = f.order_at(p)
        if v < -bound(p):
            raise AdeleError(f"pole of order {-v} at {p.name()} exceeds the allowed {bound(p)}")
    inf = Place.infinity(f.field)
    if inf not in places and f.order_at(inf) < 0:
        raise AdeleError("pole at inf lies outside S")


def embed_global(f: RationalFunction, W: AdeleWindow) -> WindowVector:
    """The diagonal image of a global function in the window."""
    if f.field is not W.field:
        raise AdeleError("function and window over different fields")
    _check_poles(f, W.places, lambda p: W.d_high[p])
    return WindowVector(W, tuple(_global_coords(f, W.blocks)))


def _global_coords(f: RationalFunction, blocks) -> list[int]:
    out = []
    for b in blocks:
        if b.hi <= b.lo:
            continue
        if f.is_zero():
            out.extend([0] * b.dim)
            continue
        v = f.order_at(b.place)
        if v >= b.hi:
            out.extend([0] * b.dim)
            continue
        s = expand_rational_1d(f, b.place, b.hi - v)
        out.extend(_series_coords(s, b))
    return out


def global_image(W: AdeleWindow, D: Divisor | None = None) -> list[list[int]]:
    """Coordinate rows spanning the image of L(D) (default D_high) in W."""
    D = W.d_high if D is None else D
    return [list(_global_coords(f, W.blocks)) for f in rr_space_basis(D)] if l_dim(D) else []


def pairing_matrix(W: AdeleWindow, V: AdeleWindow) -> list[list[int]]:
    """M[a][b] = sum_x Tr res_x(u_a * v_b * dt) for the coordinate basis vectors.

    The product beta * s^e * beta' * s^e' has residue Tr(beta beta') when
    e + e' = -1 at a finite place; at infinity dt = -z^-2 dz, so it is
    -beta beta' when e + e' = 1.
    """
    F = W.field
    lw, lv = W.labels(), V.labels()
    M = [[0] * len(lv) for _ in lw]
    for a, (x, e, i) in enumerate(lw):
        E = x.residue_field()
        bi = E.from_base_digits([int(k == i) for k in range(x.degree)]) if x.degree > 1 else 1
        for b, (y, f, j) in enumerate(lv):
            if y != x:
                continue
            bj = E.from_base_digits([int(k == j) for k in range(x.degree)]) if x.degree > 1 else 1
            if x.is_infinite:
                if e + f == 1:
                    M[a][b] = F.neg(1)
            elif e + f == -1:
                prod = E.mul(bi, bj)
                M[a][b] = E.relative_trace(prod) if x.degree > 1 else prod
    return M


def pair(u: WindowVector, v: WindowVector) -> int:
    """The residue pairing of two window vectors, in F_q."""
    F = u.window.field
    M = pairing_matrix(u.window, v.window)
    acc = 0
    for a, ua in enumerate(u.coords):
        if ua:
            for b, vb in enumerate(v.coords):
                if vb and M[a][b]:
                    acc = F.add(acc, F.mul(ua, F.mul(M[a][b], vb)))
    return acc


# -- restricted complex A + O_P -> K_P ---------------------------------------------


class Cohomology(NamedTuple):
    h0: int
    h1: int


def _complex_ranks(D: Divisor, N: int, M: int) -> Cohomology:
    """Kernel and cokernel of W_N + z^{-D(inf)} O / z^M  ->  z^{-N'} O / z^M."""
    F = D.field
    inf = Place.infinity(F)
    n_inf = D[inf]
    finite = Divisor.make(F, {p: n for p, n in D.mult if not p.is_infinite})
    h = principal_denominator(finite)
    deg_h = finite.degree()
    hinv = h.inverse()
    # global sections over A^1 allowed by D with pole order <= N at infinity
    W = [RationalFunction.monomial(F, j) * hinv for j in range(N + deg_h + 1)]
    lo = min(-N, -n_inf)
    block = PlaceBlock(inf, lo, M)
    cols = [_global_coords(w, (block,)) for w in W]
    for e in range(-n_inf, M):
        unit = [0] * (M - lo)
        unit[e - lo] = F.neg(1)
        cols.append(unit)
    target = M - lo
    if not cols:
        return Cohomology(0, target)
    rows = [list(r) for r in zip(*cols)]  # target x source
    r = rank(F, rows)
    h0 = len(nullspace(F, rows, len(cols)))
    return Cohomology(h0, target - r)


def default_bounds(D: Divisor) -> tuple[int, int]:
    """Smallest bounds that see every section and every obstruction at infinity."""
    n_inf = D[Place.infinity(D.field)]
    deg_fin = D.degree() - n_inf
    return max(n_inf, -deg_fin, 0) + 1, max(-n_inf, 0) + 1


def restricted_complex_cohomology(D: Divisor, P: Place | None = None, bounds: tuple[int, int] | None = None) -> Cohomology:
    """(h0, h1) of the complex Gamma(P^1 - P, O(D)) + O(D)_P -> K_P.

    ``bounds = (N, M)`` truncates global sections to pole order N at P and
    the local field to z^-N'..z^M.  The answer is recomputed at (N+1, M+1)
    and an :class:`InstabilityError` is raised if it moves.
    """
    F = D.field
    if P is not None and not P.is_infinite:
        raise AdeleError("the distinguished place must be infinity")
    N, M = bounds if bounds is not None else default_bounds(D)
    a = _complex_ranks(D, N, M)
    b = _complex_ranks(D, N + 1, M + 1)
    if a != b:
        raise InstabilityError(f"cohomology {tuple(a)} at bounds {(N, M)} changed to {tuple(b)} at {(N + 1, M + 1)}")
    return a


def strong_approximation_check(W: AdeleWindow, P: Place) -> bool:
    """Do global functions with poles in S, bounded off P, surject onto the blocks away from P?"""
    if P not in W.places:
        raise AdeleError("P must lie in S")
    F = W.field
    others = tuple(b for b in W.blocks if b.place != P and b.dim)
    target = sum(b.dim for b in others)
    if target == 0:
        return True
    high = Divisor.make(F, {b.place: W.d_high[b.place] for b in others})
    low = Divisor.make(F, {b.place: W.d_low[b.place] for b in others})
    # take enough pole order at P that the truncated map is surjective when it can be
    n = -(-(-1 - low.degree()) // P.degree) + 1
    n = max(n, 0)
    D = high + Divisor.make(F, {P: n})
    rows = [_global_coords(f, others) for f in rr_space_basis(D)] if l_dim(D) else []
    return bool(rows) and rank(F, rows) == target
