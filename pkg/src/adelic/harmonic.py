"""Functions on finite F_q-spaces with values in Q(zeta_p), and their Fourier theory.

A space F_q^n is indexed by integers: the vector with F_q-coordinates
``c_0, ..., c_{n-1}`` has index ``sum c_i q^i``.  Since an F_q element is
encoded by its base-p digits, the index is also the base-p digit vector of
the vector over F_p, and every F_q-linear map is an F_p-matrix on digits.

Values are stored as rows of length p holding the coefficients of
1, zeta, ..., zeta^(p-1), so multiplication by zeta^k is a cyclic shift.
Entries are Python ints or Fractions in object arrays; nothing is rounded.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .adeles import AdeleWindow, dual_window, global_image, make_window, pairing_matrix
from .algebra import CycloValue, Field, nullspace, rank, rref, span_equal
from .curve import Divisor, l_dim
from .series import Place


class HarmonicError(ValueError):
    """Domain or contract mismatch in a harmonic-analysis operation."""


# -- spaces and linear maps ----------------------------------------------------------


@dataclass(frozen=True)
class FqSpace:
    field: Field
    dim: int

    @property
    def size(self) -> int:
        return self.field.order**self.dim

    @property
    def fp_dim(self) -> int:
        return self.dim * self.field.abs_degree

    @cached_property
    def digits(self) -> np.ndarray:
        """(size, fp_dim) array of base-p digits of every index."""
        p, m = self.field.p, self.fp_dim
        idx = np.arange(self.size, dtype=np.int64)
        return (idx[:, None] // (p ** np.arange(m, dtype=np.int64))[None, :]) % p

    def index(self, coords) -> int:
        """Index of the vector with the given F_q-coordinates."""
        q = self.field.order
        if len(coords) != self.dim:
            raise HarmonicError(f"expected {self.dim} coordinates, got {len(coords)}")
        return sum(int(c) * q**i for i, c in enumerate(coords))

    def coords(self, idx: int) -> list[int]:
        q = self.field.order
        return [(idx // q**i) % q for i in range(self.dim)]

    def direct_sum(self, other: "FqSpace") -> "FqSpace":
        if other.field is not self.field:
            raise HarmonicError("direct sum of spaces over different fields")
        return FqSpace(self.field, self.dim + other.dim)

    def negation_index(self) -> np.ndarray:
        return _digits_to_index((-self.digits) % self.field.p, self.field.p)


def space_of(W: AdeleWindow) -> FqSpace:
    return FqSpace(W.field, W.dim)


def _digits_to_index(d: np.ndarray, p: int) -> np.ndarray:
    if d.shape[1] == 0:
        return np.zeros(d.shape[0], dtype=np.int64)
    return d @ (p ** np.arange(d.shape[1], dtype=np.int64))


def fp_matrix(F: Field, A) -> np.ndarray:
    """The F_p-matrix on digits of an F_q-matrix A (rows index the target)."""
    k, p = F.abs_degree, F.p
    rows, cols = len(A), (len(A[0]) if A else 0)
    out = np.zeros((rows * k, cols * k), dtype=np.int64)
    for i in range(rows):
        for j in range(cols):
            for s in range(k):
                out[i * k : (i + 1) * k, j * k + s] = F.coordinates(F.mul(A[i][j], p**s))
    return out


def fp_form(F: Field, M) -> np.ndarray:
    """B[a, b] = Tr(e_a * M * e_b) for the F_p-digit bases on both sides."""
    k, p = F.abs_degree, F.p
    rows, cols = len(M), (len(M[0]) if M else 0)
    out = np.zeros((rows * k, cols * k), dtype=np.int64)
    for i in range(rows):
        for j in range(cols):
            if not M[i][j]:
                continue
            for r in range(k):
                for s in range(k):
                    out[i * k + r, j * k + s] = F.trace(F.mul(p**r, F.mul(M[i][j], p**s)))
    return out


@dataclass(frozen=True)
class LinearMap:
    source: FqSpace
    target: FqSpace
    matrix: tuple  # target.dim rows of source.dim F_q entries

    @classmethod
    def make(cls, source: FqSpace, target: FqSpace, A) -> "LinearMap":
        A = tuple(tuple(int(c) for c in row) for row in A)
        if len(A) != target.dim or any(len(r) != source.dim for r in A):
            raise HarmonicError(f"matrix shape does not match {target.dim}x{source.dim}")
        if source.field is not target.field:
            raise HarmonicError("map between spaces over different fields")
        return cls(source, target, A)

    @classmethod
    def identity(cls, V: FqSpace) -> "LinearMap":
        return cls.make(V, V, [[int(i == j) for j in range(V.dim)] for i in range(V.dim)])

    @cached_property
    def images(self) -> np.ndarray:
        """Index of the image of every source vector."""
        F = self.source.field
        if self.target.dim == 0:
            return np.zeros(self.source.size, dtype=np.int64)
        Ap = fp_matrix(F, self.matrix)
        img = (self.source.digits @ Ap.T) % F.p
        return _digits_to_index(img, F.p)


def diagonal(V: FqSpace) -> LinearMap:
    """i(a) = (a, a)."""
    n = V.dim
    A = [[int(i % n == j) for j in range(n)] for i in range(2 * n)]
    return LinearMap.make(V, V.direct_sum(V), A)


def difference(V: FqSpace) -> LinearMap:
    """j(a, b) = a - b."""
    F, n = V.field, V.dim
    A = [[1 if j == i else (F.neg(1) if j == i + n else 0) for j in range(2 * n)] for i in range(n)]
    return LinearMap.make(V.direct_sum(V), V, A)


def to_point(V: FqSpace) -> LinearMap:
    """beta: V -> 0."""
    return LinearMap.make(V, FqSpace(V.field, 0), [])


def from_point(V: FqSpace) -> LinearMap:
    """alpha: 0 -> V."""
    return LinearMap.make(FqSpace(V.field, 0), V, [[] for _ in range(V.dim)])


# -- function tables ------------------------------------------------------------------


def _cyclo_mul_rows(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Pointwise product of two (N, p) redundant-value arrays."""
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=object)
    for i in range(p):
        for j in range(p):
            out[..., (i + j) % p] += a[..., i] * b[..., j]
    return out


def _normalize(values: np.ndarray) -> np.ndarray:
    return values - values[:, -1:]


@dataclass(eq=False)
class FnTable:
    """A function on a finite F_q-space, stored densely."""

    space: FqSpace
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        p = self.space.field.p
        if self.values.shape != (self.space.size, p):
            raise HarmonicError(f"table shape {self.values.shape} does not cover a space of size {self.space.size}")
        if self.values.dtype != object:
            self.values = self.values.astype(object)

    @property
    def p(self) -> int:
        return self.space.field.p

    @classmethod
    def zeros(cls, V: FqSpace) -> "FnTable":
        return cls(V, np.zeros((V.size, V.field.p), dtype=object))

    @classmethod
    def from_ints(cls, V: FqSpace, ints) -> "FnTable":
        vals = np.zeros((V.size, V.field.p), dtype=object)
        vals[:, 0] = list(ints)
        return cls(V, vals)

    @classmethod
    def constant(cls, V: FqSpace, c=1) -> "FnTable":
        return cls.from_ints(V, [c] * V.size)

    @classmethod
    def delta(cls, V: FqSpace, idx: int = 0) -> "FnTable":
        t = cls.zeros(V)
        t.values[idx, 0] = 1
        return t

    @classmethod
    def indicator(cls, V: FqSpace, indices) -> "FnTable":
        t = cls.zeros(V)
        for i in indices:
            t.values[int(i), 0] = 1
        return t

    @classmethod
    def from_cyclo(cls, V: FqSpace, vals) -> "FnTable":
        p = V.field.p
        arr = np.array([v.redundant() for v in vals], dtype=object).reshape(V.size, p)
        return cls(V, arr)

    def __call__(self, idx: int) -> CycloValue:
        return CycloValue.from_redundant(self.p, list(self.values[idx]))

    def to_cyclo(self) -> list[CycloValue]:
        return [self(i) for i in range(self.space.size)]

    def _same(self, other: "FnTable") -> None:
        if other.space != self.space:
            raise HarmonicError("functions live on different domains")

    def __add__(self, other):
        self._same(other)
        return FnTable(self.space, self.values + other.values)

    def __sub__(self, other):
        self._same(other)
        return FnTable(self.space, self.values - other.values)

    def __neg__(self):
        return FnTable(self.space, -self.values)

    def scale(self, c) -> "FnTable":
        if isinstance(c, CycloValue):
            return FnTable(self.space, _cyclo_mul_rows(self.values, np.array(c.redundant(), dtype=object), self.p))
        return FnTable(self.space, self.values * c)

    def __mul__(self, other: "FnTable") -> "FnTable":
        self._same(other)
        return FnTable(self.space, _cyclo_mul_rows(self.values, other.values, self.p))

    def __eq__(self, other):
        if not isinstance(other, FnTable):
            return NotImplemented
        return other.space == self.space and bool(np.all(_normalize(self.values) == _normalize(other.values)))

    def reflect(self) -> "FnTable":
        """x -> f(-x)."""
        return FnTable(self.space, self.values[self.space.negation_index()])

    def tensor(self, other: "FnTable") -> "FnTable":
        """(f (x) g)(a, b) = f(a) g(b) on the direct sum."""
        U = self.space.direct_sum(other.space)
        prod = _cyclo_mul_rows(other.values[:, None, :], self.values[None, :, :], self.p)
        return FnTable(U, prod.reshape(U.size, self.p))

    def support(self) -> np.ndarray:
        return np.nonzero(np.any(_normalize(self.values) != 0, axis=1))[0]

    def to_json(self) -> dict:
        return {"q": self.space.field.order, "dim": self.space.dim, "values": [v.to_json() for v in self.to_cyclo()]}


def pushforward(i: LinearMap, f: FnTable) -> FnTable:
    """i_* f (v') = sum over v with i(v) = v' of f(v)."""
    if f.space != i.source:
        raise HarmonicError("function domain is not the map's source")
    out = FnTable.zeros(i.target)
    np.add.at(out.values, i.images, f.values)
    return out


def pullback(i: LinearMap, g: FnTable) -> FnTable:
    """i^* g = g o i."""
    if g.space != i.target:
        raise HarmonicError("function domain is not the map's target")
    return FnTable(i.source, g.values[i.images])


def pair(f: FnTable, g: FnTable) -> CycloValue:
    """(f, g) = sum_v f(v) g(v)."""
    f._same(g)
    p = f.p
    S = f.values.T.dot(g.values)
    out = [0] * p
    for a in range(p):
        for b in range(p):
            out[(a + b) % p] += S[a, b]
    return CycloValue.from_redundant(p, out)


def total(f: FnTable) -> CycloValue:
    return CycloValue.from_redundant(f.p, list(f.values.sum(axis=0)))


# -- Fourier transform --------------------------------------------------------------


def _dft(values: np.ndarray, p: int, m: int) -> np.ndarray:
    """g(w) = sum_x f(x) zeta^(x . w) over F_p^m, one digit axis at a time."""
    if m == 0:
        return values.copy()
    arr = values.reshape((p,) * m + (p,))
    for axis in range(m):
        out = np.zeros_like(arr)
        for x in range(p):
            src = np.take(arr, x, axis=axis)
            for w in range(p):
                sl = [slice(None)] * (m + 1)
                sl[axis] = w
                out[tuple(sl)] += np.roll(src, (x * w) % p, axis=-1)
        arr = out
    return arr.reshape(p**m, p)


@dataclass(frozen=True)
class Duality:
    """A nondegenerate F_q-bilinear pairing between two spaces, as F_q and F_p matrices."""

    source: FqSpace
    target: FqSpace
    matrix: tuple

    @classmethod
    def make(cls, V: FqSpace, Vd: FqSpace, M) -> "Duality":
        F = V.field
        M = tuple(tuple(int(c) for c in r) for r in M)
        if len(M) != V.dim or any(len(r) != Vd.dim for r in M):
            raise HarmonicError("pairing matrix shape does not match the spaces")
        if V.dim != Vd.dim or (V.dim and rank(F, [list(r) for r in M]) != V.dim):
            raise HarmonicError("degenerate pairing between the window and its dual")
        return cls(V, Vd, M)

    @cached_property
    def form(self) -> np.ndarray:
        return fp_form(self.source.field, self.matrix)

    def direct_sum(self, other: "Duality") -> "Duality":
        n1, n2 = self.source.dim, other.source.dim
        m1 = self.target.dim
        M = [list(r) + [0] * other.target.dim for r in self.matrix]
        M += [[0] * m1 + list(r) for r in other.matrix]
        return Duality(self.source.direct_sum(other.source), self.target.direct_sum(other.target), tuple(map(tuple, M)))

    def value(self, x: int, y: int) -> int:
        """<x, y> in F_q for indices x of the source and y of the target."""
        F = self.source.field
        xs, ys = self.source.coords(x), self.target.coords(y)
        acc = 0
        for i, a in enumerate(xs):
            if a:
                for j, b in enumerate(ys):
                    if b and self.matrix[i][j]:
                        acc = F.add(acc, F.mul(a, F.mul(self.matrix[i][j], b)))
        return acc


def window_duality(W: AdeleWindow) -> tuple[Duality, AdeleWindow]:
    """The residue pairing of W with its dual window, for omega = dt."""
    Wd = dual_window(W)
    return Duality.make(space_of(W), space_of(Wd), pairing_matrix(W, Wd)), Wd


def fourier(f: FnTable, duality: Duality) -> FnTable:
    """f^(y) = sum_x psi(<x, y>) f(x) on the target of the pairing."""
    if f.space != duality.source:
        raise HarmonicError("function domain is not the pairing's source")
    V, Vd = duality.source, duality.target
    p = V.field.p
    g = _dft(f.values, p, V.fp_dim)
    w = (Vd.digits @ duality.form.T) % p  # w = B y
    return FnTable(Vd, g[_digits_to_index(w, p)])


def inverse_fourier_check(f: FnTable, duality: Duality, back: Duality) -> bool:
    """f^^ = |V| * (f o negation) for a transform followed by its transpose."""
    ff = fourier(fourier(f, duality), back)
    return ff == f.reflect().scale(f.space.size)


def transpose(duality: Duality) -> Duality:
    return Duality(duality.target, duality.source, tuple(zip(*duality.matrix)) if duality.matrix else ())


# -- subspaces -------------------------------------------------------------------------


def subspace_indices(V: FqSpace, rows) -> np.ndarray:
    """Indices of every vector in the F_q-span of ``rows``."""
    F = V.field
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return np.array([0], dtype=np.int64)
    red, _ = rref(F, rows)
    p, k = F.p, F.abs_degree
    gens = []
    for r in red:
        for s in range(k):
            gens.append([F.mul(p**s, c) for c in r])
    G = np.array([sum((F.coordinates(c) for c in g), []) for g in gens], dtype=np.int64)
    n = len(gens)
    coeffs = (np.arange(p**n, dtype=np.int64)[:, None] // (p ** np.arange(n, dtype=np.int64))[None, :]) % p
    return np.unique(_digits_to_index((coeffs @ G) % p, p))


def annihilator(duality: Duality, rows) -> list[list[int]]:
    """Rows spanning {y : <x, y> = 0 for all x in span(rows)} in the target."""
    F = duality.source.field
    M = duality.matrix
    eqs = [[_dot(F, r, [M[i][j] for i in range(len(M))]) for j in range(duality.target.dim)] for r in rows if any(r)]
    if not eqs:
        return [[int(i == j) for j in range(duality.target.dim)] for i in range(duality.target.dim)]
    return nullspace(F, eqs, duality.target.dim)


def _dot(F: Field, a, b) -> int:
    acc = 0
    for x, y in zip(a, b):
        if x and y:
            acc = F.add(acc, F.mul(x, y))
    return acc


def subwindow_rows(W: AdeleWindow, D: Divisor) -> list[list[int]]:
    """Coordinate rows spanning A(D)/A(D_low) inside W (requires D_low <= D <= D_high)."""
    if not (W.d_low <= D and D <= W.d_high):
        raise HarmonicError("divisor is not between the window bounds")
    rows = []
    for k, (x, e, _) in enumerate(W.labels()):
        if e >= -D[x]:
            rows.append([int(i == k) for i in range(W.dim)])
    return rows


# -- Parseval and Riemann-Roch ------------------------------------------------------------


def rr_window(D: Divisor, extra=()) -> AdeleWindow:
    """W(D - a inf, D + b inf) with deg D_low <= -1 <= deg D_high."""
    F = D.field
    inf = Place.infinity(F)
    a = max(0, D.degree() + 1)
    b = max(0, -1 - D.degree())
    S = set(D.support) | {inf} | set(extra)
    return make_window(S, D - Divisor.make(F, {inf: a}), D + Divisor.make(F, {inf: b}))


@dataclass(frozen=True)
class ParsevalReport:
    divisor: str
    q: int
    window_dim: int
    lhs_exponent: int  # (delta_K, delta_D) = q^lhs
    transformed_exponent: int  # (delta_K^, delta_D^) = q^this
    volume_exponent: int  # |V| = q^this
    chi_high: int  # l(D_high) - deg D_high
    l_D: int
    l_K_minus_D: int
    perp_matches_global: bool
    parseval_holds: bool
    rr_identity_holds: bool
    table_checked: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


def rr_via_parseval(D: Divisor, *, tables: bool | None = None) -> ParsevalReport:
    """Riemann-Roch for D on P^1 read off from Parseval on a window around D.

    Exponents come from ranks; when the window is small enough (or ``tables``
    is set) the two pairings are also evaluated on explicit function tables.
    """
    F = D.field
    q = F.order
    K = Divisor.canonical(F)
    W = rr_window(D)
    duality, Wd = window_duality(W)
    V, Vd = duality.source, duality.target
    gamma = global_image(W)
    sub_D = subwindow_rows(W, D)
    gamma_perp = annihilator(duality, gamma)
    perp_ok = span_equal(F, gamma_perp, global_image(Wd)) if gamma_perp else not global_image(Wd)
    sub_KD = subwindow_rows(Wd, K - D)
    if not span_equal(F, annihilator(duality, sub_D), sub_KD):
        raise HarmonicError("A(D)-perp is not A(K - D) in the dual window")
    r_gamma = rank(F, gamma)
    lhs = r_gamma + rank(F, sub_D) - rank(F, gamma + sub_D)  # dim(Gamma cap A(D))
    # transformed side: |Gamma| delta_{Gamma-perp} and |A(D)/A(D_low)| delta_{A(K-D)}
    r_perp = rank(F, gamma_perp)
    cap = r_perp + rank(F, sub_KD) - rank(F, gamma_perp + sub_KD) if gamma_perp and sub_KD else 0
    transformed = r_gamma + rank(F, sub_D) + cap
    vol = W.dim
    parseval = transformed == vol + lhs
    chi = r_gamma - W.d_high.degree()
    l_D, l_KD = lhs, cap
    rr = l_D - l_KD == D.degree() + chi and chi == 1

    table_checked = False
    if tables or (tables is None and q**W.dim <= 4096):
        delta_K = FnTable.indicator(V, subspace_indices(V, gamma))
        delta_D = FnTable.indicator(V, subspace_indices(V, sub_D))
        a = pair(delta_K, delta_D)
        b = pair(fourier(delta_K, duality), fourier(delta_D, duality))
        if a != q**lhs or b != q**transformed or b != a * q**vol:
            raise HarmonicError("table evaluation disagrees with the rank computation")
        table_checked = True
    if not perp_ok:
        raise HarmonicError("Gamma-perp differs from the embedded L(K - D_low)")
    return ParsevalReport(
        str(D), q, W.dim, lhs, transformed, vol, chi, l_D, l_KD, perp_ok, parseval, rr and l_D == l_dim(D), table_checked
    )


# -- the cube of pushforwards and pullbacks --------------------------------------------


@dataclass(frozen=True)
class CubeReport:
    steps: tuple  # CycloValue per step of the chain
    tensor_transform_ok: bool

    @property
    def holds(self) -> bool:
        return self.tensor_transform_ok and all(s == self.steps[0] for s in self.steps)

    def to_json(self) -> dict:
        return {"steps": [s.to_json() for s in self.steps], "tensor_transform_ok": self.tensor_transform_ok, "holds": self.holds}


def cube_chain(f0: FnTable, f1: FnTable, duality: Duality) -> CubeReport:
    """Evaluate each expression of the chain from <F^, G^> down to |V| <F, G o neg>."""
    f0._same(f1)
    V, Vd = duality.source, duality.target
    size = V.size
    F0, F1 = fourier(f0, duality), fourier(f1, duality)
    s1 = pair(F0, F1)
    i_d, beta_d = diagonal(Vd), to_point(Vd)
    s2 = pushforward(beta_d, pullback(i_d, F0.tensor(F1)))(0)
    big = fourier(f0.tensor(f1), duality.direct_sum(duality))
    tensor_ok = big == F0.tensor(F1)
    s3 = pushforward(beta_d, pullback(i_d, big))(0)
    g = f0.tensor(f1.reflect())
    jg = pushforward(difference(V), g)
    s4 = pushforward(beta_d, fourier(jg, duality))(0)
    s5 = pullback(from_point(V), jg)(0) * size
    s6 = pushforward(to_point(V), pullback(diagonal(V), g))(0) * size
    s7 = pair(f0, f1.reflect()) * size
    return CubeReport((s1, s2, s3, s4, s5, s6, s7), tensor_ok)


def cube_check(f0: FnTable, f1: FnTable, duality: Duality) -> bool:
    return cube_chain(f0, f1, duality).holds


def random_table(V: FqSpace, rng: np.random.Generator, lo: int = -3, hi: int = 4) -> FnTable:
    vals = rng.integers(lo, hi, size=(V.size, V.field.p))
    return FnTable(V, vals.astype(object))


# -- Bruhat types ------------------------------------------------------------------------

KINDS = ("delta_D", "delta_K", "delta_H0", "delta_H1")
EXPECTED_FLAGS = {"delta_D": (True, True), "delta_H1": (False, True), "delta_K": (False, False), "delta_H0": (True, False)}
TYPE_OF_FLAGS = {(True, True): "D", (False, True): "E", (False, False): "D'", (True, False): "E'"}
FOURIER_TYPE = {"D": "D", "E": "E'", "E'": "E", "D'": "D'"}


def default_levels(D: Divisor) -> tuple[int, int, int]:
    """Three window sizes for which both L(D + n inf) and L(K - D + n inf) are nonzero."""
    n0 = max(1, -D.degree(), D.degree() + 2)
    return (n0, n0 + 1, n0 + 2)


@dataclass(frozen=True)
class DeltaCatalogEntry:
    kind: str
    divisor: Divisor
    levels: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise HarmonicError(f"unknown catalog kind {self.kind!r}")
        if not self.levels:
            object.__setattr__(self, "levels", default_levels(self.divisor))
        if len(self.levels) < 3:
            raise HarmonicError("a window family needs at least three windows")

    @property
    def support_bounded(self) -> bool:
        return EXPECTED_FLAGS[self.kind][0]

    @property
    def locally_constant(self) -> bool:
        return EXPECTED_FLAGS[self.kind][1]


def family_window(D: Divisor, n: int) -> AdeleWindow:
    """W(D - n inf, D + n inf) over S = supp D + inf."""
    F = D.field
    inf = Place.infinity(F)
    S = set(D.support) | {inf}
    return make_window(S, D - Divisor.make(F, {inf: n}), D + Divisor.make(F, {inf: n}), strict=False)


def catalog_table(entry: DeltaCatalogEntry, W: AdeleWindow) -> FnTable:
    """The entry's function restricted to the window W."""
    V = space_of(W)
    D = entry.divisor
    gamma = global_image(W)
    sub = subwindow_rows(W, D)
    if entry.kind == "delta_D":
        rows = sub
    elif entry.kind == "delta_K":
        rows = gamma
    elif entry.kind == "delta_H1":
        rows = gamma + sub
    else:
        rows = global_image(W, D)
    return FnTable.indicator(V, subspace_indices(V, rows))


def _support_level(f: FnTable, W: AdeleWindow, D: Divisor, n: int) -> int:
    """Smallest e with supp f inside A(D + e inf)/A(D_low)."""
    inf = Place.infinity(W.field)
    supp = set(f.support().tolist())
    for e in range(-n, n + 1):
        sub = subspace_indices(space_of(W), subwindow_rows(W, D + Divisor.make(W.field, {inf: e})))
        if supp <= set(sub.tolist()):
            return e
    return n + 1


def _invariance_level(f: FnTable, W: AdeleWindow, D: Divisor, n: int) -> int:
    """Largest e with f invariant under translation by A(D + e inf)/A(D_low)."""
    V = space_of(W)
    inf = Place.infinity(W.field)
    p = W.field.p
    norm = _normalize(f.values)
    for e in range(n, -n - 1, -1):
        rows = subwindow_rows(W, D + Divisor.make(W.field, {inf: e}))
        ok = True
        for r in rows:
            for s in range(W.field.abs_degree):
                shift = [W.field.mul(p**s, c) for c in r]
                sd = np.array(sum((W.field.coordinates(c) for c in shift), []), dtype=np.int64)
                moved = _digits_to_index((V.digits + sd[None, :]) % p, p)
                if not np.all(norm[moved] == norm):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return e
    return -n - 1


def _trend(levels: list[int], what: str) -> int:
    """0 if the levels are constant, +1 or -1 if strictly monotone; otherwise raise."""
    steps = {(b > a) - (b < a) for a, b in zip(levels, levels[1:])}
    if steps == {0}:
        return 0
    if len(steps) == 1:
        return steps.pop()
    raise HarmonicError(f"{what} levels {levels} are neither stable nor monotone; enlarge the window family")


def classify_tables(tables, windows, centre: Divisor, levels) -> tuple[bool, bool]:
    """(support_bounded, locally_constant) from level sequences across the family.

    A support level that keeps growing means unbounded support; an invariance
    level that keeps shrinking means no fixed subgroup leaves f invariant.
    """
    s = [_support_level(f, W, centre, n) for f, W, n in zip(tables, windows, levels)]
    inv = [_invariance_level(f, W, centre, n) for f, W, n in zip(tables, windows, levels)]
    return _trend(s, "support") <= 0, _trend(inv, "invariance") >= 0


def bruhat_type(entry: DeltaCatalogEntry) -> str:
    """Classify the entry as D, E, D' or E' from its behaviour across the window family."""
    windows = [family_window(entry.divisor, n) for n in entry.levels]
    tables = [catalog_table(entry, W) for W in windows]
    return TYPE_OF_FLAGS[classify_tables(tables, windows, entry.divisor, entry.levels)]


def transformed_type(entry: DeltaCatalogEntry) -> str:
    """Type of the Fourier transform, classified on the dual family centred at K - D."""
    F = entry.divisor.field
    centre = Divisor.canonical(F) - entry.divisor
    tables, windows = [], []
    for n in entry.levels:
        duality, Wd = window_duality(family_window(entry.divisor, n))
        f = catalog_table(entry, family_window(entry.divisor, n))
        tables.append(fourier(f, duality))
        windows.append(Wd)
    return TYPE_OF_FLAGS[classify_tables(tables, windows, centre, entry.levels)]


def fourier_swap_check(entry: DeltaCatalogEntry) -> bool:
    return transformed_type(entry) == FOURIER_TYPE[bruhat_type(entry)]


def subgroup_rule_check(W: AdeleWindow, D: Divisor) -> tuple[bool, int]:
    """Is the transform of char A(D) equal to q^(deg D - deg D_low) char A(K - D)?"""
    F = W.field
    duality, Wd = window_duality(W)
    V, Vd = duality.source, duality.target
    f = FnTable.indicator(V, subspace_indices(V, subwindow_rows(W, D)))
    e = D.degree() - W.d_low.degree()
    expected = FnTable.indicator(Vd, subspace_indices(Vd, subwindow_rows(Wd, Divisor.canonical(F) - D))).scale(F.order**e)
    return fourier(f, duality) == expected, e
