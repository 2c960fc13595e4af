"""Curves over F_q: P^1 in full, smooth plane projective curves for point counting.

Provides closed points, divisors, Riemann-Roch bases on P^1, and zeta series
in T = q^-s from closed-point counts.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb

import numpy as np
import sympy

from .algebra import (
    Field,
    field_of_order,
    make_field,
    monic_irreducibles,
    poly_divmod,
    poly_monic,
    poly_mul,
    poly_pow,
    poly_trim,
)
from .series import ParseError, Place, RationalFunction, SeriesError, parse_poly_1d

ClosedPoint = Place

MAX_DEGREE = 12
ENUMERATION_CAP = 1 << 12  # largest q^d for which points are listed explicitly


class CurveError(ValueError):
    """Contract violation: bad model, singular curve, degree cap exceeded."""


# -- models ---------------------------------------------------------------------


@dataclass(frozen=True)
class P1Model:
    q: int

    @property
    def field(self) -> Field:
        return field_of_order(self.q)

    genus = 0


@dataclass(frozen=True)
class PlaneModel:
    """Projective plane curve F(x, y, z) = 0 with integer coefficients."""

    q: int
    poly: str
    terms: tuple = dc_field(compare=False, default=())
    degree: int = dc_field(compare=False, default=0)

    def __post_init__(self):
        x, y, z = sympy.symbols("x y z")
        try:
            P = sympy.Poly(sympy.sympify(self.poly.replace("^", "**")), x, y, z, domain=sympy.ZZ)
        except (sympy.SympifyError, sympy.PolynomialError, TypeError) as exc:
            raise ParseError(self.poly, str(exc)) from None
        if not P.is_homogeneous:
            raise CurveError(f"plane model {self.poly!r} is not homogeneous")
        p = self.field.p
        terms = tuple((m, int(c) % p) for m, c in P.terms() if int(c) % p)
        if not terms:
            raise CurveError("polynomial vanishes identically mod p")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "degree", P.total_degree())

    @property
    def field(self) -> Field:
        return field_of_order(self.q)

    @property
    def genus(self) -> int:
        d = self.degree
        return (d - 1) * (d - 2) // 2

    def partials(self):
        out = []
        for k in range(3):
            ts = []
            for m, c in self.terms:
                if m[k]:
                    mm = list(m)
                    mm[k] -= 1
                    ts.append((tuple(mm), c * m[k]))
            out.append(tuple(ts))
        return out


def parse_model(text: str | dict):
    """``{"q":2,"model":"p1"}`` or ``{"q":2,"model":"plane","poly":"y^2*z+y*z^2+x^3"}``."""
    data = json.loads(text) if isinstance(text, str) else dict(text)
    try:
        q = int(data["q"])
        kind = data["model"]
    except (KeyError, TypeError, ValueError) as exc:
        raise CurveError(f"bad model description: {exc}") from None
    if kind == "p1":
        return P1Model(q)
    if kind == "plane":
        return PlaneModel(q, data["poly"])
    raise CurveError(f"unknown model {kind!r}")


# -- point counting -------------------------------------------------------------


class _VecField:
    """numpy view of a field's multiplication and addition tables."""

    def __init__(self, F: Field):
        self.F = F
        q = F.order
        if F.base is None:
            self.exp = self.log = None
        else:
            self.exp = np.array(F._exp, dtype=np.int64)
            self.log = np.array(F._log, dtype=np.int64)
        digits = np.zeros((q, F.abs_degree), dtype=np.int64)
        for a in range(q):
            digits[a] = F.coordinates(a)
        self.digits = digits
        self.weights = F.p ** np.arange(F.abs_degree, dtype=np.int64)

    def mul(self, a, b):
        F = self.F
        if self.exp is None:
            return (a * b) % F.p
        out = self.exp[self.log[a] + self.log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def add(self, a, b):
        F = self.F
        if self.exp is None:
            return (a + b) % F.p
        if F.p == 2:
            return a ^ b
        return ((self.digits[a] + self.digits[b]) % F.p) @ self.weights

    def const(self, c: int, shape):
        return np.full(shape, c % self.F.p, dtype=np.int64)

    def power(self, a, e: int):
        if e == 0:
            return np.ones_like(a)
        if self.exp is None:
            return np.array([pow(int(v), e, self.F.p) for v in range(self.F.p)], dtype=np.int64)[a]
        n = self.F.order - 1
        out = self.exp[(self.log[a] * e) % n]
        return np.where(a == 0, 0, out)

    def evaluate(self, terms, xs, ys, zs):
        shape = np.broadcast(xs, ys, zs).shape
        acc = np.zeros(shape, dtype=np.int64)
        cache = {}

        def pw(name, arr, e):
            key = (name, e)
            if key not in cache:
                cache[key] = np.broadcast_to(self.power(arr, e), shape)
            return cache[key]

        for (i, j, k), c in terms:
            term = self.const(c, shape)
            if i:
                term = self.mul(term, pw("x", xs, i))
            if j:
                term = self.mul(term, pw("y", ys, j))
            if k:
                term = self.mul(term, pw("z", zs, k))
            acc = self.add(acc, term)
        return acc


def _plane_points(model: PlaneModel, k: int, check_smooth: bool) -> int:
    q = model.q
    F0 = model.field
    if q**k > ENUMERATION_CAP:
        raise CurveError(f"point count over F_{q}^{k} exceeds enumeration cap {ENUMERATION_CAP}")
    F = make_field(F0.p, F0.abs_degree * k)
    V = _VecField(F)
    n = F.order
    xs = np.arange(n, dtype=np.int64)
    partials = model.partials() if check_smooth else None
    count = 0

    def scan(X, Y, Z):
        nonlocal count
        vals = V.evaluate(model.terms, X, Y, Z)
        mask = vals == 0
        hits = int(mask.sum())
        if hits and partials is not None:
            sing = mask.copy()
            for part in partials:
                if part:
                    sing &= V.evaluate(part, X, Y, Z) == 0
            if sing.any():
                raise CurveError(f"plane model {model.poly!r} is singular over F_{n}")
        count += hits

    one = np.ones(1, dtype=np.int64)
    zero = np.zeros(1, dtype=np.int64)
    for xv in range(n):
        scan(np.full(n, xv, dtype=np.int64), xs, one)  # (x : y : 1)
    scan(xs, one, zero)  # (x : 1 : 0)
    scan(one, zero, zero)  # (1 : 0 : 0)
    return count


def mobius(n: int) -> int:
    res, d, m = 1, 2, n
    while d * d <= m:
        if m % d == 0:
            m //= d
            if m % d == 0:
                return 0
            res = -res
        d += 1
    if m > 1:
        res = -res
    return res


def closed_point_counts(rational_counts: dict[int, int]) -> dict[int, int]:
    """N_d from #C(F_{q^k}) by Mobius inversion: N_d = (1/d) sum_{e | d} mu(d/e) #C(F_{q^e})."""
    out = {}
    for d in sorted(rational_counts):
        s = sum(mobius(d // e) * rational_counts[e] for e in range(1, d + 1) if d % e == 0)
        if s % d:
            raise CurveError(f"Mobius inversion gave a non-integer count at degree {d}")
        out[d] = s // d
    return out


@dataclass(frozen=True)
class ClosedPoints:
    model: object
    rational_counts: dict  # k -> #C(F_{q^k})
    counts: dict  # d -> number of closed points of degree d
    points: dict  # d -> list of Place (P^1, small degrees only)


def closed_points(model, max_degree: int, *, check_smooth: bool = True, list_points: bool = False) -> ClosedPoints:
    """Closed-point counts by degree; on P^1, ``list_points`` also lists places of small degree."""
    if max_degree < 1 or max_degree > MAX_DEGREE:
        raise CurveError(f"max_degree must lie in [1, {MAX_DEGREE}]")
    if isinstance(model, P1Model):
        F = model.field
        q = model.q
        rational = {k: q**k + 1 for k in range(1, max_degree + 1)}
        counts = closed_point_counts(rational)
        points = {}
        for d in range(1, max_degree + 1 if list_points else 1):
            if q**d > ENUMERATION_CAP:
                break
            pts = [Place(F, f) for f in monic_irreducibles(F, d)]
            if d == 1:
                pts.append(Place.infinity(F))
            if len(pts) != counts[d]:
                raise CurveError("enumerated irreducibles disagree with Mobius count")  # pragma: no cover
            points[d] = pts
        return ClosedPoints(model, rational, counts, points)
    if isinstance(model, PlaneModel):
        rational = {k: _plane_points(model, k, check_smooth and k <= 2) for k in range(1, max_degree + 1)}
        return ClosedPoints(model, rational, closed_point_counts(rational), {})
    raise CurveError(f"unsupported model {model!r}")


# -- zeta series ------------------------------------------------------------------


@dataclass(frozen=True)
class ZetaSeries:
    """Power series sum c_n T^n with an optional rational fit num(T)/den(T)."""

    q: int
    coeffs: tuple
    fit: tuple | None = None  # (numerator coeffs, denominator coeffs), lowest degree first

    def __post_init__(self):
        if self.fit is not None:
            num, den = self.fit
            if _series_of_fit(num, den, len(self.coeffs)) != list(self.coeffs):
                raise CurveError("rational fit does not reproduce the stored coefficients")

    def to_json(self) -> dict:
        def enc(c):
            c = Fraction(c)
            return c.numerator if c.denominator == 1 else str(c)

        out = {"q": self.q, "coeffs": [enc(c) for c in self.coeffs]}
        if self.fit is not None:
            out["fit"] = {"numerator": [enc(c) for c in self.fit[0]], "denominator": [enc(c) for c in self.fit[1]]}
        return out


def _series_of_fit(num, den, n: int) -> list:
    den = [Fraction(c) for c in den]
    if not den or den[0] == 0:
        raise CurveError("fit denominator must have a nonzero constant term")
    out = []
    for k in range(n):
        acc = Fraction(num[k]) if k < len(num) else Fraction(0)
        for i in range(1, min(k, len(den) - 1) + 1):
            acc -= den[i] * out[k - i]
        v = acc / den[0]
        out.append(int(v) if v.denominator == 1 else v)
    return out


def poly_mul_int(a, b) -> list:
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def euler_product(counts: dict[int, int], N: int) -> list[int]:
    """Coefficients through T^N of prod_d (1 - T^d)^(-N_d)."""
    series = [1] + [0] * N
    for d, n in sorted(counts.items()):
        if d > N or n == 0:
            continue
        factor = [0] * (N + 1)
        for k in range(N // d + 1):
            factor[k * d] = comb(n + k - 1, k)
        series = poly_mul_int(series, factor)[: N + 1]
    return series


def effective_divisor_counts(points_by_degree: dict[int, int], N: int) -> list[int]:
    """Number of effective divisors of each degree <= N, by dynamic programming.

    ``table[n]`` after processing degree d counts divisors supported on points of
    degree <= d; a degree-d block contributes k points (with repetition) in
    C(N_d + k - 1, k) ways.
    """
    table = [1] + [0] * N
    for d in range(1, N + 1):
        n_d = points_by_degree.get(d, 0)
        if not n_d:
            continue
        ways = [comb(n_d + k - 1, k) for k in range(N // d + 1)]
        table = [sum(table[n - k * d] * ways[k] for k in range(n // d + 1)) for n in range(N + 1)]
    return table


def zeta_from_point_counts(rational_counts: dict[int, int], N: int) -> list[int]:
    """Zeta coefficients from #C(F_{q^k}) alone, via n c_n = sum_k #C(F_{q^k}) c_{n-k}."""
    c = [Fraction(1)]
    for n in range(1, N + 1):
        c.append(sum(rational_counts[k] * c[n - k] for k in range(1, n + 1)) / n)
    if any(x.denominator != 1 for x in c):
        raise CurveError("point counts are inconsistent with an integral zeta series")
    return [int(x) for x in c]


def zeta_from_counts(model, N: int) -> ZetaSeries:
    if N < 0 or N > MAX_DEGREE:
        raise CurveError(f"N must lie in [0, {MAX_DEGREE}]")
    cp = closed_points(model, max(N, 1))
    coeffs = euler_product(cp.counts, N)
    fit = fit_rational(model.q, coeffs, model.genus)
    return ZetaSeries(model.q, tuple(coeffs), fit)


def fit_rational(q: int, coeffs, genus: int):
    """Fit P(T)/((1-T)(1-qT)) with deg P <= 2g; None if the coefficients do not allow it."""
    den = [1, -(1 + q), q]
    prod = poly_mul_int(list(coeffs), den)[: len(coeffs)]
    num = prod[: 2 * genus + 1]
    if any(prod[2 * genus + 1 :]):
        return None
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return (tuple(num), tuple(den))


def functional_equation_check(Z: ZetaSeries, g: int) -> bool:
    """q^g T^(2g) P(1/(qT)) == P(T) for the numerator P of the fit."""
    if Z.fit is None:
        raise CurveError("zeta series has no rational fit")
    num, den = Z.fit
    if list(den) != [1, -(1 + Z.q), Z.q]:
        raise CurveError("fit denominator must be (1-T)(1-qT)")
    P = list(num) + [0] * max(0, 2 * g + 1 - len(num))
    if len(P) > 2 * g + 1:
        return False
    q = Z.q
    # coefficient of T^(2g-i) in q^g T^(2g) P(1/(qT)) is q^(g-i) P_i
    lhs = [Fraction(0)] * (2 * g + 1)
    for i, c in enumerate(P):
        lhs[2 * g - i] = Fraction(q) ** (g - i) * c
    return lhs == [Fraction(c) for c in P]


# -- divisors on P^1 ---------------------------------------------------------------


@dataclass(frozen=True)
class Divisor:
    field: Field
    mult: tuple  # sorted ((Place, n), ...) with n != 0

    @classmethod
    def make(cls, F: Field, mult: dict) -> "Divisor":
        items = [(p, int(n)) for p, n in mult.items() if n]
        for p, _ in items:
            if p.field is not F:
                raise CurveError("place over a different field")
        items.sort(key=lambda pn: pn[0].sort_key())
        return cls(F, tuple(items))

    @classmethod
    def zero(cls, F: Field) -> "Divisor":
        return cls(F, ())

    @classmethod
    def canonical(cls, F: Field) -> "Divisor":
        """(dt) = -2 * inf."""
        return cls.make(F, {Place.infinity(F): -2})

    def as_dict(self) -> dict:
        return dict(self.mult)

    def __getitem__(self, place: Place) -> int:
        return self.as_dict().get(place, 0)

    @property
    def support(self) -> list[Place]:
        return [p for p, _ in self.mult]

    def degree(self) -> int:
        return sum(n * p.degree for p, n in self.mult)

    def __add__(self, other: "Divisor") -> "Divisor":
        d = self.as_dict()
        for p, n in other.mult:
            d[p] = d.get(p, 0) + n
        return Divisor.make(self.field, d)

    def __neg__(self):
        return Divisor.make(self.field, {p: -n for p, n in self.mult})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k: int) -> "Divisor":
        return Divisor.make(self.field, {p: k * n for p, n in self.mult})

    def __le__(self, other: "Divisor") -> bool:
        diff = (other - self).as_dict()
        return all(n >= 0 for n in diff.values())

    def is_effective(self) -> bool:
        return all(n >= 0 for _, n in self.mult)

    def __str__(self):
        if not self.mult:
            return "0"
        parts = []
        for p, n in self.mult:
            parts.append(f"{'-' if n < 0 else '+'} {abs(n)}*({p.name()})")
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


_TERM = re.compile(r"\s*([+-]?)\s*(\d*)\s*\*?\s*(?:\(([^()]*(?:\([^()]*\)[^()]*)*)\)|(inf|oo|∞))\s*")


def parse_divisor(F: Field, text: str) -> Divisor:
    """Parse ``2*(t) + 1*(t^2+t+1) - 3*(inf)``; a bare ``inf`` is also accepted."""
    pos = 0
    mult: dict = {}
    text_s = text.strip()
    if text_s in ("", "0"):
        return Divisor.zero(F)
    while pos < len(text):
        if not text[pos:].strip():
            break
        m = _TERM.match(text, pos)
        if not m:
            raise ParseError(text, "expected [+|-] n*(place)", pos)
        sign = -1 if m.group(1) == "-" else 1
        n = int(m.group(2)) if m.group(2) else 1
        name = (m.group(3) or m.group(4)).strip()
        if name in ("inf", "oo", "infinity", "∞"):
            place = Place.infinity(F)
        else:
            try:
                place = Place(F, poly_monic(F, parse_poly_1d(F, name)))
            except SeriesError as exc:
                raise ParseError(text, str(exc), m.start(3)) from None
        mult[place] = mult.get(place, 0) + sign * n
        pos = m.end()
    return Divisor.make(F, mult)


def principal_denominator(D: Divisor) -> RationalFunction:
    """h = prod over finite places of pi_x^{n_x}, so L(D) = {g/h : deg g <= deg D}."""
    F = D.field
    num, den = (1,), (1,)
    for p, n in D.mult:
        if p.is_infinite:
            continue
        if n > 0:
            num = poly_mul(F, num, poly_pow(F, p.poly, n))
        else:
            den = poly_mul(F, den, poly_pow(F, p.poly, -n))
    return RationalFunction(F, num, den)


def rr_space_basis(D: Divisor) -> list[RationalFunction]:
    """Basis t^j / h (0 <= j <= deg D) of L(D) on P^1."""
    if not isinstance(D, Divisor):
        raise CurveError("rr_space_basis needs a Divisor on P^1")
    F = D.field
    h = principal_denominator(D)
    hinv = h.inverse()
    return [RationalFunction.monomial(F, j) * hinv for j in range(D.degree() + 1)]


def l_dim(D: Divisor) -> int:
    return max(0, D.degree() + 1)


def divisor_of(f: RationalFunction, places) -> dict:
    """ord_x(f) at the listed places."""
    return {p: f.order_at(p) for p in places}


def factor_places(F: Field, poly) -> list[tuple[Place, int]]:
    """Factor a nonzero polynomial into monic irreducible places with multiplicities."""
    poly = poly_monic(F, poly_trim(poly))
    if not poly:
        raise CurveError("cannot factor the zero polynomial")
    out = []
    d = 1
    while len(poly) - 1 >= 2 * d:
        for pi in monic_irreducibles(F, d):
            e = 0
            while True:
                qt, r = poly_divmod(F, poly, pi)
                if r:
                    break
                poly, e = qt, e + 1
            if e:
                out.append((Place(F, pi), e))
        d += 1
    if len(poly) > 1:
        pl = Place(F, poly)
        for i, (p, e) in enumerate(out):
            if p == pl:
                out[i] = (p, e + 1)
                break
        else:
            out.append((pl, 1))
    return out
