"""Truncated Laurent series in one variable and iterated Laurent series in two.

A one-variable rational function is expanded at a place of the projective
line.  At a place of degree d > 1 the expansion is taken at a root alpha of
the place polynomial inside its residue field F_{q^d}, in the local
parameter ``s = t - alpha``; the coefficients then live in F_{q^d} and the
residue handed to pairings is the trace down to F_q.

Two-variable rational functions are expanded in E((x))((y)) where y is the
local equation of a curve and x a transversal coordinate.  Each y-level is
an exact rational function of x, so truncation only ever happens in the
number of levels and in the x-precision used for display; residues are read
from the exact level and are therefore always certified.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from .algebra import (
    Field,
    FqElem,
    is_irreducible,
    poly_add,
    poly_compose,
    poly_divmod,
    poly_gcd,
    poly_monic,
    poly_mul,
    poly_neg,
    poly_pow,
    poly_scale,
    poly_sub,
    poly_trim,
)


class SeriesError(ValueError):
    """Contract violation in series construction or expansion."""


class ParseError(ValueError):
    def __init__(self, text: str, message: str, column: int | None = None):
        where = f" at column {column}" if column is not None else ""
        super().__init__(f"cannot parse {text!r}{where}: {message}")
        self.text = text
        self.column = column


# -- places ---------------------------------------------------------------------


@dataclass(frozen=True)
class Place:
    """A closed point of P^1 over ``field``: a monic irreducible, or infinity (poly None)."""

    field: Field
    poly: tuple[int, ...] | None

    def __post_init__(self):
        if self.poly is not None:
            poly = poly_trim(self.poly)
            if len(poly) < 2 or poly[-1] != 1:
                raise SeriesError(f"place polynomial {self.poly} must be monic of degree >= 1")
            if not is_irreducible(self.field, poly):
                raise SeriesError(f"place polynomial {self.poly} is reducible")
            object.__setattr__(self, "poly", poly)

    @classmethod
    def infinity(cls, field: Field) -> "Place":
        return cls(field, None)

    @property
    def is_infinite(self) -> bool:
        return self.poly is None

    @property
    def degree(self) -> int:
        return 1 if self.poly is None else len(self.poly) - 1

    def residue_field(self) -> Field:
        if self.degree == 1:
            return self.field
        return self.field.extension(self.poly)

    def root(self) -> int:
        """Encoding of a root alpha of the place polynomial in its residue field."""
        if self.poly is None:
            raise SeriesError("infinity has no affine root")
        if self.degree == 1:
            return self.field.neg(self.poly[0])
        return self.field.order  # the class of x in F[x]/(poly)

    def name(self) -> str:
        if self.poly is None:
            return "inf"
        return format_poly(self.poly, "t")

    def sort_key(self):
        return (self.poly is None, self.degree, self.poly or ())

    def __repr__(self):
        return f"Place({self.name()})"


def format_poly(poly, var: str = "t") -> str:
    terms = []
    for i in range(len(poly) - 1, -1, -1):
        c = poly[i]
        if not c:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mono:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        else:
            terms.append(f"{c}*{mono}")
    return "+".join(terms) if terms else "0"


# -- one-variable rational functions ----------------------------------------------


@dataclass(frozen=True)
class RationalFunction:
    """num/den in F(t), kept reduced with a monic denominator."""

    field: Field
    num: tuple[int, ...]
    den: tuple[int, ...] = (1,)

    def __post_init__(self):
        F = self.field
        num, den = poly_trim(self.num), poly_trim(self.den)
        if not den:
            raise SeriesError("zero denominator")
        g = poly_gcd(F, num, den) if num else den
        if len(g) > 1:
            num = poly_divmod(F, num, g)[0]
            den = poly_divmod(F, den, g)[0]
        if not num:
            den = (1,)
        lead = F.inv(den[-1])
        object.__setattr__(self, "num", poly_scale(F, num, lead))
        object.__setattr__(self, "den", poly_scale(F, den, lead))

    @classmethod
    def const(cls, field: Field, c: int) -> "RationalFunction":
        return cls(field, (c,) if c else ())

    @classmethod
    def monomial(cls, field: Field, e: int) -> "RationalFunction":
        if e >= 0:
            return cls(field, (0,) * e + (1,))
        return cls(field, (1,), (0,) * (-e) + (1,))

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        F = self.field
        return RationalFunction(
            F,
            poly_add(F, poly_mul(F, self.num, other.den), poly_mul(F, other.num, self.den)),
            poly_mul(F, self.den, other.den),
        )

    def __neg__(self):
        return RationalFunction(self.field, poly_neg(self.field, self.num), self.den)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "RationalFunction | int") -> "RationalFunction":
        F = self.field
        if isinstance(other, int):
            return RationalFunction(F, poly_scale(F, self.num, F.from_int(other)), self.den)
        return RationalFunction(F, poly_mul(F, self.num, other.num), poly_mul(F, self.den, other.den))

    def scale(self, c: int) -> "RationalFunction":
        return RationalFunction(self.field, poly_scale(self.field, self.num, c), self.den)

    def inverse(self) -> "RationalFunction":
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFunction(self.field, self.den, self.num)

    def __truediv__(self, other):
        return self * other.inverse()

    def is_zero(self) -> bool:
        return not self.num

    def order_at(self, place: Place) -> int:
        """Valuation ord_place(f); raises for f = 0."""
        if not self.num:
            raise SeriesError("order of the zero function is infinite")
        if place.is_infinite:
            return (len(self.den) - 1) - (len(self.num) - 1)
        return _poly_order(self.field, self.num, place.poly) - _poly_order(self.field, self.den, place.poly)

    def __str__(self):
        n = format_poly(self.num)
        if self.den == (1,):
            return n
        return f"({n})/({format_poly(self.den)})"


def _poly_order(F: Field, a, pi) -> int:
    k = 0
    while True:
        q, r = poly_divmod(F, a, pi)
        if r:
            return k
        a = q
        k += 1


def sympy_rational(text: str, names):
    symbols = {n: sympy.Symbol(n) for n in names}
    try:
        expr = parse_expr(
            text,
            local_dict=symbols,
            transformations=standard_transformations + (convert_xor,),
            evaluate=True,
        )
    except (SyntaxError, TypeError, sympy.SympifyError) as exc:
        col = getattr(exc, "offset", None)
        raise ParseError(text, str(exc).splitlines()[0] if str(exc) else "syntax error", col) from None
    except Exception as exc:  # tokenizer errors surface as assorted exception types
        raise ParseError(text, f"{type(exc).__name__}: {exc}") from None
    free = {s.name for s in expr.free_symbols}
    extra = free - set(names)
    if extra:
        raise ParseError(text, f"unknown variable(s) {sorted(extra)}; expected {list(names)}")
    num, den = sympy.fraction(sympy.together(expr))
    gens = [symbols[n] for n in names]
    try:
        pn = sympy.Poly(num, *gens, domain=sympy.QQ)
        pd = sympy.Poly(den, *gens, domain=sympy.QQ)
    except sympy.PolynomialError as exc:
        raise ParseError(text, f"not a rational function: {exc}") from None
    return pn, pd


def _fraction_to_field(F: Field, c) -> int:
    c = Fraction(int(c.p), int(c.q)) if hasattr(c, "p") else Fraction(c)
    if c.denominator % F.p == 0:
        raise SeriesError(f"coefficient {c} has denominator divisible by p={F.p}")
    return F.mul(F.from_int(c.numerator), F.inv(F.from_int(c.denominator)))


def parse_poly_1d(F: Field, text: str, var: str = "t") -> tuple[int, ...]:
    f = parse_rational_1d(F, text, var)
    if f.den != (1,):
        raise ParseError(text, "expected a polynomial")
    return f.num


def parse_rational_1d(F: Field, text: str, var: str = "t") -> RationalFunction:
    """Parse e.g. ``1/(t^2+t)`` with integer coefficients reduced into F."""
    pn, pd = sympy_rational(text, [var])

    def conv(P):
        out = [0] * (max((e for (e,), _ in P.terms()), default=-1) + 1)
        for (e,), c in P.terms():
            out[e] = F.add(out[e], _fraction_to_field(F, c))
        return poly_trim(out)

    den = conv(pd)
    if not den:
        raise SeriesError(f"denominator of {text!r} vanishes mod {F.p}")
    return RationalFunction(F, conv(pn), den)


# -- one-variable Laurent series -----------------------------------------------


@dataclass(frozen=True)
class LaurentSeries1D:
    """sum_{lo <= e < hi} coeffs[e - lo] * s^e + O(s^hi) over ``field``.

    ``place`` records where an expansion came from (None for a bare series);
    it decides how :func:`residue_1d` reads the differential dt.
    """

    field: Field
    lo: int
    hi: int
    coeffs: tuple[int, ...]
    place: Place | None = dc_field(default=None, compare=False)

    def __post_init__(self):
        if self.lo > self.hi:
            raise SeriesError("lo must not exceed hi")
        if len(self.coeffs) != self.hi - self.lo:
            raise SeriesError("coefficient count does not match window")

    def coeff(self, e: int) -> int:
        if e >= self.hi:
            raise SeriesError(f"exponent {e} is beyond the truncation bound {self.hi}")
        if e < self.lo:
            return 0
        return self.coeffs[e - self.lo]

    def __getitem__(self, e: int) -> FqElem:
        return FqElem(self.field, self.coeff(e))

    def valuation(self) -> int | None:
        for i, c in enumerate(self.coeffs):
            if c:
                return self.lo + i
        return None

    def __add__(self, other: "LaurentSeries1D") -> "LaurentSeries1D":
        F = self.field
        lo, hi = min(self.lo, other.lo), min(self.hi, other.hi)
        lo = min(lo, hi)
        cs = tuple(F.add(self.coeff(e) if e >= self.lo else 0, other.coeff(e) if e >= other.lo else 0) for e in range(lo, hi))
        return LaurentSeries1D(F, lo, hi, cs, self.place)

    def __neg__(self):
        return LaurentSeries1D(self.field, self.lo, self.hi, tuple(self.field.neg(c) for c in self.coeffs), self.place)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "LaurentSeries1D") -> "LaurentSeries1D":
        F = self.field
        va, vb = self.valuation(), other.valuation()
        lo = self.lo + other.lo
        # precision is limited by the lowest *tracked* exponent of each factor
        hi = min(self.hi + (vb if vb is not None else other.lo), other.hi + (va if va is not None else self.lo))
        hi = max(hi, lo)
        out = [0] * (hi - lo)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                k = i + j
                if k >= hi - lo:
                    break
                if b:
                    out[k] = F.add(out[k], F.mul(a, b))
        return LaurentSeries1D(F, lo, hi, tuple(out), self.place)

    def truncate(self, hi: int) -> "LaurentSeries1D":
        hi = min(hi, self.hi)
        lo = min(self.lo, hi)
        return LaurentSeries1D(self.field, lo, hi, self.coeffs[: hi - lo], self.place)

    def __str__(self):
        parts = [f"{c}*s^{self.lo + i}" for i, c in enumerate(self.coeffs) if c]
        return " + ".join(parts + [f"O(s^{self.hi})"])


def series_divide(E: Field, num, den, precision: int) -> tuple[int, list[int]]:
    """Expand num(s)/den(s) as s^v * (c_0 + c_1 s + ...) with ``precision`` terms."""
    num, den = poly_trim(num), poly_trim(den)
    if not den:
        raise SeriesError("zero denominator")
    if not num:
        return 0, [0] * precision
    vn = next(i for i, c in enumerate(num) if c)
    vd = next(i for i, c in enumerate(den) if c)
    n, d = num[vn:], den[vd:]
    inv0 = E.inv(d[0])
    out = []
    for k in range(precision):
        acc = n[k] if k < len(n) else 0
        for i in range(1, min(k, len(d) - 1) + 1):
            acc = E.sub(acc, E.mul(d[i], out[k - i]))
        out.append(E.mul(acc, inv0))
    return vn - vd, out


def expand_rational_1d(f: RationalFunction, place: Place, precision: int) -> LaurentSeries1D:
    """Laurent expansion of f at ``place`` with ``precision`` terms from its valuation.

    Finite places expand in s = t - alpha over the residue field; infinity
    expands in z = 1/t.  The zero function yields an all-zero window [0, precision).
    """
    if precision < 1:
        raise SeriesError("precision must be >= 1")
    if place.field is not f.field:
        raise SeriesError("place and function live over different fields")
    F = f.field
    if place.is_infinite:
        E = F
        dn, dd = len(f.num) - 1, len(f.den) - 1
        num = tuple(reversed(f.num))
        den = tuple(reversed(f.den))
        v, cs = series_divide(E, num, den, precision)
        if f.num:
            v += dd - dn
    else:
        E = place.residue_field()
        shift = (place.root(), 1)
        num = poly_compose(E, f.num, shift)
        den = poly_compose(E, f.den, shift)
        v, cs = series_divide(E, num, den, precision)
    return LaurentSeries1D(E, v, v + precision, tuple(cs), place)


def residue_1d(s: LaurentSeries1D) -> FqElem:
    """Residue of (series) * dt, in the field of the coefficients.

    For an expansion at infinity dt = -z^-2 dz, so the residue is minus the
    z^1 coefficient; elsewhere dt = ds and the residue is the s^-1 coefficient.
    """
    F = s.field
    if s.place is not None and s.place.is_infinite:
        if s.hi <= 1:
            raise SeriesError("window does not reach exponent 1 needed at infinity")
        return FqElem(F, F.neg(s.coeff(1)))
    if s.hi <= -1:
        raise SeriesError("window does not include exponent -1")
    return FqElem(F, s.coeff(-1))


def trace_residue(s: LaurentSeries1D) -> FqElem:
    """Residue traced from the residue field down to the ground field F_q."""
    r = residue_1d(s)
    if s.place is None or s.place.degree == 1:
        return r
    E = s.field
    return FqElem(s.place.field, E.relative_trace(r.value))


def residue_of_form(f: RationalFunction, place: Place) -> FqElem:
    """Tr res_place(f dt) in F_q, with the precision chosen automatically."""
    if f.is_zero():
        return place.field.zero
    v = f.order_at(place)
    target = 1 if place.is_infinite else -1
    prec = max(1, target - v + 1)
    return trace_residue(expand_rational_1d(f, place, prec))


# -- two-variable rational functions --------------------------------------------

BiPoly = dict  # {(i, j): c} meaning c * x^i * y^j


def bp_trim(a: BiPoly) -> BiPoly:
    return {k: v for k, v in a.items() if v}


def bp_add(F: Field, a: BiPoly, b: BiPoly) -> BiPoly:
    out = dict(a)
    for k, v in b.items():
        out[k] = F.add(out.get(k, 0), v)
    return bp_trim(out)


def bp_scale(F: Field, a: BiPoly, c: int) -> BiPoly:
    return bp_trim({k: F.mul(v, c) for k, v in a.items()})


def bp_mul(F: Field, a: BiPoly, b: BiPoly) -> BiPoly:
    out: dict = {}
    for (i, j), v in a.items():
        for (k, l), w in b.items():
            key = (i + k, j + l)
            out[key] = F.add(out.get(key, 0), F.mul(v, w))
    return bp_trim(out)


def bp_pow(F: Field, a: BiPoly, e: int) -> BiPoly:
    acc: BiPoly = {(0, 0): 1}
    for _ in range(e):
        acc = bp_mul(F, acc, a)
    return acc


def bp_const(c: int) -> BiPoly:
    return {(0, 0): c} if c else {}


def bp_embed(F: Field, a: BiPoly) -> BiPoly:
    """Coefficients of a subfield are valid encodings in any extension; identity map."""
    return dict(a)


@dataclass(frozen=True)
class BiRational:
    """num/den in E(x, y); not reduced, only required to have den != 0."""

    field: Field
    num: tuple  # sorted items of a BiPoly, for hashability
    den: tuple

    @classmethod
    def make(cls, F: Field, num: BiPoly, den: BiPoly | None = None) -> "BiRational":
        den = {(0, 0): 1} if den is None else bp_trim(den)
        if not den:
            raise SeriesError("zero denominator")
        return cls(F, tuple(sorted(bp_trim(num).items())), tuple(sorted(den.items())))

    @classmethod
    def var(cls, F: Field, which: str) -> "BiRational":
        return cls.make(F, {(1, 0) if which == "x" else (0, 1): 1})

    @classmethod
    def const(cls, F: Field, c: int) -> "BiRational":
        return cls.make(F, bp_const(c))

    @classmethod
    def from_1d(cls, f: RationalFunction, which: str = "x") -> "BiRational":
        key = (lambda i: (i, 0)) if which == "x" else (lambda i: (0, i))
        return cls.make(f.field, {key(i): c for i, c in enumerate(f.num)}, {key(i): c for i, c in enumerate(f.den)})

    @property
    def n(self) -> BiPoly:
        return dict(self.num)

    @property
    def d(self) -> BiPoly:
        return dict(self.den)

    def over(self, E: Field) -> "BiRational":
        return BiRational(E, self.num, self.den)

    def __add__(self, o: "BiRational") -> "BiRational":
        F = self.field
        return BiRational.make(F, bp_add(F, bp_mul(F, self.n, o.d), bp_mul(F, o.n, self.d)), bp_mul(F, self.d, o.d))

    def __neg__(self):
        return BiRational.make(self.field, bp_scale(self.field, self.n, self.field.neg(1)), self.d)

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o: "BiRational") -> "BiRational":
        F = self.field
        return BiRational.make(F, bp_mul(F, self.n, o.n), bp_mul(F, self.d, o.d))

    def scale(self, c: int) -> "BiRational":
        return BiRational.make(self.field, bp_scale(self.field, self.n, c), self.d)

    def inverse(self) -> "BiRational":
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        return BiRational.make(self.field, self.d, self.n)

    def is_zero(self) -> bool:
        return not self.num

    def substitute(self, X: "BiRational", Y: "BiRational") -> "BiRational":
        """self(X, Y), evaluated by Horner in each variable."""
        F = self.field

        def ev(P: BiPoly) -> BiRational:
            acc = BiRational.const(F, 0)
            ys = sorted({j for (_, j) in P}, reverse=True)
            if not P:
                return acc
            maxj = ys[0]
            for j in range(maxj, -1, -1):
                row = {i: c for (i, jj), c in P.items() if jj == j}
                inner = BiRational.const(F, 0)
                if row:
                    for i in range(max(row), -1, -1):
                        inner = inner * X + BiRational.const(F, row.get(i, 0))
                acc = acc * Y + inner
            return acc

        return ev(self.n) * ev(self.d).inverse()


def parse_rational_2d(F: Field, text: str, names=("u", "t")) -> BiRational:
    """Parse an integer-coefficient rational function of u, t (u -> x, t -> y)."""
    pn, pd = sympy_rational(text, list(names))

    def conv(P) -> BiPoly:
        out: BiPoly = {}
        for (i, j), c in P.terms():
            out[(i, j)] = F.add(out.get((i, j), 0), _fraction_to_field(F, c))
        return bp_trim(out)

    den = conv(pd)
    if not den:
        raise SeriesError(f"denominator of {text!r} vanishes mod {F.p}")
    return BiRational.make(F, conv(pn), den)


def _y_rows(P: BiPoly) -> dict[int, tuple[int, ...]]:
    rows: dict[int, list[int]] = {}
    for (i, j), c in P.items():
        row = rows.setdefault(j, [])
        if len(row) <= i:
            row.extend([0] * (i + 1 - len(row)))
        row[i] = c
    return {j: poly_trim(r) for j, r in rows.items()}


@dataclass(frozen=True)
class IteratedSeries2D:
    """Element of E((x))((y)) truncated to y-levels [lo_t, hi_t).

    ``levels[k]`` is the exact coefficient of y^(lo_t + k) as a rational
    function of x; ``windows[k]`` is its LaurentSeries1D expansion at x = 0.
    """

    field: Field
    lo_t: int
    hi_t: int
    levels: tuple[RationalFunction, ...]
    windows: tuple[LaurentSeries1D, ...]

    def level(self, j: int) -> RationalFunction:
        if j >= self.hi_t:
            raise SeriesError(f"t-level {j} beyond truncation {self.hi_t}")
        if j < self.lo_t:
            return RationalFunction.const(self.field, 0)
        return self.levels[j - self.lo_t]

    def coeff(self, i: int, j: int) -> int:
        """Coefficient of x^i y^j, computed exactly from the level."""
        f = self.level(j)
        if f.is_zero():
            return 0
        place = Place(self.field, (0, 1))
        v = f.order_at(place)
        if i < v:
            return 0
        return expand_rational_1d(f, place, i - v + 1).coeff(i)

    def valuation(self) -> tuple[int, int] | None:
        """Rank-2 valuation (v_t, v_u), compared lexicographically."""
        place = Place(self.field, (0, 1))
        for k, f in enumerate(self.levels):
            if not f.is_zero():
                return (self.lo_t + k, f.order_at(place))
        return None

    def monomials(self):
        """(i, j, c) for the tracked window of every level."""
        for k, w in enumerate(self.windows):
            for e in range(w.lo, w.hi):
                c = w.coeff(e)
                if c:
                    yield e, self.lo_t + k, c


def expand_birational(G: BiRational, prec_t: int, prec_u: int) -> IteratedSeries2D:
    """Expand G in E((x))((y)) with ``prec_t`` y-levels from the y-valuation."""
    if prec_t < 1 or prec_u < 1:
        raise SeriesError("precisions must be >= 1")
    E = G.field
    N, D = _y_rows(G.n), _y_rows(G.d)
    j0 = min(D)
    d0 = D[j0]
    if not G.num:
        zero = RationalFunction.const(E, 0)
        w = LaurentSeries1D(E, 0, prec_u, (0,) * prec_u, None)
        return IteratedSeries2D(E, 0, prec_t, (zero,) * prec_t, (w,) * prec_t)
    jn = min(N)
    maxd = max(D)
    # p_k / d0^(k+1) is the coefficient of y^(jn - j0 + k)
    ps: list[tuple[int, ...]] = []
    levels = []
    for k in range(prec_t):
        acc = poly_mul(E, N.get(jn + k, ()), poly_pow(E, d0, k))
        for i in range(1, min(k, maxd - j0) + 1):
            di = D.get(j0 + i, ())
            if di and ps[k - i]:
                acc = poly_sub(E, acc, poly_mul(E, poly_mul(E, di, ps[k - i]), poly_pow(E, d0, i - 1)))
        ps.append(acc)
        levels.append(RationalFunction(E, acc, poly_pow(E, d0, k + 1)))
    place = Place(E, (0, 1))
    windows = tuple(expand_rational_1d(f, place, prec_u) for f in levels)
    lo = jn - j0
    return IteratedSeries2D(E, lo, lo + prec_t, tuple(levels), windows)


def local_residue(G: BiRational) -> int:
    """Coefficient of x^-1 y^-1 of G in E((x))((y)) (exact)."""
    E = G.field
    if G.is_zero():
        return 0
    N, D = _y_rows(G.n), _y_rows(G.d)
    lo = min(N) - min(D)
    if lo > -1:
        return 0
    s = expand_birational(G, -lo, 1)
    h = s.level(-1)
    if h.is_zero():
        return 0
    origin = Place(E, (0, 1))
    v = h.order_at(origin)
    if v > -1:
        return 0
    return expand_rational_1d(h, origin, -v).coeff(-1)


# -- flags at the origin ---------------------------------------------------------


@dataclass(frozen=True)
class Flag:
    """A smooth curve through the origin of the (u, t)-plane.

    kind ``"t"``: C = {t = 0}; ``"u"``: C = {u = 0};
    ``"graph"``: C = {t = phi(u)}; ``"ugraph"``: C = {u = phi(t)}, with phi(0) = 0.
    """

    kind: str
    phi: RationalFunction | None = None

    def __post_init__(self):
        if self.kind not in ("t", "u", "graph", "ugraph"):
            raise SeriesError(f"unsupported flag kind {self.kind!r}")
        if self.kind in ("graph", "ugraph"):
            if self.phi is None:
                raise SeriesError("graph flags need phi")
            F = self.phi.field
            if self.phi.den and self.phi.den[0] == 0:
                raise SeriesError("phi must be regular at the origin")
            if self.phi.num and self.phi.num[0] != 0:
                raise SeriesError("phi(0) must be 0 for a curve through the origin")

    def chart(self, F: Field):
        """(U, T, J): u = U(x, y), t = T(x, y), du^dt = J dx^dy, y the curve equation."""
        x, y = BiRational.var(F, "x"), BiRational.var(F, "y")
        one = BiRational.const(F, 1)
        minus = BiRational.const(F, F.neg(1))
        if self.kind == "t":
            return x, y, one
        if self.kind == "u":
            return y, x, minus
        phi = BiRational.from_1d(RationalFunction(F, self.phi.num, self.phi.den), "x")
        if self.kind == "graph":
            return x, y + phi, one
        return y + phi, x, minus


def expand_rational_2d(f: BiRational, flag: Flag, prec_t: int, prec_u: int) -> IteratedSeries2D:
    """Expand f(u, t) in k((u'))((t')) with t' the flag's curve equation."""
    U, T, _ = flag.chart(f.field)
    return expand_birational(f.substitute(U, T), prec_t, prec_u)


def residue_2d(f: BiRational, flag: Flag, scale: int = 1) -> FqElem:
    """res of omega = scale * f du^dt along ``flag`` at the origin.

    The form is rewritten as g du'^dt' with the curve equation last; swapping
    the order of u and t contributes -1.
    """
    F = f.field
    U, T, J = flag.chart(F)
    g = f.substitute(U, T) * J
    return FqElem(F, F.mul(local_residue(g), scale))
