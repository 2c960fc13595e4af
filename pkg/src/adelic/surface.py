"""Two-dimensional local fields on the surface P^1 x P^1 and the plane.

Coordinates are (u, t).  A 2-form is written ``P(u,t)/Q(u,t) * du^dt``.  The
residue at a flag (point in curve) is read in the chart whose last coordinate
is a local equation of the curve; see :mod:`adelic.series` for the charts at
the origin.  Points at infinity are reached by u -> 1/u and t -> 1/t.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy

from .algebra import Field, poly_trim
from .curve import ZetaSeries, closed_point_counts, euler_product, factor_places
from .harmonic import FnTable, FqSpace
from .series import (
    BiPoly,
    BiRational,
    Flag,
    IteratedSeries2D,
    ParseError,
    Place,
    RationalFunction,
    bp_trim,
    expand_birational,
    format_poly,
    local_residue,
    parse_poly_1d,
    residue_2d,
    residue_of_form,
    sympy_rational,
)


class SurfaceError(ValueError):
    """Unsupported curve, branch, or window."""


# -- standard subrings ---------------------------------------------------------------

TAGS = {"O": "12", "B": "02", "M": None}


@dataclass(frozen=True)
class SubringTag:
    """``O``: v_t >= 0; ``B``: every t-level has v_u >= 0; ``M``: v_t >= n."""

    kind: str
    n: int = 0

    def __post_init__(self):
        if self.kind not in TAGS:
            raise SurfaceError(f"unknown subring tag {self.kind!r}")

    @property
    def label(self) -> str | None:
        return TAGS[self.kind]


@dataclass(frozen=True)
class Membership:
    member: bool
    tag: SubringTag
    window: tuple[int, int]  # t-levels inspected

    def __bool__(self):
        return self.member


def subring_membership(x: IteratedSeries2D, tag: SubringTag) -> Membership:
    """Decide membership from the tracked t-levels, which are exact functions of u.

    The expansion starts at the true t-valuation, so O and M^n answers are
    exact; a B answer of True holds for the levels inside the window.
    """
    if x.hi_t <= x.lo_t:
        raise SurfaceError("the series tracks no t-levels")
    window = (x.lo_t, x.hi_t)
    v = x.valuation()
    if tag.kind in ("O", "M"):
        bound = 0 if tag.kind == "O" else tag.n
        return Membership(v is None or v[0] >= bound, tag, window)
    origin = Place(x.field, (0, 1))
    ok = all(f.is_zero() or f.order_at(origin) >= 0 for f in x.levels)
    return Membership(ok, tag, window)


# -- 2-forms ----------------------------------------------------------------------------

_FORM = re.compile(r"^(.*?)(?:\*?\s*d\s*u\s*(?:\^|∧)\s*d\s*t)\s*$", re.S)


@dataclass(frozen=True)
class TwoForm:
    field: Field
    f: BiRational
    text: str
    denominator_factors: tuple  # BiPoly factors (mod p) of the denominator, from a factorization over Z


def _to_bipoly(F: Field, P: sympy.Poly) -> BiPoly:
    out: BiPoly = {}
    for (i, j), c in P.terms():
        c = Fraction(int(c.p), int(c.q))
        if c.denominator % F.p == 0:
            raise SurfaceError(f"coefficient {c} is not defined mod {F.p}")
        out[(i, j)] = F.add(out.get((i, j), 0), F.mul(F.from_int(c.numerator), F.inv(F.from_int(c.denominator))))
    return bp_trim(out)


def parse_form(F: Field, text: str) -> TwoForm:
    """Parse ``P/Q * du^dt`` with integer coefficients."""
    m = _FORM.match(text.strip())
    if not m:
        raise ParseError(text, "expected 'P/Q * du^dt'")
    body = m.group(1).strip().rstrip("*").strip() or "1"
    pn, pd = sympy_rational(body, ["u", "t"])
    num, den = _to_bipoly(F, pn), _to_bipoly(F, pd)
    if not den:
        raise ParseError(text, f"denominator vanishes mod {F.p}")
    factors = []
    _, flist = sympy.factor_list(pd.as_expr(), *pd.gens)
    for g, _mult in flist:
        bp = _to_bipoly(F, sympy.Poly(g, *pd.gens, domain=sympy.QQ))
        if bp and set(bp) != {(0, 0)}:
            factors.append(bp)
    return TwoForm(F, BiRational.make(F, num, den), text, tuple(tuple(sorted(b.items())) for b in factors))


# -- branches through a point ---------------------------------------------------------------


def _divide_var(g: BiPoly, var: int) -> BiPoly | None:
    if all(k[var] >= 1 for k in g):
        return {(i - (var == 0), j - (var == 1)): c for (i, j), c in g.items()}
    return None


def _row(g: BiPoly, var: int, power: int) -> tuple[int, ...]:
    """Coefficient of (var)^power as a polynomial in the other variable."""
    other = 1 - var
    out: dict[int, int] = {}
    for k, c in g.items():
        if k[var] == power:
            out[k[other]] = c
    return poly_trim([out.get(e, 0) for e in range(max(out, default=-1) + 1)])


def _branches(F: Field, g: BiPoly) -> list[Flag]:
    g = bp_trim(g)
    if not g or g.get((0, 0), 0):
        return []
    for var, kind in ((0, "u"), (1, "t")):
        h = _divide_var(g, var)
        if h is not None:
            return [Flag(kind)] + _branches(F, h)
    deg_t = max(j for _, j in g)
    deg_u = max(i for i, _ in g)
    for var, deg, kind, plain in ((1, deg_t, "graph", "t"), (0, deg_u, "ugraph", "u")):
        if deg == 1:
            a, c = _row(g, var, 1), _row(g, var, 0)
            if a and a[0]:
                phi = RationalFunction(F, tuple(F.neg(x) for x in c), a)
                return [Flag(plain) if phi.is_zero() else Flag(kind, phi)]
    p = F.p
    if F.order == p and all(i % p == 0 and j % p == 0 for i, j in g):
        return _branches(F, {(i // p, j // p): c for (i, j), c in g.items()})
    raise SurfaceError(f"unsupported polar branch through the point: {sorted(g.items())}")


def polar_flags(form: TwoForm, point: tuple[int, int] = (0, 0)) -> list[Flag]:
    """Distinct polar curves of the form through a rational point, as flags at the origin."""
    F = form.field
    a, b = point
    out: list[Flag] = []
    shift_u = BiRational.make(F, {(1, 0): 1, (0, 0): a})
    shift_t = BiRational.make(F, {(0, 1): 1, (0, 0): b})
    for items in form.denominator_factors:
        g = BiRational.make(F, dict(items)).substitute(shift_u, shift_t)
        for fl in _branches(F, g.n):
            if fl not in out:
                out.append(fl)
    return out


@dataclass(frozen=True)
class ResidueReport:
    where: str
    residues: tuple  # (label, value in F_q)
    total: int

    @property
    def holds(self) -> bool:
        return self.total == 0

    def to_json(self) -> dict:
        return {"where": self.where, "residues": [{"at": k, "residue": v} for k, v in self.residues], "sum": self.total, "holds": self.holds}


def _fmt(phi: RationalFunction, var: str) -> str:
    num = format_poly(phi.num, var)
    return num if phi.den == (1,) else f"({num})/({format_poly(phi.den, var)})"


def _flag_label(fl: Flag) -> str:
    if fl.kind in ("t", "u"):
        return f"{fl.kind}=0"
    if fl.kind == "graph":
        return f"t={_fmt(fl.phi, 'u')}"
    return f"u={_fmt(fl.phi, 't')}"


def residue_relation_point(form: TwoForm, point: tuple[int, int] = (0, 0)) -> ResidueReport:
    """Residues of the form at a rational point along each polar curve through it."""
    F = form.field
    a, b = point
    f = form.f.substitute(
        BiRational.make(F, {(1, 0): 1, (0, 0): a}), BiRational.make(F, {(0, 1): 1, (0, 0): b})
    )
    rows = []
    acc = 0
    for fl in polar_flags(form, point):
        r = residue_2d(f, fl).value
        rows.append((_flag_label(fl), r))
        acc = F.add(acc, r)
    return ResidueReport(f"point ({a}, {b})", tuple(rows), acc)


# -- curves on P^1 x P^1 -------------------------------------------------------------------


@dataclass(frozen=True)
class CurveSpec:
    """``t = b``, ``u = a`` (b or a may be None for infinity), or ``t = phi(u)`` with phi a polynomial."""

    kind: str  # "t", "u" or "graph"
    value: int | None = 0
    phi: tuple = ()

    def __post_init__(self):
        if self.kind not in ("t", "u", "graph"):
            raise SurfaceError(f"unsupported curve kind {self.kind!r}")

    def name(self) -> str:
        if self.kind == "graph":
            return f"t = {format_poly(self.phi, 'u')}"
        return f"{self.kind} = {'inf' if self.value is None else self.value}"


def parse_curve(F: Field, text: str) -> CurveSpec:
    m = re.fullmatch(r"\s*([ut])\s*=\s*(.+?)\s*", text)
    if not m:
        raise ParseError(text, "expected 't = ...' or 'u = ...'")
    var, rhs = m.groups()
    if rhs in ("inf", "oo", "∞"):
        return CurveSpec(var, None)
    other = "u" if var == "t" else "t"
    poly = parse_poly_1d(F, rhs, other)
    if len(poly) <= 1:
        return CurveSpec(var, poly[0] if poly else 0)
    if var == "u":
        raise SurfaceError("curves u = phi(t) are not supported; swap the coordinates")
    return CurveSpec("graph", None, poly)


def _chart(E: Field, C: CurveSpec, alpha: int | None):
    """(U, T, J) with y the curve equation, x the coordinate along C centred at alpha (None: infinity)."""
    x, y = BiRational.var(E, "x"), BiRational.var(E, "y")
    one, minus = BiRational.const(E, 1), BiRational.const(E, E.neg(1))
    inv_x, inv_y = x.inverse(), y.inverse()

    def const(c):
        return BiRational.const(E, c)

    if C.kind == "graph":
        phi = C.phi
        if alpha is not None:
            s = x + const(alpha)
            val = BiRational.const(E, 0)
            for c in reversed(phi):
                val = val * s + const(c)
            return s, y + val, one
        d = len(phi) - 1
        # psi(x) = 1/phi(1/x) = x^d / rev(phi)(x)
        rev = BiRational.make(E, {(i, 0): c for i, c in enumerate(reversed(phi))})
        psi = BiRational.make(E, {(d, 0): 1}) * rev.inverse()
        w = y + psi
        return inv_x, w.inverse(), inv_x * inv_x * (w * w).inverse()
    along = x + const(alpha) if alpha is not None else inv_x
    j_along = one if alpha is not None else minus * inv_x * inv_x  # d(along) = j_along dx
    if C.value is None:
        across, j_across = inv_y, minus * inv_y * inv_y
    else:
        across, j_across = y + const(C.value), one
    if C.kind == "t":
        return along, across, j_along * j_across
    # u = across, t = along: du^dt = j_across j_along dy^dx
    return across, along, minus * j_along * j_across


def residue_along(form: TwoForm, C: CurveSpec) -> RationalFunction:
    """The residue 1-form of omega along C, as h(s) ds with s the coordinate along C."""
    F = form.field
    U, T, J = _chart(F, C, 0)
    g = form.f.substitute(U, T) * J
    if g.is_zero():
        return RationalFunction.const(F, 0)
    lo = min(j for _, j in g.n) - min(j for _, j in g.d)
    if lo > -1:
        return RationalFunction.const(F, 0)
    return expand_birational(g, -lo, 1).level(-1)


def residue_relation_curve(form: TwoForm, C: CurveSpec) -> ResidueReport:
    """Residues at the flags (x, C) for every point x of C where one can be nonzero.

    Candidate points are the poles of the residue form along C together with
    the point at infinity of C.  Each residue is computed in its own chart
    and traced to F_q; it is cross-checked against the one-variable residue
    of the residue form.
    """
    F = form.field
    h = residue_along(form, C)
    places = [p for p, _ in factor_places(F, h.den)] if len(h.den) > 1 else []
    places.append(Place.infinity(F))
    rows, acc = [], 0
    for place in places:
        if place.is_infinite:
            E, alpha = F, None
        else:
            E, alpha = place.residue_field(), place.root()
        U, T, J = _chart(E, C, alpha)
        g = form.f.over(E).substitute(U, T) * J
        r = local_residue(g)
        if place.degree > 1:
            r = E.relative_trace(r)
        check = residue_of_form(h, place).value if not h.is_zero() else 0
        if r != check:
            raise SurfaceError(f"chart residue {r} at {place.name()} disagrees with the residue form ({check})")
        along = "t" if C.kind == "u" else "u"
        rows.append((f"{along}=inf" if place.is_infinite else f"{along}: {format_poly(place.poly, along)}", r))
        acc = F.add(acc, r)
    return ResidueReport(C.name(), tuple(rows), acc)


# Shipped examples: (q, form, point) and (q, form, curve).  Most have several
# nonzero residues; the curve lists include places of degree 2 over F_q.
POINT_CATALOG = (
    (2, "1/(u*t) du^dt", (0, 0)),
    (2, "(t^2+u)/(u*t*(t+u)) du^dt", (0, 0)),
    (2, "(u^2+t^2+1)/(u*t*(t+u^2)) du^dt", (0, 0)),
    (2, "(t^2+u)/(u^2*t*(t+u)) du^dt", (0, 0)),
    (2, "(t^2+u)/(u*t*(t+u)*(t+u+u^2)) du^dt", (0, 0)),
    (2, "1/((u+1)*t*(t+u+1)) du^dt", (1, 0)),
    (3, "1/(u*t) du^dt", (0, 0)),
    (3, "(u+t+1)/(u*t*(t-u)) du^dt", (0, 0)),
    (3, "(u^2+t)/(u*t*(t-u)^2) du^dt", (0, 0)),
    (3, "(1+u*t)/(u^2*t*(t+u^2)) du^dt", (0, 0)),
    (3, "(u^2+t^2+1)/(u*t*(t+u)*(t+u+u^2)) du^dt", (0, 0)),
    (3, "1/((u-1)*(t-2)*(t-u-1)) du^dt", (1, 2)),
)

CURVE_CATALOG = (
    (2, "u/((u^2+u+1)*t) du^dt", "t=0"),
    (2, "(u^2+t)/(u*t*(t+u^2+u+1)) du^dt", "t=0"),
    (2, "u^3/(t*(u+1)^2*(u^2+u+1)) du^dt", "t=0"),
    (2, "(t+1)/((u+1)*t*(t+u)) du^dt", "u=1"),
    (2, "1/(u*(t+u^2)) du^dt", "t=u^2"),
    (2, "t/(u*(t^2+t+1)) du^dt", "u=inf"),
    (3, "u/((u^2+1)*t) du^dt", "t=0"),
    (3, "(u+t+1)/(u*t*(t-u)) du^dt", "t=0"),
    (3, "u^2/((u^2+u+2)*(t-1)) du^dt", "t=1"),
    (3, "1/(u*(t-u^2)) du^dt", "t=u^2"),
    (3, "(u+1)/(t*(u^2+1)) du^dt", "t=inf"),
    (3, "t/(u*(t^2+1)*(u-1)) du^dt", "t=2"),
)


# -- normalizations of Haar measure on a two-dimensional local field --------------------


@dataclass(frozen=True, order=True)
class NormalizationDatum:
    """(i, k): unit volume on the ideal u^i of the residue field, second parameter twisted by u^k.

    The standard block at t-level j then has volume q^(-i - j k).
    """

    i: int
    k: int

    def volume(self, q: int, j: int) -> Fraction:
        return Fraction(q) ** (-self.i - j * self.k)

    def volumes(self, q: int, levels) -> dict[int, Fraction]:
        return {j: self.volume(q, j) for j in levels}

    @classmethod
    def from_volumes(cls, q: int, vols: dict[int, Fraction]) -> "NormalizationDatum":
        """Recover (i, k) from the volumes of two consecutive levels, checking the rest."""
        if len(vols) < 2:
            raise SurfaceError("need the volumes of at least two t-levels")
        js = sorted(vols)
        e0, e1 = _log_q(q, vols[js[0]]), _log_q(q, vols[js[1]])
        if (e1 - e0) % (js[1] - js[0]):
            raise SurfaceError("volume family is not of the form q^(-i - j k)")
        k = -(e1 - e0) // (js[1] - js[0])
        d = cls(-e0 - js[0] * k, k)
        if d.volumes(q, js) != dict(vols):
            raise SurfaceError("volume family is not of the form q^(-i - j k)")
        return d


def _log_q(q: int, v: Fraction) -> int:
    v = Fraction(v)
    e = 0
    while v > 1 and v.denominator == 1 and v.numerator % q == 0:
        v /= q
        e += 1
    while v < 1 and v.numerator == 1 and v.denominator % q == 0:
        v *= q
        e -= 1
    if v != 1:
        raise SurfaceError(f"{v} is not a power of {q}")
    return e


def torsor_difference(d1: NormalizationDatum, d2: NormalizationDatum) -> tuple[int, int]:
    return (d1.i - d2.i, d1.k - d2.k)


def act(d: NormalizationDatum, g: tuple[int, int]) -> NormalizationDatum:
    return NormalizationDatum(d.i + g[0], d.k + g[1])


@dataclass(frozen=True)
class TwoLevelWindow:
    """Coordinates (j, i): t-level j in [n, n + len(bounds)), u-exponent i in [a_j, b_j)."""

    field: Field
    n: int
    bounds: tuple  # ((a_j, b_j), ...)

    def __post_init__(self):
        for a, b in self.bounds:
            if b < a:
                raise SurfaceError("each level needs a_j <= b_j")

    @property
    def m(self) -> int:
        return self.n + len(self.bounds)

    @property
    def dim(self) -> int:
        return sum(b - a for a, b in self.bounds)

    @property
    def space(self) -> FqSpace:
        return FqSpace(self.field, self.dim)

    def truncate(self, m2: int) -> "TwoLevelWindow":
        if not self.n <= m2 <= self.m:
            raise SurfaceError(f"cannot collapse levels [{self.n}, {self.m}) to [{self.n}, {m2})")
        return TwoLevelWindow(self.field, self.n, self.bounds[: m2 - self.n])

    def labels(self) -> list[tuple[int, int]]:
        return [(self.n + k, e) for k, (a, b) in enumerate(self.bounds) for e in range(a, b)]


def fiber_weight(W: TwoLevelWindow, m2: int, d: NormalizationDatum) -> Fraction:
    """Volume of one fiber point: prod over collapsed levels of vol(u^b_j block at level j)."""
    q = W.field.order
    w = Fraction(1)
    for j in range(m2, W.m):
        _, b = W.bounds[j - W.n]
        w *= Fraction(q) ** (-b) * d.volume(q, j)
    return w


def f02_pushforward(f: FnTable, W: TwoLevelWindow, m2: int, d: NormalizationDatum) -> FnTable:
    """Integrate out the t-levels [m2, m) along the fibers, weighted by the measure d."""
    if f.space != W.space:
        raise SurfaceError("function does not live on the window")
    target = W.truncate(m2)
    keep = target.space.size
    fiber = W.space.size // keep
    vals = f.values.reshape(fiber, keep, f.p).sum(axis=0) * fiber_weight(W, m2, d)
    return FnTable(target.space, np.asarray(vals, dtype=object))


def torsor_law_failures(q: int, base: NormalizationDatum, radius: int = 3, levels=range(-2, 3)) -> list[str]:
    """All violations of the torsor laws for group elements in [-radius, radius]^2 (empty when they hold)."""
    bad = []
    box = [(a, b) for a in range(-radius, radius + 1) for b in range(-radius, radius + 1)]
    for g in box:
        moved = act(base, g)
        if torsor_difference(moved, base) != g:
            bad.append(f"difference(act(d, {g}), d) != {g}")
        ratio = {j: moved.volume(q, j) / base.volume(q, j) for j in levels}
        if any(r != Fraction(q) ** (-g[0] - j * g[1]) for j, r in ratio.items()):
            bad.append(f"volume ratio of act(d, {g}) is not q^(-a-jb)")
        if NormalizationDatum.from_volumes(q, moved.volumes(q, levels)) != moved:
            bad.append(f"volumes of act(d, {g}) do not determine it")
        for h in box[:: 2 * radius + 2]:
            if act(act(base, g), h) != act(base, (g[0] + h[0], g[1] + h[1])):
                bad.append(f"act is not additive at {g}, {h}")
        if g != (0, 0) and moved == base:
            bad.append(f"act is not free at {g}")
    return bad


def f02_transitivity(f: FnTable, W: TwoLevelWindow, d: NormalizationDatum) -> bool:
    """Collapsing levels in two steps agrees with collapsing them at once, for every split."""
    for i in range(W.n, W.m + 1):
        direct = f02_pushforward(f, W, i, d)
        for j in range(i, W.m + 1):
            step = f02_pushforward(f, W, j, d)
            if f02_pushforward(step, W.truncate(j), i, d) != direct:
                return False
    return True


def b_window_indicator(W: TwoLevelWindow) -> FnTable:
    """char of the B-type part: all coordinates with negative u-exponent vanish."""
    q = W.field.order
    neg = [k for k, (_, e) in enumerate(W.labels()) if e < 0]
    idx = np.arange(W.space.size)
    ok = np.ones(W.space.size, dtype=bool)
    for k in neg:
        ok &= (idx // q**k) % q == 0
    return FnTable.indicator(W.space, np.nonzero(ok)[0])


# -- three-factor zeta of the plane --------------------------------------------------------


@dataclass(frozen=True)
class SurfaceZeta:
    q: int
    plane_minus_line: ZetaSeries
    line_minus_point: ZetaSeries
    point: ZetaSeries
    product: tuple
    expected: tuple

    @property
    def holds(self) -> bool:
        return self.product == self.expected

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "factors": {
                "A2": self.plane_minus_line.to_json(),
                "A1": self.line_minus_point.to_json(),
                "point": self.point.to_json(),
            },
            "product": list(self.product),
            "expected": list(self.expected),
            "holds": self.holds,
        }


def stratum_zeta(q: int, dim: int, N: int) -> ZetaSeries:
    """Euler product over the closed points of affine space of dimension ``dim``."""
    counts = closed_point_counts({k: q ** (dim * k) for k in range(1, N + 1)}) if N else {}
    coeffs = euler_product(counts, N)
    return ZetaSeries(q, tuple(coeffs), ((1,), (1, -(q**dim))))


def surface_zeta_factorization(q: int, N: int = 10) -> SurfaceZeta:
    if not 0 <= N <= 10:
        raise SurfaceError("N must lie in [0, 10]")
    a2, a1, pt = stratum_zeta(q, 2, N), stratum_zeta(q, 1, N), stratum_zeta(q, 0, N)
    prod = [0] * (N + 1)
    for i, x in enumerate(a2.coeffs):
        for j, y in enumerate(a1.coeffs[: N + 1 - i]):
            for k, z in enumerate(pt.coeffs[: N + 1 - i - j]):
                prod[i + j + k] += x * y * z
    # the plane's own Euler product, from #P^2(F_{q^k}) = q^2k + q^k + 1
    plane = euler_product(closed_point_counts({k: q ** (2 * k) + q**k + 1 for k in range(1, N + 1)}), N) if N else [1]
    closed_form = [sum(q ** (a + 2 * b) for a in range(n + 1) for b in range(n + 1 - a)) for n in range(N + 1)]
    if plane != closed_form:
        raise SurfaceError("plane Euler product disagrees with 1/((1-T)(1-qT)(1-q^2T))")  # pragma: no cover
    return SurfaceZeta(q, a2, a1, pt, tuple(prod), tuple(closed_form))
