"""Zeta of P^1 as an integral over the local field at infinity.

The local field is K = F_q((z)) with z = 1/t.  A monic polynomial b of degree
m has valuation -m there, so |b| = q^m.  With T = q^-s a class of valuation
k contributes T^k, and the multiplicative measure gives each shell z^k O^*
volume 1.  Test functions f1 on K are described by a window z^a O / z^L O:
they vanish below valuation a and are invariant under z^L O.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import sympy

from .algebra import CycloValue, Field, field_of_order, monic_polys, poly_mul
from .curve import ZetaSeries, poly_mul_int
from .adeles import AdeleWindow, global_image
from .harmonic import FnTable, annihilator, fourier, subspace_indices, window_duality

MAX_CAP = 64
MAX_HECKE_CAP = 32


class HeckeError(ValueError):
    """Invalid test function or cap."""


def _check_cap(N: int, cap: int) -> None:
    if not 0 <= N <= cap:
        raise HeckeError(f"cap must lie in [0, {cap}]")


def fit_over(coeffs, den) -> tuple | None:
    """Numerator P with coeffs = P/den through the cap, or None if P does not terminate early."""
    prod = poly_mul_int(list(coeffs), list(den))[: len(coeffs)]
    while prod and prod[-1] == 0:
        prod.pop()
    if len(prod) + len(den) - 1 > len(coeffs):
        return None
    return (tuple(prod) or (0,), tuple(den))


def tate_local(n: int, N: int, q: int | None = None) -> ZetaSeries:
    """sum_{m >= n} T^m through T^N, the integral of |c|^s over z^n O.

    The answer does not depend on q; it is recorded only for reporting.
    """
    _check_cap(N, MAX_CAP)
    if n < 0:
        raise HeckeError("a negative shift is not a power series in T")
    coeffs = tuple(int(m >= n) for m in range(N + 1))
    return ZetaSeries(q, coeffs, ((0,) * n + (1,), (1, -1)))


def dirichlet_factor(q: int, N: int) -> ZetaSeries:
    """sum over monic b of |b|^-s = sum_m q^m T^m."""
    _check_cap(N, MAX_CAP)
    return ZetaSeries(q, tuple(q**m for m in range(N + 1)), ((1,), (1, -q)))


# -- test functions --------------------------------------------------------------------


@dataclass(frozen=True)
class MultiplicativeIntegrand:
    """f1 on K: zero below valuation ``lo``, invariant under z^hi O, given on the window."""

    q: int
    lo: int
    hi: int
    values: tuple  # one rational per vector of the window, F_q-coordinates at exponents lo..hi-1

    def __post_init__(self):
        if self.hi < self.lo:
            raise HeckeError("window must satisfy lo <= hi")
        if len(self.values) != self.q ** (self.hi - self.lo):
            raise HeckeError("value table does not cover the window")
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))

    @classmethod
    def ideal(cls, q: int, n: int = 0) -> "MultiplicativeIntegrand":
        """The characteristic function of z^n O."""
        return cls(q, n, n, (1,))

    @classmethod
    def from_table(cls, f: FnTable, lo: int) -> "MultiplicativeIntegrand":
        vals = []
        for v in f.to_cyclo():
            if not v.is_rational():
                raise HeckeError("f1 must take rational values")
            vals.append(v.rational())
        return cls(f.space.field.order, lo, lo + f.space.dim, tuple(vals))

    @property
    def field(self) -> Field:
        return field_of_order(self.q)

    def at(self, v: int, digits) -> Fraction:
        """f1 at z^v (d_0 + d_1 z + ...), d_0 != 0, given enough digits to reach z^hi."""
        if v < self.lo:
            return Fraction(0)
        q = self.q
        idx = 0
        for e in range(max(v, self.lo), self.hi):
            idx += digits[e - v] * q ** (e - self.lo)
        return self.values[idx]

    def shell_integral(self, w: int) -> Fraction:
        """Integral of f1 over z^w O^* with d*(O^*) = 1: the mean over the shell."""
        if w < self.lo:
            return Fraction(0)
        if w >= self.hi:
            return self.values[0]
        q, n = self.q, self.hi - self.lo
        first = w - self.lo
        acc, count = Fraction(0), 0
        for idx, val in enumerate(self.values):
            digs = [(idx // q**i) % q for i in range(n)]
            if any(digs[:first]) or digs[first] == 0:
                continue
            acc += val
            count += 1
        return acc / count


@dataclass(frozen=True)
class DiscretePart:
    """f0: all monic polynomials ("monic"), all nonzero ones ("nonzero"), or finite weights."""

    q: int
    kind: str = "monic"
    weights: tuple = ()  # ((poly, weight), ...) for kind "finite"

    def __post_init__(self):
        if self.kind not in ("monic", "nonzero", "finite"):
            raise HeckeError(f"unknown discrete part {self.kind!r}")
        for poly, _ in self.weights:
            if not poly or poly[-1] == 0:
                raise HeckeError("discrete part must not contain 0")

    def weight_by_degree(self, m: int) -> Fraction:
        """Total f0-weight on polynomials of degree m."""
        if self.kind == "monic":
            return Fraction(self.q**m)
        if self.kind == "nonzero":
            return Fraction((self.q - 1) * self.q**m)
        return sum((Fraction(w) for p, w in self.weights if len(p) - 1 == m), Fraction(0))

    def count_by_degree(self, m: int) -> int:
        if self.kind == "monic":
            return self.q**m
        if self.kind == "nonzero":
            return (self.q - 1) * self.q**m
        return sum(1 for p, w in self.weights if len(p) - 1 == m and w)

    def elements(self, max_degree: int):
        """(b, f0(b)) for every b of degree <= max_degree in the support."""
        F = field_of_order(self.q)
        if self.kind == "finite":
            yield from ((tuple(p), Fraction(w)) for p, w in self.weights if len(p) - 1 <= max_degree)
            return
        lead = range(1, self.q) if self.kind == "nonzero" else (1,)
        for m in range(max_degree + 1):
            for b in monic_polys(F, m):
                for c in lead:
                    yield (b[:-1] + (c,) if c != 1 else b), Fraction(1)


@dataclass(frozen=True)
class HeckeSeries:
    zeta: ZetaSeries
    pairs: tuple  # contributing (b, valuation class) pairs per coefficient

    def to_json(self) -> dict:
        out = self.zeta.to_json()
        out["contributing_pairs"] = list(self.pairs)
        return out


def _max_degree(f0: DiscretePart, N: int, f1: MultiplicativeIntegrand) -> int:
    # b of degree m enters T^k through I(k - m), which vanishes once k - m < lo
    return max(0, N - f1.lo)


def hecke_zeta(f0: DiscretePart, f1: MultiplicativeIntegrand, N: int) -> HeckeSeries:
    """sum_b f0(b) int |a b^-1|^s f1(a) d*a, coefficientwise.

    The T^k coefficient is sum_b f0(b) I(k - deg b) with I(w) the integral of
    f1 over the shell of valuation w.
    """
    _check_cap(N, MAX_HECKE_CAP)
    if f0.q != f1.q:
        raise HeckeError("f0 and f1 over different fields")
    top = _max_degree(f0, N, f1)
    I = {w: f1.shell_integral(w) for w in range(min(f1.lo, N - top), N + 1)}
    coeffs, pairs = [], []
    for k in range(N + 1):
        acc, n = Fraction(0), 0
        for m in range(top + 1):
            w = k - m
            val = I.get(w, Fraction(0)) if w >= f1.lo else Fraction(0)
            if val:
                acc += f0.weight_by_degree(m) * val
                n += f0.count_by_degree(m)
        coeffs.append(int(acc) if acc.denominator == 1 else acc)
        pairs.append(n)
    den = (1, -(1 + f0.q), f0.q)
    fit = fit_over(coeffs, den) if all(Fraction(c).denominator == 1 for c in coeffs) else None
    return HeckeSeries(ZetaSeries(f0.q, tuple(coeffs), fit), tuple(pairs))


def hecke_zeta_single_field(f0: DiscretePart, f1: MultiplicativeIntegrand, N: int) -> list[Fraction]:
    """The same coefficients from int_{v(c)=k} F(c) d*c with F(c) = sum_b f0(b) f1(bc).

    Each shell is integrated exactly: F(c) depends on c only modulo a finite
    power of z, so the mean over residue classes of units is a finite sum.
    Enumerates polynomials and classes explicitly; meant for small q and N.
    """
    _check_cap(N, MAX_HECKE_CAP)
    F = field_of_order(f1.q)
    q = f1.q
    bs = list(f0.elements(_max_degree(f0, N, f1)))
    out = []
    for k in range(N + 1):
        acc = Fraction(0)
        for b, wb in bs:
            m = len(b) - 1
            v = k - m  # valuation of bc
            if v < f1.lo:
                continue
            prec = max(1, f1.hi - v)  # digits of the unit part of bc that f1 sees
            rb = tuple(reversed(b))  # b = z^-m * rb(z)
            total_c = Fraction(0)
            count = 0
            for u in product(range(q), repeat=prec):
                if u[0] == 0:
                    continue
                bu = poly_mul(F, rb, u)
                digits = list(bu[:prec]) + [0] * (prec - len(bu))
                total_c += f1.at(v, digits)
                count += 1
            acc += wb * total_c / count
        out.append(acc)
    return out


# -- Poisson summation ------------------------------------------------------------------


def _sum_over(f: FnTable, idx) -> CycloValue:
    return CycloValue.from_redundant(f.p, list(f.values[idx].sum(axis=0)))


def poisson_check(W: AdeleWindow, f: FnTable) -> tuple[bool, dict]:
    """sum over Gamma-perp of f^ equals |Gamma-perp| * sum over Gamma of f."""
    duality, _ = window_duality(W)
    if f.space != duality.source:
        raise HeckeError("function does not live on the window")
    gamma = global_image(W)
    idx_g = subspace_indices(duality.source, gamma)
    idx_p = subspace_indices(duality.target, annihilator(duality, gamma))
    lhs = _sum_over(fourier(f, duality), idx_p)
    rhs = _sum_over(f, idx_g) * len(idx_p)
    return lhs == rhs, {"gamma_size": len(idx_g), "perp_size": len(idx_p), "lhs": lhs.to_json(), "rhs": rhs.to_json()}


# -- functional equation ---------------------------------------------------------------


@dataclass(frozen=True)
class FunctionalEquationReport:
    q: int
    shift: int
    zeta_fit: tuple
    dual_zeta_fit: tuple
    factor: str  # Z(1/(qT)) = factor * Z(T)
    dual_matches: bool
    equation_holds: bool

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "shift": self.shift,
            "zeta_fit": [list(self.zeta_fit[0]), list(self.zeta_fit[1])],
            "dual_zeta_fit": [list(self.dual_zeta_fit[0]), list(self.dual_zeta_fit[1])],
            "factor": self.factor,
            "dual_matches": self.dual_matches,
            "equation_holds": self.equation_holds,
        }


_T = sympy.Symbol("T")


def _as_expr(fit) -> sympy.Expr:
    num, den = fit
    return sum(sympy.Integer(c) * _T**i for i, c in enumerate(num)) / sum(sympy.Integer(c) * _T**i for i, c in enumerate(den))


def functional_equation(q: int, N: int = 12, n: int = 0) -> FunctionalEquationReport:
    """Check Z(1/(qT)) against Z(T) for f0 = monic polynomials, f1 = char(z^n O).

    The transform of char(z^n O) is a multiple of char(z^(2-n) O), because dt
    has a double pole at infinity; the dual zeta is taken with that ideal.
    For n = 0 the relation reads Z(1/(qT)) = q T^2 Z(T).
    """
    if not 0 <= n <= 2:
        raise HeckeError("the shift must lie in [0, 2] so that both ideals give power series in T")
    f0 = DiscretePart(q)
    Z = hecke_zeta(f0, MultiplicativeIntegrand.ideal(q, n), N).zeta
    Zd = hecke_zeta(f0, MultiplicativeIntegrand.ideal(q, 2 - n), N).zeta
    if Z.fit is None or Zd.fit is None:
        raise HeckeError(f"no rational fit at cap {N}")
    z, zd = _as_expr(Z.fit), _as_expr(Zd.fit)
    lhs = z.subs(_T, 1 / (q * _T))
    factor = sympy.Integer(q) ** (1 - n) * _T ** (2 - 2 * n)
    holds = sympy.cancel(lhs - factor * z) == 0
    dual = sympy.cancel(lhs - sympy.Integer(q) ** (1 - n) * zd) == 0
    return FunctionalEquationReport(q, n, Z.fit, Zd.fit, str(factor), bool(dual), bool(holds))
