from fractions import Fraction
from itertools import product

import numpy as np
import pytest
import sympy

from adelic.adeles import global_image
from adelic.algebra import field_of_order
from adelic.curve import P1Model, parse_divisor, zeta_from_counts
from adelic.harmonic import (
    FnTable,
    annihilator,
    fourier,
    random_table,
    rr_via_parseval,
    rr_window,
    space_of,
    subspace_indices,
    subwindow_rows,
    window_duality,
)
from adelic.hecke import (
    DiscretePart,
    HeckeError,
    MultiplicativeIntegrand,
    dirichlet_factor,
    functional_equation,
    hecke_zeta,
    hecke_zeta_single_field,
    poisson_check,
    tate_local,
)


def test_tate_local():
    assert tate_local(0, 5).coeffs == (1,) * 6
    assert tate_local(0, 5).fit == ((1,), (1, -1))
    assert tate_local(2, 5).coeffs == (0, 0, 1, 1, 1, 1)


def test_dirichlet_factor_counts_monic_polynomials():
    monic = [sum(1 for _ in product(range(3), repeat=m)) for m in range(4)]
    assert dirichlet_factor(3, 3).coeffs == tuple(monic) == (1, 3, 9, 27)
    assert dirichlet_factor(2, 4).fit == ((1,), (1, -2))


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_standard_pair_is_the_zeta_of_p1(q):
    Z = hecke_zeta(DiscretePart(q), MultiplicativeIntegrand.ideal(q), 12).zeta
    assert Z.coeffs == zeta_from_counts(P1Model(q), 12).coeffs
    assert Z.fit == ((1,), (1, -(1 + q), q))


def test_q3_second_coefficient():
    assert hecke_zeta(DiscretePart(3), MultiplicativeIntegrand.ideal(3), 4).zeta.coeffs[2] == 13


def test_single_term_discrete_part_gives_tate_integral():
    f0 = DiscretePart(2, "finite", (((1,), 1),))
    assert hecke_zeta(f0, MultiplicativeIntegrand.ideal(2), 6).zeta.coeffs == tate_local(0, 6).coeffs


@pytest.mark.parametrize("q", [2, 3])
@pytest.mark.parametrize("kind", ["monic", "nonzero"])
def test_single_field_integral_matches_double_sum(q, kind):
    rng = np.random.default_rng(q)
    vals = [int(v) for v in rng.integers(-2, 3, size=q**2)]
    f1 = MultiplicativeIntegrand(q, -1, 1, vals)
    f0 = DiscretePart(q, kind)
    N = 4
    a = [Fraction(c) for c in hecke_zeta(f0, f1, N).zeta.coeffs]
    assert a == hecke_zeta_single_field(f0, f1, N)


def test_single_field_with_finite_weights():
    f0 = DiscretePart(3, "finite", (((1, 1), 2), ((2,), -1), ((0, 1, 1), 3)))
    f1 = MultiplicativeIntegrand(3, 0, 2, list(range(9)))
    a = [Fraction(c) for c in hecke_zeta(f0, f1, 5).zeta.coeffs]
    assert a == hecke_zeta_single_field(f0, f1, 5)


def test_shell_integral_is_a_mean():
    f1 = MultiplicativeIntegrand(2, 0, 2, [5, 1, 7, 3])
    # valuation 0 units: digits (1, *) -> indices 1, 3
    assert f1.shell_integral(0) == Fraction(1 + 3, 2)
    assert f1.shell_integral(1) == 7
    assert f1.shell_integral(-1) == 0


def test_contracts():
    with pytest.raises(HeckeError):
        MultiplicativeIntegrand(2, 0, 2, [1, 2])
    with pytest.raises(HeckeError):
        DiscretePart(2, "odd")
    with pytest.raises(HeckeError):
        hecke_zeta(DiscretePart(2), MultiplicativeIntegrand.ideal(2), 200)
    with pytest.raises(HeckeError):
        functional_equation(2, 12, 3)


# -- functional equation -------------------------------------------------------------------


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_functional_equation_by_substitution(q):
    rep = functional_equation(q)
    assert rep.equation_holds and rep.dual_matches
    T = sympy.Symbol("T")
    Z = 1 / ((1 - T) * (1 - q * T))
    assert sympy.simplify(Z.subs(T, 1 / (q * T)) - q * T**2 * Z) == 0


@pytest.mark.parametrize("n", [1, 2])
def test_shifted_ideal(n):
    rep = functional_equation(2, 12, n)
    assert rep.equation_holds and rep.dual_matches


# -- Poisson summation --------------------------------------------------------------------


def _brute_poisson(W, f):
    """Both sides by explicit enumeration of Gamma and of its annihilator."""
    duality, _ = window_duality(W)
    V = space_of(W)
    G = subspace_indices(V, global_image(W))
    perp_rows = annihilator(duality, global_image(W))
    P = subspace_indices(duality.target, perp_rows)
    fh = fourier(f, duality).to_cyclo()
    fv = f.to_cyclo()
    lhs = sum((fh[int(i)] for i in P[1:]), fh[int(P[0])])
    rhs = sum((fv[int(i)] for i in G[1:]), fv[int(G[0])]) * len(P)
    return lhs, rhs


@pytest.mark.parametrize("q,text", [(2, "(t) + inf"), (3, "-(t) + inf"), (2, "0")])
def test_poisson_random_functions(q, text):
    F = field_of_order(q)
    W = rr_window(parse_divisor(F, text))
    rng = np.random.default_rng(q)
    for _ in range(3):
        f = random_table(space_of(W), rng)
        ok, _ = poisson_check(W, f)
        lhs, rhs = _brute_poisson(W, f)
        assert ok and lhs == rhs


def test_poisson_delta_and_window_indicator():
    F = field_of_order(2)
    D = parse_divisor(F, "(t) + inf")
    W = rr_window(D)
    V = space_of(W)
    assert poisson_check(W, FnTable.delta(V))[0]
    f = FnTable.indicator(V, subspace_indices(V, subwindow_rows(W, D)))
    assert poisson_check(W, f)[0]
    r = rr_via_parseval(D)
    lhs, rhs = _brute_poisson(W, f)
    # sum over Gamma of char A(D) counts L(D)
    assert rhs == lhs
    assert 2**r.l_D == len(set(subspace_indices(V, global_image(W))) & set(subspace_indices(V, subwindow_rows(W, D))))
