import random

import pytest

from adelic.adeles import (
    AdeleError,
    InstabilityError,
    WindowVector,
    default_bounds,
    dual_window,
    embed_global,
    global_image,
    make_window,
    pair,
    restricted_complex_cohomology,
    strong_approximation_check,
)
from adelic.algebra import field_of_order, rank
from adelic.curve import Divisor, l_dim, parse_divisor, rr_space_basis
from adelic.series import LaurentSeries1D, Place, parse_rational_1d, trace_residue


def _window(q, S, low, high, **kw):
    F = field_of_order(q)
    return make_window([_place(F, s) for s in S], parse_divisor(F, low), parse_divisor(F, high), **kw)


def _place(F, s):
    if s == "inf":
        return Place.infinity(F)
    return parse_divisor(F, f"({s})").support[0]


def test_window_dimensions():
    W = _window(2, ["t", "inf"], "-(t) - inf", "(t) + inf")
    assert W.dim == 4
    V = _window(2, ["t^2+t+1", "inf"], "-(t^2+t+1) - inf", "inf")
    assert V.block(_place(V.field, "t^2+t+1")).dim == 2


def test_window_contracts():
    with pytest.raises(AdeleError):
        _window(2, ["t", "inf"], "0", "(t) + inf")
    with pytest.raises(AdeleError):
        _window(2, ["t"], "-(t) - inf", "(t)")
    with pytest.raises(AdeleError):
        _window(2, ["t", "inf"], "(t) - 2*inf", "-(t)")


def test_embedding_of_inverse_t():
    W = _window(2, ["t", "inf"], "-(t) - inf", "(t) + inf")
    v = embed_global(parse_rational_1d(W.field, "1/t"), W)
    # at (t): exponent -1 coefficient 1; at inf: 1/t = z lies beyond the window [-1, 1)
    assert v.coords == (1, 0, 0, 0)
    assert v.coefficient(_place(W.field, "t"), -1) == 1


def test_embedding_rejects_large_poles():
    W = _window(2, ["t", "inf"], "-(t) - inf", "(t) + inf")
    with pytest.raises(AdeleError):
        embed_global(parse_rational_1d(W.field, "t^2"), W)


def _series_pair(u: WindowVector, v: WindowVector) -> int:
    """Sum over places of Tr res(U_P V_P dt), computed by multiplying truncated series."""
    F = u.window.field
    total = 0
    for b in u.window.blocks:
        P = b.place
        E = P.residue_field()
        bu = v.window.block(P)
        su = LaurentSeries1D(E, b.lo, b.hi, tuple(u.coefficient(P, e) for e in b.exponents()), P)
        sv = LaurentSeries1D(E, bu.lo, bu.hi, tuple(v.coefficient(P, e) for e in bu.exponents()), P)
        total = F.add(total, trace_residue(su * sv).value)
    return total


@pytest.mark.parametrize("q,S,low,high", [
    (2, ["t", "inf"], "-(t) - inf", "(t) + inf"),
    (3, ["t", "t+1", "inf"], "-(t) - 2*inf", "(t+1) + inf"),
    (2, ["t^2+t+1", "inf"], "-(t^2+t+1) - inf", "(t^2+t+1) + 2*inf"),
])
def test_pairing_matches_series_oracle(q, S, low, high):
    W = _window(q, S, low, high)
    Wd = dual_window(W)
    F = W.field
    rnd = random.Random(7)
    for _ in range(25):
        u = WindowVector(W, tuple(rnd.randrange(q) for _ in range(W.dim)))
        v = WindowVector(Wd, tuple(rnd.randrange(q) for _ in range(Wd.dim)))
        assert pair(u, v) == _series_pair(u, v)


@pytest.mark.parametrize("q", [2, 3])
def test_global_images_are_orthogonal(q):
    W = _window(q, ["t", "inf"], "-(t) - 2*inf", "2*(t) + inf")
    Wd = dual_window(W)
    G, Gd = global_image(W), global_image(Wd)
    assert len(G) + len(Gd) <= W.dim
    for a in G:
        for b in Gd:
            assert pair(WindowVector(W, tuple(a)), WindowVector(Wd, tuple(b))) == 0


def test_global_image_rank_equals_l():
    F = field_of_order(3)
    W = _window(3, ["t", "inf"], "-(t) - inf", "2*(t) + 3*inf")
    assert rank(F, global_image(W)) == l_dim(W.d_high) == 6


@pytest.mark.parametrize("n", range(0, 5))
def test_cohomology_of_multiples_of_infinity(n):
    F = field_of_order(2)
    D = Divisor.make(F, {Place.infinity(F): n})
    assert tuple(restricted_complex_cohomology(D)) == (n + 1, 0)


@pytest.mark.parametrize("n,h", [(-1, (0, 0)), (-2, (0, 1)), (-4, (0, 3))])
def test_cohomology_of_negative_divisors(n, h):
    F = field_of_order(3)
    D = Divisor.make(F, {Place.infinity(F): n})
    assert tuple(restricted_complex_cohomology(D)) == h


@pytest.mark.parametrize("q", [2, 3])
def test_cohomology_matches_rr_on_mixed_divisors(q):
    F = field_of_order(q)
    K = Divisor.canonical(F)
    for text in ["(t) - 3*inf", "2*(t+1) - (t)", "-(t) - inf", "(t^2+1)" if q == 3 else "(t^2+t+1)", "3*(t) + 2*inf - (t+1)"]:
        D = parse_divisor(F, text)
        assert tuple(restricted_complex_cohomology(D)) == (l_dim(D), l_dim(K - D))


def test_too_small_bounds_are_refused():
    F = field_of_order(2)
    D = parse_divisor(F, "3*(t) - inf")
    N, M = default_bounds(D)
    with pytest.raises(InstabilityError):
        restricted_complex_cohomology(D, bounds=(0, 0))
    assert tuple(restricted_complex_cohomology(D, bounds=(N, M))) == (l_dim(D), 0)


def test_strong_approximation():
    F = field_of_order(2)
    inf = Place.infinity(F)
    for low, high in [("-(t) - inf", "(t) + inf"), ("-2*(t) - inf", "3*inf"), ("-(t) - (t+1) - inf", "(t+1)")]:
        W = make_window(
            set(parse_divisor(F, low).support) | set(parse_divisor(F, high).support) | {inf},
            parse_divisor(F, low),
            parse_divisor(F, high),
        )
        assert strong_approximation_check(W, inf)
    single = make_window([inf], parse_divisor(F, "-inf"), parse_divisor(F, "2*inf"))
    assert strong_approximation_check(single, inf)


def test_rr_basis_embeds_injectively():
    F = field_of_order(2)
    D = parse_divisor(F, "(t) + 2*inf")
    W = make_window(D.support, D - parse_divisor(F, "4*inf"), D)
    rows = [embed_global(f, W).coords for f in rr_space_basis(D)]
    assert rank(F, [list(r) for r in rows]) == len(rows) == l_dim(D)
