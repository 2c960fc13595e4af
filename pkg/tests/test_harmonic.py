import numpy as np
import pytest

from adelic.adeles import global_image
from adelic.algebra import CycloValue, additive_character, field_of_order
from adelic.curve import Divisor, l_dim, parse_divisor
from adelic.harmonic import (
    KINDS,
    DeltaCatalogEntry,
    Duality,
    FnTable,
    FqSpace,
    HarmonicError,
    LinearMap,
    bruhat_type,
    cube_chain,
    fourier,
    fourier_swap_check,
    inverse_fourier_check,
    pair,
    pullback,
    pushforward,
    random_table,
    rr_via_parseval,
    rr_window,
    space_of,
    subgroup_rule_check,
    subspace_indices,
    subwindow_rows,
    transformed_type,
    transpose,
    window_duality,
)


def _brute_fourier(f: FnTable, duality: Duality) -> list:
    """f^(y) = sum_x psi(<x, y>) f(x), one character value at a time."""
    F = f.space.field
    vals = f.to_cyclo()
    out = []
    for y in range(duality.target.size):
        acc = CycloValue.from_int(F.p, 0)
        for x in range(duality.source.size):
            if vals[x] != 0:
                acc = acc + additive_character(F.elem(duality.value(x, y))) * vals[x]
        out.append(acc)
    return out


def _apply(F, A, v):
    return [_dot(F, row, v) for row in A]


def _dot(F, a, b):
    acc = 0
    for x, y in zip(a, b):
        acc = F.add(acc, F.mul(x, y))
    return acc


def _standard(V):
    return Duality.make(V, V, [[int(i == j) for j in range(V.dim)] for i in range(V.dim)])


@pytest.mark.parametrize("q,dim", [(2, 3), (3, 2), (4, 2), (5, 1), (9, 1)])
def test_fourier_matches_character_sum(q, dim):
    F = field_of_order(q)
    V = FqSpace(F, dim)
    rng = np.random.default_rng(q * 10 + dim)
    M = [[int(rng.integers(q)) for _ in range(dim)] for _ in range(dim)]
    for i in range(dim):
        M[i][i] = 1  # keep the pairing nondegenerate when the rest is random
    try:
        duality = Duality.make(V, V, M)
    except HarmonicError:
        duality = _standard(V)
    f = random_table(V, rng)
    assert fourier(f, duality).to_cyclo() == _brute_fourier(f, duality)


def test_fourier_on_window_matches_character_sum():
    F = field_of_order(3)
    W = rr_window(parse_divisor(F, "(t) - 2*inf"))
    duality, _ = window_duality(W)
    f = random_table(space_of(W), np.random.default_rng(3))
    assert fourier(f, duality).to_cyclo() == _brute_fourier(f, duality)


def test_delta_transforms_to_constant():
    for q in (2, 3, 4):
        V = FqSpace(field_of_order(q), 2)
        assert fourier(FnTable.delta(V), _standard(V)) == FnTable.constant(V, 1)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_double_transform(q):
    F = field_of_order(q)
    W = rr_window(parse_divisor(F, "(t)"))
    duality, _ = window_duality(W)
    f = random_table(space_of(W), np.random.default_rng(q))
    assert inverse_fourier_check(f, duality, transpose(duality))


def test_identity_push_pull():
    V = FqSpace(field_of_order(3), 2)
    f = random_table(V, np.random.default_rng(0))
    idm = LinearMap.identity(V)
    assert pushforward(idm, f) == f and pullback(idm, f) == f


def test_pushforward_of_delta_under_inclusion():
    F = field_of_order(2)
    V, W = FqSpace(F, 1), FqSpace(F, 2)
    i = LinearMap.make(V, W, [[1], [0]])
    assert pushforward(i, FnTable.delta(V)) == FnTable.delta(W, 0)


def test_random_map_over_f3():
    """Push/pull against explicit loops, then FT(i_* f) = (i^T)^* FT(f) and the adjunction."""
    F = field_of_order(3)
    V, W = FqSpace(F, 2), FqSpace(F, 3)
    rng = np.random.default_rng(11)
    A = [[int(rng.integers(3)) for _ in range(2)] for _ in range(3)]
    i = LinearMap.make(V, W, A)
    f, g = random_table(V, rng), random_table(W, rng)
    push = [CycloValue.from_int(3, 0)] * W.size
    fv = f.to_cyclo()
    for x in range(V.size):
        y = W.index(_apply(F, A, V.coords(x)))
        push[y] = push[y] + fv[x]
    assert pushforward(i, f).to_cyclo() == push
    gv = g.to_cyclo()
    assert pullback(i, g).to_cyclo() == [gv[W.index(_apply(F, A, V.coords(x)))] for x in range(V.size)]
    assert pair(pushforward(i, f), g) == pair(f, pullback(i, g))
    iT = LinearMap.make(W, V, [list(r) for r in zip(*A)])
    assert fourier(pushforward(i, f), _standard(W)) == pullback(iT, fourier(f, _standard(V)))


def test_pairing_bookkeeping():
    V = FqSpace(field_of_order(2), 3)
    one = FnTable.constant(V, 1)
    assert pair(one, one) == V.size
    f = random_table(V, np.random.default_rng(5))
    assert pair(FnTable.delta(V), f) == f(0)


# -- subgroup rule and Riemann-Roch -------------------------------------------------------


@pytest.mark.parametrize("q,text", [(2, "0"), (2, "(t) + inf"), (3, "-(t)"), (2, "(t^2+t+1) - 2*inf"), (4, "inf")])
def test_subgroup_rule(q, text):
    F = field_of_order(q)
    D = parse_divisor(F, text)
    W = rr_window(D)
    ok, e = subgroup_rule_check(W, D)
    assert ok and e == D.degree() - W.d_low.degree()


def test_subgroup_rule_brute_force():
    F = field_of_order(3)
    D = parse_divisor(F, "(t+1) - inf")
    W = rr_window(D)
    duality, Wd = window_duality(W)
    V = space_of(W)
    f = FnTable.indicator(V, subspace_indices(V, subwindow_rows(W, D)))
    K = Divisor.canonical(F)
    expect = FnTable.indicator(duality.target, subspace_indices(duality.target, subwindow_rows(Wd, K - D)))
    got = _brute_fourier(f, duality)
    scale = 3 ** (D.degree() - W.d_low.degree())
    assert got == [v * scale for v in expect.to_cyclo()]


def test_parseval_values():
    F = field_of_order(2)
    r = rr_via_parseval(parse_divisor(F, "2*inf"))
    assert r.lhs_exponent == 3 and r.l_D == 3 and r.l_K_minus_D == 0 and r.table_checked
    r = rr_via_parseval(parse_divisor(F, "-3*inf"))
    assert r.lhs_exponent == 0 and r.l_K_minus_D == 2
    assert r.parseval_holds and r.rr_identity_holds


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_riemann_roch_identity(q):
    F = field_of_order(q)
    K = Divisor.canonical(F)
    for text in ["0", "(t) - 3*inf", "2*(t) + (t+1) - inf", "-(t) - (t+1)", "4*inf - 2*(t)"]:
        D = parse_divisor(F, text)
        r = rr_via_parseval(D)
        assert r.l_D == l_dim(D) and r.l_K_minus_D == l_dim(K - D)
        assert r.l_D - r.l_K_minus_D == D.degree() + 1
        assert r.parseval_holds and r.perp_matches_global


# -- the cube ---------------------------------------------------------------------------


def test_cube_with_deltas():
    V = FqSpace(field_of_order(3), 2)
    rep = cube_chain(FnTable.delta(V), FnTable.delta(V), _standard(V))
    # counting measure on both sides: <1, 1> = |V|
    assert rep.holds and all(s == V.size for s in rep.steps)


@pytest.mark.parametrize("q,text", [(2, "(t) + inf"), (3, "0"), (2, "-(t) + 2*inf")])
def test_cube_random_pairs(q, text):
    F = field_of_order(q)
    W = rr_window(parse_divisor(F, text))
    duality, _ = window_duality(W)
    rng = np.random.default_rng(q)
    V = space_of(W)
    for _ in range(5):
        assert cube_chain(random_table(V, rng), random_table(V, rng), duality).holds


def test_cube_reproduces_parseval():
    F = field_of_order(2)
    D = parse_divisor(F, "(t) + inf")
    W = rr_window(D)
    duality, _ = window_duality(W)
    V = space_of(W)
    dK = FnTable.indicator(V, subspace_indices(V, global_image(W)))
    dD = FnTable.indicator(V, subspace_indices(V, subwindow_rows(W, D)))
    rep = cube_chain(dD, dK, duality)
    r = rr_via_parseval(D)
    assert rep.holds
    assert rep.steps[0] == 2**r.transformed_exponent


# -- Bruhat types ---------------------------------------------------------------------------


@pytest.mark.parametrize("q,text", [(2, "0"), (2, "(t) - inf"), (3, "0"), (2, "2*inf")])
def test_bruhat_square(q, text):
    D = parse_divisor(field_of_order(q), text)
    types = {k: bruhat_type(DeltaCatalogEntry(k, D)) for k in KINDS}
    assert types == {"delta_D": "D", "delta_H1": "E", "delta_K": "D'", "delta_H0": "E'"}
    assert transformed_type(DeltaCatalogEntry("delta_H1", D)) == "E'"
    assert transformed_type(DeltaCatalogEntry("delta_H0", D)) == "E"
    assert transformed_type(DeltaCatalogEntry("delta_D", D)) == "D"
    assert all(fourier_swap_check(DeltaCatalogEntry(k, D)) for k in KINDS)


def test_catalog_contracts():
    D = Divisor.zero(field_of_order(2))
    with pytest.raises(HarmonicError):
        DeltaCatalogEntry("delta_X", D)
    with pytest.raises(HarmonicError):
        DeltaCatalogEntry("delta_D", D, levels=(1, 2))
