from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adelic.algebra import (
    CycloValue,
    FieldError,
    additive_character,
    field_of_order,
    is_irreducible,
    make_field,
    monic_irreducibles,
    nullspace,
    rank,
    rref,
    span_contains,
)


def _polymul_mod(a, b, modulus, p):
    """Schoolbook product of coefficient lists modulo a monic modulus (independent oracle)."""
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    d = len(modulus) - 1
    for k in range(len(out) - 1, d - 1, -1):
        c = out[k]
        if c:
            for i, m in enumerate(modulus):
                out[k - d + i] = (out[k - d + i] - c * m) % p
    return (out + [0] * d)[:d]


def _digits(v, p, d):
    return [(v // p**i) % p for i in range(d)]


@pytest.mark.parametrize("q,p,d", [(4, 2, 2), (8, 2, 3), (9, 3, 2)])
def test_multiplication_matches_polynomial_oracle(q, p, d):
    F = field_of_order(q)
    for a, b in product(range(q), repeat=2):
        expect = _polymul_mod(_digits(a, p, d), _digits(b, p, d), F.modulus, p)
        assert F.base_digits(F.mul(a, b)) == expect


def test_f4_trace_of_generator():
    F = make_field(2, 2)
    alpha = F.elem(2)
    assert alpha * alpha == alpha + F.one
    assert F.trace(2) == 1
    assert additive_character(alpha) == -1


def test_prime_field_trace_is_identity():
    F = make_field(2, 1)
    assert [F.trace(a) for a in range(2)] == [0, 1]


def test_make_field_rejects_composite():
    with pytest.raises(FieldError):
        make_field(4, 1)
    with pytest.raises(FieldError):
        field_of_order(6)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 8, 9, 16, 25, 27])
def test_trace_is_frobenius_orbit_sum(q):
    F = field_of_order(q)
    for a in range(q):
        acc, x = 0, a
        for _ in range(F.abs_degree):
            acc = F.add(acc, x)
            x = F.pow(x, F.p)
        assert acc == F.trace(a)
        assert acc < F.p


@pytest.mark.parametrize("q", [2, 3, 4, 5, 9])
def test_character_sums(q):
    F = field_of_order(q)
    psi = [additive_character(F.elem(a)) for a in range(q)]
    assert psi[0] == 1
    total = sum(psi[1:], psi[0])
    assert total == 0
    for a, b in product(range(q), repeat=2):
        assert psi[a] * psi[b] == psi[F.add(a, b)]


def test_cyclotomic_reductions():
    assert CycloValue.from_int(2, -1) * CycloValue.from_int(2, -1) == 1
    one = CycloValue.from_int(3, 1)
    assert one + CycloValue.zeta_power(3, 1) + CycloValue.zeta_power(3, 2) == 0
    assert CycloValue.zeta_power(5, 2) * CycloValue.zeta_power(5, 4) == CycloValue.zeta_power(5, 1)


def test_cyclo_rational_part():
    v = CycloValue.from_int(5, 7) * Fraction(1, 7)
    assert v.is_rational() and v.rational() == 1


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([4, 8, 9, 25]), st.data())
def test_field_axioms(q, data):
    F = field_of_order(q)
    a, b, c = (data.draw(st.integers(0, q - 1)) for _ in range(3))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == 0
    if a:
        assert F.mul(a, F.inv(a)) == 1
    assert F.pow(a, q) == a


def test_irreducible_counts():
    # number of monic irreducibles of degree d over F_q: (1/d) sum_{e|d} mu(e) q^(d/e)
    F2, F3 = field_of_order(2), field_of_order(3)
    assert [len(monic_irreducibles(F2, d)) for d in range(1, 6)] == [2, 1, 2, 3, 6]
    assert [len(monic_irreducibles(F3, d)) for d in range(1, 4)] == [3, 3, 8]
    assert is_irreducible(F2, (1, 1, 1)) and not is_irreducible(F2, (1, 0, 1))


def _span_size(F, rows):
    vecs = set()
    for cs in product(range(F.order), repeat=len(rows)):
        v = [0] * len(rows[0])
        for c, r in zip(cs, rows):
            v = [F.add(x, F.mul(c, y)) for x, y in zip(v, r)]
        vecs.add(tuple(v))
    return len(vecs)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_rank_matches_span_count(q):
    import random

    F = field_of_order(q)
    rnd = random.Random(q)
    for _ in range(15):
        rows = [[rnd.randrange(q) for _ in range(4)] for _ in range(3)]
        r = rank(F, rows)
        assert q**r == _span_size(F, rows)
        red, piv = rref(F, rows)
        assert len(piv) == r
        for v in nullspace(F, rows, 4):
            assert all(sum_f(F, [F.mul(a, b) for a, b in zip(row, v)]) == 0 for row in rows)
        for row in rows:
            assert span_contains(F, red, row)


def sum_f(F, xs):
    acc = 0
    for x in xs:
        acc = F.add(acc, x)
    return acc
