import itertools

import pytest
from hypothesis import given, settings, strategies as st

from dlrings.gf import GFPoly, GFTable, get_embedding, get_field, nullspace_modp


@pytest.mark.parametrize("p,n", [(2, 1), (2, 4), (3, 1), (3, 2), (3, 4), (5, 2), (7, 1)])
def test_table_field_axioms(p, n):
    F = GFTable(p, n)
    elems = list(F.elements())
    assert len(elems) == p**n
    one, zero = F.one, F.zero
    for a in elems:
        assert F.add(a, zero) == a
        assert F.mul(a, one) == a
        assert F.add(a, F.neg(a)) == zero
        if a != zero:
            assert F.mul(a, F.inv(a)) == one
    # spot-check associativity/distributivity on a slice
    for a, b, c in itertools.islice(itertools.product(elems, repeat=3), 500):
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))


def test_frobenius_is_q_power():
    F = GFTable(3, 2)
    for a in F.elements():
        assert F.frob(a, 1) == F.pow(a, 3) if a else True
        assert F.frob(a, 2) == a  # order of Frobenius on F_9


def test_subfield_codes():
    F = GFTable(3, 2)
    sub = F.subfield_codes(1)
    assert len(sub) == 3
    for a in sub:
        for b in sub:
            assert F.add(a, b) in sub
            assert F.mul(a, b) in sub
        assert F.frob(a, 1) == a


@pytest.mark.parametrize("p,small_n,big_n", [(3, 1, 2), (3, 1, 3), (3, 2, 4), (2, 1, 4), (5, 1, 2)])
def test_embedding_table_to_table(p, small_n, big_n):
    S, B = GFTable(p, small_n), GFTable(p, big_n)
    emb = get_embedding(S, B)
    for a in S.elements():
        for b in S.elements():
            assert emb.fwd(S.add(a, b)) == B.add(emb.fwd(a), emb.fwd(b))
            assert emb.fwd(S.mul(a, b)) == B.mul(emb.fwd(a), emb.fwd(b))
        assert emb.back(emb.fwd(a)) == a
        # embedding commutes with x -> x^p
        assert emb.fwd(S.frob(a, 1)) == B.frob(emb.fwd(a), 1)


@pytest.mark.parametrize("p,n", [(3, 5), (3, 12), (5, 4), (2, 9)])
def test_poly_field_arith(p, n):
    F = GFPoly(p, n)
    x = tuple([0, 1] + [0] * (n - 2))
    a = F.add(x, F.one)
    assert F.mul(a, F.inv(a)) == F.one
    assert F.frob(a, n) == a
    # Frobenius is additive and multiplicative
    b = F.mul(a, a)
    assert F.frob(F.add(a, b), 1) == F.add(F.frob(a, 1), F.frob(b, 1))
    assert F.frob(F.mul(a, b), 1) == F.mul(F.frob(a, 1), F.frob(b, 1))
    assert F.frob(a, 1) == F.pow(a, p)


@pytest.mark.parametrize("p,small_n,big_n", [(3, 1, 24), (3, 2, 12), (5, 1, 8), (2, 2, 10)])
def test_embedding_into_poly(p, small_n, big_n):
    S = GFTable(p, small_n)
    B = get_field(p, big_n, force_poly=True)
    emb = get_embedding(S, B)
    els = list(S.elements())
    for a in els:
        for b in els[:6]:
            assert emb.fwd(S.add(a, b)) == B.add(emb.fwd(a), emb.fwd(b))
            assert emb.fwd(S.mul(a, b)) == B.mul(emb.fwd(a), emb.fwd(b))
        assert emb.back(emb.fwd(a)) == a


@given(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8))
@settings(max_examples=60, deadline=None)
def test_f9_hypothesis_ring_axioms(a, b, c):
    F = get_field(3, 2)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))


def test_nullspace_modp():
    basis = nullspace_modp([[1, 2, 0], [0, 0, 1]], 3)
    assert len(basis) == 1
    v = basis[0]
    assert (v[0] + 2 * v[1]) % 3 == 0 and v[2] % 3 == 0 and any(v)
