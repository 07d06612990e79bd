import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dlrings.classfn import (
    ClassFunction,
    Cyc,
    GroupData,
    abelian_characters,
    conjugacy_classes,
    cyclotomic_poly,
    decompose,
    group_data,
    induce,
    inner_product,
    permutation_character,
    restrict,
)
from dlrings.dixon import character_table
from dlrings.errors import NonIntegral
from dlrings.matgrp import Mat, MatGroup, Subgroup
from dlrings.ring import make_ring


def test_cyclotomic_poly():
    assert cyclotomic_poly(1) == (-1, 1)
    assert cyclotomic_poly(2) == (1, 1)
    assert cyclotomic_poly(4) == (1, 0, 1)
    assert cyclotomic_poly(3) == (1, 1, 1)
    assert cyclotomic_poly(12) == (1, 0, -1, 0, 1)


def test_cyc_roots_relations():
    z = Cyc.root(12, 1)
    acc = Cyc.rational(12, 1)
    for _ in range(12):
        acc = acc * z
    assert acc == Cyc.rational(12, 1)
    # sum over all 3rd roots vanishes
    s = Cyc.root(12, 0) + Cyc.root(12, 4) + Cyc.root(12, 8)
    assert s.is_zero()
    # conj is inverse on roots
    assert Cyc.root(12, 5).conj() == Cyc.root(12, 7)


@given(st.integers(0, 11), st.integers(0, 11), st.integers(-3, 3), st.integers(-3, 3))
@settings(max_examples=80, deadline=None)
def test_cyc_float_bridge(k1, k2, c1, c2):
    import cmath

    a = Cyc.root(12, k1) * c1
    b = Cyc.root(12, k2) * c2
    z = cmath.exp(2j * cmath.pi / 12)
    xa, xb = c1 * z**k1, c2 * z**k2
    assert abs((a * b + a).to_complex() - (xa * xb + xa)) < 1e-9
    assert abs((a - b).to_complex() - (xa - xb)) < 1e-9
    assert abs(a.conj().to_complex() - xa.conjugate()) < 1e-9


def sl2f3_data():
    return group_data(MatGroup("SL", make_ring(3, r=1)))


def test_conjugacy_classes_sl2f3():
    g = sl2f3_data()
    assert g.order == 24
    assert g.k == 7
    assert sorted(g.sizes) == [1, 1, 4, 4, 4, 4, 6]
    assert g.exponent == 12


def test_dixon_sl2f3():
    g = sl2f3_data()
    table = character_table(g)
    dims = sorted(int(c.dim) for c in table)
    assert dims == [1, 1, 1, 2, 2, 2, 3]
    for i, c1 in enumerate(table):
        for j, c2 in enumerate(table):
            assert inner_product(c1, c2) == (1 if i == j else 0)


def test_dixon_sl2f2():
    g = group_data(MatGroup("SL", make_ring(2, r=1)))
    table = character_table(g)
    assert sorted(int(c.dim) for c in table) == [1, 1, 2]  # S_3


def test_dixon_sl2f5():
    g = group_data(MatGroup("SL", make_ring(5, r=1)))
    assert g.order == 120 and g.k == 9
    table = character_table(g)
    dims = sorted(int(c.dim) for c in table)
    assert sum(d * d for d in dims) == 120
    assert dims == [1, 2, 2, 3, 3, 4, 4, 5, 6]  # SL2(F_5) = 2.A_5


def test_induce_and_permutation_character_agree():
    R = make_ring(3, r=2)
    G = MatGroup("SL", R)
    gd = group_data(G)
    U = Subgroup("U", G)
    one_u = {m.rows: Cyc.rational(gd.exponent, 1) for m in U.elements()}
    ind = induce(one_u, len(U.elements()), gd)
    perm = permutation_character(gd, U.elements())
    assert ind.values == perm.values
    assert int(ind.dim) == 648 // 9
    # Frobenius reciprocity with the trivial character
    assert inner_product(ind, ClassFunction.trivial(gd)) == 1


def test_induction_transitivity():
    # Ind_K^G = Ind_H^G Ind_K^H on U <= B <= G for SL2(F_3[z]/z^2)
    R = make_ring(3, r=2)
    G = MatGroup("SL", R)
    gd = group_data(G)
    B = Subgroup("B", G)
    U = Subgroup("U", G)
    b_elems = B.elements()
    bgens = B.generators()
    bd = GroupData(b_elems, bgens, "B")
    one_u_in_b = {m.rows: Cyc.rational(bd.exponent, 1) for m in U.elements()}
    ind_ub = induce(one_u_in_b, len(U.elements()), bd)
    vals_on_b = {m.rows: ind_ub(m) for m in b_elems}
    two_step = induce(vals_on_b, len(b_elems), gd)
    one_step = induce({m.rows: Cyc.rational(gd.exponent, 1) for m in U.elements()}, len(U.elements()), gd)
    assert two_step.values == one_step.values


def test_restrict_and_reciprocity_random():
    R = make_ring(3, r=2)
    G = MatGroup("SL", R)
    gd = group_data(G)
    B = Subgroup("B", G)
    bd = GroupData(B.elements(), B.generators(), "B")
    table_b = character_table(bd)
    table_g = character_table_cached_sl2z2(gd)
    rng = random.Random(3)
    for _ in range(6):
        chi_b = rng.choice(table_b)
        psi_g = rng.choice(table_g)
        ind = induce({m.rows: chi_b(m) for m in bd.elements}, bd.order, gd)
        res = restrict(psi_g, bd.elements)
        # <Ind chi, psi>_G = <chi, Res psi>_B
        lhs = inner_product(ind, psi_g)
        acc = Cyc.zero(gd.exponent)
        for m in bd.elements:
            acc = acc + chi_b(m).promote(gd.exponent) * res[m.rows].conj()
        rhs = acc.as_fraction() / bd.order
        assert lhs == rhs


_CTABLE_CACHE = {}


def character_table_cached_sl2z2(gd):
    if id(gd) not in _CTABLE_CACHE:
        _CTABLE_CACHE[id(gd)] = character_table(gd)
    return _CTABLE_CACHE[id(gd)]


def test_decompose():
    g = sl2f3_data()
    table = character_table(g)
    chi = table[3]
    vec = decompose(chi, table)
    assert sorted(vec) == [0] * 6 + [1]
    virt = chi - table[1]
    vec2 = decompose(virt, table)
    assert sorted(vec2) == [-1] + [0] * 5 + [1]


def test_abelian_characters():
    # Z/6 as a multiplication table on integers mod 6
    els = list(range(6))
    chars = abelian_characters(els, lambda a, b: (a + b) % 6, 0, 6)
    assert len(chars) == 6
    for chi in chars:
        for a in els:
            for b in els:
                assert chi[(a + b) % 6] == chi[a] * chi[b]
    assert len({tuple(chi[a] for a in els) for chi in chars}) == 6
