from fractions import Fraction

import pytest

from dlrings.classfn import Cyc, group_data, inner_product
from dlrings.clifford import (
    AdditiveCharacter,
    build_primitive_irreps,
    commutator_subgroup,
    extensions_over,
    full_character_table,
    kernel_generators,
    mackey_nilpotent_test,
    psi_beta,
    stabilizer_formula_check,
    stabilizer_of_character,
)
from dlrings.errors import LevelTooLow
from dlrings.matgrp import Mat, MatGroup, Subgroup
from dlrings.orbits import LieElem, classify_orbits
from dlrings.ring import make_ring


def setup_q(p):
    R = make_ring(p, r=2)
    G = MatGroup("SL", R)
    gd = group_data(G)
    return R, G, gd


_CACHE = {}


def cached_setup(p):
    if p not in _CACHE:
        _CACHE[p] = setup_q(p)
    return _CACHE[p]


def nilpotent_beta(R, scale_zeta=False):
    R1 = make_ring(R.p, r=1)
    top = R1.monomial(0, R1.field.generator()) if scale_zeta else R1.one
    mode = "traceZero" if R.p != 2 else "modCenter"
    return LieElem(Mat(R1, ((R1.zero, top), (R1.zero, R1.zero))), mode)


def test_additive_character_conductor():
    R = make_ring(3, r=2)
    psi = AdditiveCharacter(R, 12)
    one = Cyc.rational(12, 1)
    # trivial on p^r = 0, nontrivial on p^{r-1}
    assert psi.value(R.zero) == one
    assert psi.value(R.z_pow(1)) != one
    # additive
    for a in list(R.elements())[:20]:
        for b in list(R.elements())[:10]:
            assert psi.value(R.add(a, b)) == psi.value(a) * psi.value(b)


def test_psi_beta_level_guard():
    R, G, gd = cached_setup(3)
    with pytest.raises(LevelTooLow):
        psi_beta(nilpotent_beta(R), 0, G, gd.exponent)


def test_psi_beta_is_character_and_injective_q3():
    R, G, gd = cached_setup(3)
    K1 = Subgroup("K", G, 1)
    els = K1.elements()
    # all 27 characters of K_1 arise as psi_beta, distinct beta give distinct chars
    import itertools

    R1 = make_ring(3, r=1)
    seen = set()
    for a, b, c in itertools.product(R1.elements(), repeat=3):
        beta = LieElem(Mat(R1, ((a, b), (c, R1.neg(a)))), "traceZero")
        k = psi_beta(beta, 1, G, gd.exponent)
        for x in els[:6]:
            for y in els[:6]:
                assert k.values[(x * y).rows] == k.values[x.rows] * k.values[y.rows]
        seen.add(tuple(sorted((rw, v.serialize()) for rw, v in k.values.items())))
    assert len(seen) == 27


def test_psi_beta_mod_center_q2():
    R, G, gd = cached_setup(2)
    import itertools

    R1 = make_ring(2, r=1)
    seen = set()
    for b, c, d in itertools.product(R1.elements(), repeat=3):
        beta = LieElem(Mat(R1, ((R1.zero, b), (c, d))), "modCenter")
        k = psi_beta(beta, 1, G, gd.exponent)
        seen.add(tuple(sorted((rw, v.serialize()) for rw, v in k.values.items())))
    assert len(seen) == 8  # = |M_2(F_2)/Z|, all characters of K_1


def test_stabilizer_nilpotent_q3():
    R, G, gd = cached_setup(3)
    k = psi_beta(nilpotent_beta(R), 1, G, gd.exponent)
    S = stabilizer_of_character(k, G)
    els = S.elements()
    assert gd.order // len(els) == 4  # (q^2-1)/2
    assert stabilizer_formula_check(k, S, G)
    # S = {+-1} U K_1
    Z = [Mat.identity(R, 2), Mat.from_ints(R, [[-1, 0], [0, -1]])]
    U = Subgroup("U", G).elements()
    K1 = Subgroup("K", G, 1).elements()
    prod = {(z * u * kk).rows for z in Z for u in U for kk in K1}
    assert prod == {m.rows for m in els}
    # [S,S] = B^1
    derived = commutator_subgroup(els)
    B1 = Subgroup("B1", G).elements()
    assert derived == {m.rows for m in B1}


def test_stabilizer_nilpotent_q2():
    R, G, gd = cached_setup(2)
    k = psi_beta(nilpotent_beta(R), 1, G, gd.exponent)
    S = stabilizer_of_character(k, G)
    els = S.elements()
    assert gd.order // len(els) == 3  # q^2-1
    U = Subgroup("U", G).elements()
    K1 = Subgroup("K", G, 1).elements()
    prod = {(u * kk).rows for u in U for kk in K1}
    assert prod == {m.rows for m in els}


def test_extension_count_nilpotent_q3():
    R, G, gd = cached_setup(3)
    k = psi_beta(nilpotent_beta(R), 1, G, gd.exponent)
    S = stabilizer_of_character(k, G)
    exts = extensions_over(k, S, gd.exponent)
    K1len = len(Subgroup("K", G, 1).elements())
    assert len(exts) == len(S.elements()) // K1len == 6  # |S/K_1| = 2q
    # extensions are multiplicative and restrict to psi_beta
    for rho in exts[:2]:
        els = S.elements()
        for a in els[:8]:
            for b in els[:8]:
                assert rho[(a * b).rows] == rho[a.rows] * rho[b.rows]
        for rows, v in k.values.items():
            assert rho[rows] == v.promote(gd.exponent)


def test_census_q3():
    R, G, gd = cached_setup(3)
    table = full_character_table(G, gd)
    nil = [t for t in table if t.label == "nilpotent"]
    assert len(nil) == 12 and all(t.dim == 4 for t in nil)
    assert len(table) == gd.k == 25
    assert sum(t.dim**2 for t in table) == 648
    split = [t for t in table if t.label == "split"]
    cusp = [t for t in table if t.label == "cuspidal"]
    assert len(split) == 2 and all(t.dim == 12 for t in split)
    assert len(cusp) == 4 and all(t.dim == 6 for t in cusp)


def test_census_q2():
    R, G, gd = cached_setup(2)
    table = full_character_table(G, gd)
    nil = [t for t in table if t.label == "nilpotent"]
    assert len(nil) == 2 and all(t.dim == 3 for t in nil)
    assert sum(t.dim**2 for t in table) == 48


def test_mackey_q3():
    R, G, gd = cached_setup(3)
    k = psi_beta(nilpotent_beta(R), 1, G, gd.exponent)
    S = stabilizer_of_character(k, G)
    exts = extensions_over(k, S, gd.exponent)
    contained_count = 0
    for rho in exts:
        mackey, direct, contained, u_mult, wbar = mackey_nilpotent_test(rho, S, G, gd)
        assert mackey == direct
        assert wbar == 0
        assert contained == (u_mult == 1)
        contained_count += contained
    assert 0 < contained_count < len(exts)  # some extensions fail containment
