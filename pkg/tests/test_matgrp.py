import pytest

from dlrings.errors import NonSplit
from dlrings.matgrp import (
    Mat,
    MatGroup,
    Subgroup,
    centralizer,
    charpoly_data,
    double_cosets,
    group_enumerate,
    has_ring_eigenvalue,
    is_regular,
    is_separable,
    is_upper,
    normalizer_check_B,
    polynomial_span_centralizer,
    quasi_cartan_representatives,
    standard_e,
    standard_w,
    triangularize,
)
from dlrings.ring import make_ring


@pytest.mark.parametrize(
    "kind,p,r,expected",
    [("SL", 3, 2, 648), ("SL", 2, 2, 48), ("SL", 3, 1, 24), ("GL", 3, 2, 3888), ("GL", 2, 2, 96)],
)
def test_group_sizes_by_enumeration(kind, p, r, expected):
    G = MatGroup(kind, make_ring(p, r=r))
    els = list(group_enumerate(kind, G.ring))
    assert len(els) == expected == G.order()
    assert len({m.rows for m in els}) == expected


def test_gl1_unit_count():
    R = make_ring(3, r=2)
    assert sum(1 for _ in R.units()) == 6


def test_reduce_homomorphism():
    R = make_ring(3, r=2)
    G = MatGroup("SL", R)
    e = standard_e(R)
    assert e.reduce(1) == Mat.identity(e.reduce(1).ring, 2)
    els = G.elements()
    imgs = {m.reduce(1).rows for m in els}
    assert len(imgs) == 24  # surjects onto SL2(F_3)
    kernel = [m for m in els if m.reduce(1) == Mat.identity(els[0].reduce(1).ring, 2)]
    assert len(kernel) == 3 ** (3 * (2 - 1))
    a, b = els[5], els[100]
    assert (a * b).reduce(1) == a.reduce(1) * b.reduce(1)


def test_charpoly_data():
    R = make_ring(3, r=2)
    ident = Mat.identity(R, 2)
    tr, det, disc = charpoly_data(ident)
    assert (tr, det, disc) == (R.from_int(2), R.one, R.zero)
    x = Mat.from_ints(R, [[0, 1], [[0, 1], 0]])  # [[0,1],[pi,0]]
    tr, det, disc = charpoly_data(x)
    assert tr == R.zero and det == R.neg(R.z_pow(1))
    assert disc == tuple(R.mul(R.from_int(4), R.z_pow(1)))
    zeta = R.monomial(0, R.field.generator())
    xz = Mat(R, ((R.zero, R.one), (zeta, R.zero)))
    _, d2, disc2 = charpoly_data(xz)
    assert d2 == R.neg(zeta) and disc2 == R.mul(R.from_int(4), zeta) and R.is_unit(disc2)


def test_is_separable():
    R = make_ring(3, r=2)
    e = standard_e(R)
    assert not is_separable(e)
    m = Mat.from_ints(R, [[1, 1], [[0, 1], 1]])
    assert is_separable(m)
    t = Mat.from_ints(R, [[1, 0], [0, 2]])
    assert is_separable(t)


def test_centralizer_and_regular():
    R = make_ring(3, r=2)
    G = MatGroup("SL", R)
    # central element: centralizer is everything
    minus1 = Mat.from_ints(R, [[-1, 0], [0, -1]])
    assert len(centralizer(minus1, G)) == G.order()
    assert not is_regular(minus1, G)
    # the nonsplit quasi-Cartan from the r=2 list
    zeta = R.monomial(0, R.field.generator())
    xz = Mat(R, ((R.zero, R.one), (zeta, R.zero)))
    cz = centralizer(xz, G)
    expected = []
    for a in R.elements():
        for b in R.elements():
            m = Mat(R, ((a, b), (R.mul(zeta, b), a)))
            if G.contains(m):
                expected.append(m)
    assert set(cz) == set(expected)
    assert set(cz) == set(polynomial_span_centralizer(xz, G))
    # all four reference matrices are separable with abelian span-centralizers
    for rep in quasi_cartan_representatives(R):
        assert is_separable(rep)
        assert is_regular(rep, G)


def test_triangularize_basic():
    R = make_ring(3, r=2)
    x = Mat.from_ints(R, [[1, 1], [0, 2]])
    lam = triangularize(x)
    assert lam.det() == R.one
    assert is_upper(lam.inv() * x * lam)


def test_triangularize_ramified_sqrt_pi():
    # x = [[0,1],[pi,0]] splits over the e=2 ring with sqrt(pi) = z
    L = make_ring(3, r=3, e=2)
    x = Mat(L, ((L.zero, L.one), (L.z_pow(2), L.zero)))
    lam = triangularize(x)
    y = lam.inv() * x * lam
    assert is_upper(y) and lam.det() == L.one
    # diagonal is (z, -z) up to order
    assert {y.rows[0][0], y.rows[1][1]} == {L.z_pow(1), L.neg(L.z_pow(1))}


def test_triangularize_nonsplit():
    R = make_ring(3, r=2)
    x = Mat(R, ((R.zero, R.one), (R.z_pow(1), R.zero)))
    assert not has_ring_eigenvalue(x)
    with pytest.raises(NonSplit):
        triangularize(x)


@pytest.mark.parametrize("n", [2, 3])
def test_triangularize_random_split(n):
    import random

    rng = random.Random(11)
    for ring_args in [dict(p=3, r=2), dict(p=3, r=3, e=2)]:
        R = make_ring(**ring_args)
        els = list(R.elements())
        units = [u for u in els if R.is_unit(u)]
        for _ in range(100):
            # random invertible upper-triangular t and random unipotent-ish u
            rows = [[R.zero] * n for _ in range(n)]
            for i in range(n):
                rows[i][i] = rng.choice(units)
                for j in range(i + 1, n):
                    rows[i][j] = rng.choice(els)
            t = Mat(R, tuple(tuple(r) for r in rows))
            urows = [[R.one if i == j else R.zero for j in range(n)] for i in range(n)]
            for i in range(n):
                for j in range(n):
                    if i > j:
                        urows[i][j] = rng.choice(els)
            u = Mat(R, tuple(tuple(r) for r in urows))
            x = u * t * u.inv()
            lam = triangularize(x)
            assert lam.det() == R.one
            assert is_upper(lam.inv() * x * lam)


@pytest.mark.parametrize(
    "kind,p,m,expected",
    [
        # r=2: self-normalization needs unit diagonal-residue differences:
        # q >= 3 for GL2, q >= 4 for SL2.  Small residue fields fail.
        ("GL", 3, 1, True),
        ("SL", 5, 1, True),
        ("SL", 2, 2, True),
        ("SL", 3, 2, True),
        ("SL", 2, 1, False),
        ("GL", 2, 1, False),
        ("SL", 3, 1, False),
    ],
)
def test_normalizer_B_r2(kind, p, m, expected):
    G = MatGroup(kind, make_ring(p, f=1, m=m, r=2))
    assert normalizer_check_B(G) is expected


@pytest.mark.parametrize("kind,p", [("SL", 2), ("SL", 3), ("GL", 3)])
def test_normalizer_B_r1_classical(kind, p):
    assert normalizer_check_B(MatGroup(kind, make_ring(p, r=1)))


def test_normalizer_B_f2_witness():
    # over F_2[z]/z^2 the coset representative [[1,0],[pi,1]] normalizes B
    G2 = MatGroup("SL", make_ring(2, r=2))
    e = standard_e(G2.ring)
    B = Subgroup("B", G2)
    ei = e.inv()
    assert all(B.contains(e * b * ei) for b in B.elements()) and not B.contains(e)


def test_double_cosets_bruhat_r1():
    G = MatGroup("SL", make_ring(3, r=1))
    B = Subgroup("B", G)
    cosets = double_cosets(B, B, G)
    assert len(cosets) == 2


def test_double_cosets_r2():
    R = make_ring(3, r=2)
    G = MatGroup("SL", R)
    B = Subgroup("B", G)
    cosets = double_cosets(B, B, G)
    # q=3, m=1: cosets of 1, w, e, zeta*e (square-class splitting)
    assert len(cosets) == 4
    assert sum(s for _, s in cosets) == 648
    reps = {}
    lookup = {}
    for i, (rep, size) in enumerate(cosets):
        reps[i] = (rep, size)
    w, e = standard_w(R), standard_e(R)
    zeta_e = Mat(R, ((R.one, R.zero), (R.monomial(1, R.field.generator()), R.one)))

    def coset_of(m):
        for i, (rep, _) in reps.items():
            # BFS membership: check conjugacy-free containment via orbit scan
            pass
        return None

    # identify cosets by exact membership: enumerate each coset from its rep
    ids = {}
    seenmap = {}
    bgens = B.generators() + [g.inv() for g in B.generators()]
    for i, (rep, size) in reps.items():
        frontier, seen = [rep], {rep.rows}
        while frontier:
            new = []
            for x in frontier:
                for h in bgens:
                    for y in (h * x, x * h):
                        if y.rows not in seen:
                            seen.add(y.rows)
                            new.append(y)
            frontier = new
        assert len(seen) == size
        seenmap[i] = seen
    for name, m in [("1", Mat.identity(R, 2)), ("w", w), ("e", e), ("ze", zeta_e)]:
        ids[name] = next(i for i in reps if m.rows in seenmap[i])
    assert len(set(ids.values())) == 4


def test_kernel_iso_with_lie_algebra():
    # K_i = 1 + pi^i * (trace-zero matrices) for 2i >= r,  q=3, r=2
    R = make_ring(3, r=2)
    G = MatGroup("SL", R)
    K1 = Subgroup("K", G, 1)
    els = K1.elements()
    assert len(els) == 27
    F = R.field
    seen = set()
    for m in els:
        x = m.sub(Mat.identity(R, 2))
        coeffs = tuple(R.valuation(x.rows[i][j]) >= 1 for i in range(2) for j in range(2))
        assert all(coeffs)
        seen.add(m.rows)
    # additivity: (1 + pi x)(1 + pi y) = 1 + pi(x+y)
    for a in els[:10]:
        for b in els[:10]:
            prod = a * b
            diff = a.sub(Mat.identity(R, 2)).add(b.sub(Mat.identity(R, 2)))
            expect = Mat.identity(R, 2).add(diff)
            assert prod == expect
