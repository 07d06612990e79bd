"""SL_n / GL_n over truncated local rings: matrices, standard subgroups,
enumeration, conjugacy helpers, triangularization, double cosets.

Only n = 2 paths are tuned; the data model is generic in n where cheap
(triangularization supports n = 3 for the randomized checks).
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .errors import BudgetExceeded, NonSplit, NonUnit, ParameterMismatch
from .ring import Ring, make_ring


class Mat:
    __slots__ = ("ring", "n", "rows")

    def __init__(self, ring: Ring, rows):
        self.ring = ring
        self.rows = rows if isinstance(rows, tuple) else tuple(tuple(r) for r in rows)
        self.n = len(self.rows)

    @staticmethod
    def identity(ring: Ring, n: int = 2) -> "Mat":
        return Mat(ring, tuple(tuple(ring.one if i == j else ring.zero for j in range(n)) for i in range(n)))

    @staticmethod
    def scalar(ring: Ring, c, n: int = 2) -> "Mat":
        return Mat(ring, tuple(tuple(c if i == j else ring.zero for j in range(n)) for i in range(n)))

    @staticmethod
    def from_ints(ring: Ring, int_rows) -> "Mat":
        """Matrix from nested lists whose entries are lists of small-int coefficients
        (or plain ints, read as constants)."""

        def elem(spec):
            if isinstance(spec, int):
                return ring.from_int(spec)
            out = [ring.field.zero] * ring.r
            for i, c in enumerate(spec):
                out[i] = ring.field.from_int(c)
            return tuple(out)

        return Mat(ring, tuple(tuple(elem(s) for s in row) for row in int_rows))

    def __mul__(self, other: "Mat") -> "Mat":
        R = self.ring
        if R is not other.ring:
            raise ParameterMismatch("matrices over different rings")
        n = self.n
        a, b = self.rows, other.rows
        add, mul, zero = R.add, R.mul, R.zero
        out = []
        for i in range(n):
            ai = a[i]
            row = []
            for j in range(n):
                acc = zero
                for k in range(n):
                    acc = add(acc, mul(ai[k], b[k][j]))
                row.append(acc)
            out.append(tuple(row))
        return Mat(R, tuple(out))

    def det(self):
        R, n, a = self.ring, self.n, self.rows
        if n == 1:
            return a[0][0]
        if n == 2:
            return R.sub(R.mul(a[0][0], a[1][1]), R.mul(a[0][1], a[1][0]))
        if n == 3:
            t = R.zero
            for j in range(3):
                minor = R.sub(
                    R.mul(a[1][(j + 1) % 3], a[2][(j + 2) % 3]),
                    R.mul(a[1][(j + 2) % 3], a[2][(j + 1) % 3]),
                )
                t = R.add(t, R.mul(a[0][j], minor))
            return t
        raise NotImplementedError("det for n > 3")

    def trace(self):
        R = self.ring
        t = R.zero
        for i in range(self.n):
            t = R.add(t, self.rows[i][i])
        return t

    def inv(self) -> "Mat":
        R, n, a = self.ring, self.n, self.rows
        d = self.det()
        di = R.inv(d)
        if n == 1:
            return Mat(R, ((di,),))
        if n == 2:
            return Mat(
                R,
                (
                    (R.mul(di, a[1][1]), R.mul(di, R.neg(a[0][1]))),
                    (R.mul(di, R.neg(a[1][0])), R.mul(di, a[0][0])),
                ),
            )
        if n == 3:
            cof = [[None] * 3 for _ in range(3)]
            for i in range(3):
                for j in range(3):
                    r1, r2 = [k for k in range(3) if k != i]
                    c1, c2 = [k for k in range(3) if k != j]
                    minor = R.sub(R.mul(a[r1][c1], a[r2][c2]), R.mul(a[r1][c2], a[r2][c1]))
                    if (i + j) % 2:
                        minor = R.neg(minor)
                    cof[j][i] = R.mul(di, minor)  # adjugate transpose
            return Mat(R, tuple(tuple(row) for row in cof))
        raise NotImplementedError("inverse for n > 3")

    def transpose(self) -> "Mat":
        return Mat(self.ring, tuple(tuple(self.rows[j][i] for j in range(self.n)) for i in range(self.n)))

    def add(self, other: "Mat") -> "Mat":
        R = self.ring
        return Mat(R, tuple(tuple(R.add(x, y) for x, y in zip(r1, r2)) for r1, r2 in zip(self.rows, other.rows)))

    def sub(self, other: "Mat") -> "Mat":
        R = self.ring
        return Mat(R, tuple(tuple(R.sub(x, y) for x, y in zip(r1, r2)) for r1, r2 in zip(self.rows, other.rows)))

    def reduce(self, r_target: int) -> "Mat":
        """Entrywise truncation; a group homomorphism onto the level-r_target group."""
        from ._ringcache import reduced_ring

        R2 = reduced_ring(self.ring, r_target)
        return Mat(R2, tuple(tuple(e[:r_target] for e in row) for row in self.rows))

    def __eq__(self, other):
        return isinstance(other, Mat) and self.ring is other.ring and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        enc = self.ring.encode if self.ring.field.backend == "table" else str
        return "Mat[" + "; ".join(", ".join(enc(e) for e in row) for row in self.rows) + "]"


# ---------------------------------------------------------------------------
# structural membership predicates (valid over any coefficient level)


def is_upper(m: Mat) -> bool:
    R = m.ring
    return all(m.rows[i][j] == R.zero for i in range(m.n) for j in range(i))


def is_lower(m: Mat) -> bool:
    R = m.ring
    return all(m.rows[i][j] == R.zero for i in range(m.n) for j in range(i + 1, m.n))


def is_unipotent_upper(m: Mat) -> bool:
    R = m.ring
    return is_upper(m) and all(m.rows[i][i] == R.one for i in range(m.n))


def in_congruence_kernel(m: Mat, i: int) -> bool:
    """m = 1 mod z^i."""
    R = m.ring
    one = Mat.identity(R, m.n)
    for a in range(m.n):
        for b in range(m.n):
            if R.valuation(R.sub(m.rows[a][b], one.rows[a][b])) < i:
                return False
    return True


def residue_is_upper(m: Mat) -> bool:
    R = m.ring
    return all(R.valuation(m.rows[i][j]) >= 1 for i in range(m.n) for j in range(i))


# ---------------------------------------------------------------------------
# groups


class MatGroup:
    """GL_n or SL_n over a Ring, with lazy full enumeration."""

    def __init__(self, kind: str, ring: Ring, n: int = 2):
        assert kind in ("SL", "GL")
        self.kind = kind
        self.ring = ring
        self.n = n
        self._elements = None

    def order(self, m_level: int | None = None) -> int:
        """Group order at coefficient field F_{q^m}; defaults to the ring's own level."""
        R = self.ring
        Q = R.q ** (m_level if m_level is not None else R.m)
        r = R.r
        if self.n != 2:
            raise NotImplementedError
        if self.kind == "SL":
            return Q ** (3 * (r - 1)) * Q * (Q * Q - 1)
        return Q ** (4 * (r - 1)) * (Q * Q - 1) * (Q * Q - Q)

    def contains(self, m: Mat) -> bool:
        d = m.det()
        if self.kind == "SL":
            return d == m.ring.one
        return m.ring.is_unit(d)

    def elements(self, budget: int = 10**7) -> list[Mat]:
        if self._elements is None:
            if self.order() > budget:
                raise BudgetExceeded(f"group order {self.order()} > budget {budget}")
            self._elements = list(self._enumerate())
            assert len(self._elements) == self.order()
        return self._elements

    def _enumerate(self):
        R, n = self.ring, self.n
        if n != 2:
            raise NotImplementedError("enumeration only for n = 2")
        all_elems = list(R.elements())
        units = [u for u in all_elems if R.is_unit(u)]
        nonunits = [u for u in all_elems if not R.is_unit(u)]
        if self.kind == "SL":
            yield from self._enumerate_sl(all_elems, units, nonunits)
        else:
            sl = list(self._enumerate_sl(all_elems, units, nonunits))
            for u in units:
                t = Mat(R, ((u, R.zero), (R.zero, R.one)))
                for s in sl:
                    yield t * s

    def _enumerate_sl(self, all_elems, units, nonunits):
        R = self.ring
        one = R.one
        for a in units:
            ai = R.inv(a)
            for b in all_elems:
                for c in all_elems:
                    d = R.mul(ai, R.add(one, R.mul(b, c)))
                    yield Mat(R, ((a, b), (c, d)))
        for a in nonunits:
            for c in units:
                ci = R.inv(c)
                for d in all_elems:
                    b = R.mul(ci, R.sub(R.mul(a, d), one))
                    yield Mat(R, ((a, b), (c, d)))

    def generators(self) -> list[Mat]:
        """Small generating set: elementary transvections over an additive
        basis of the ring, plus unit diagonals for GL."""
        R = self.ring
        gens = []
        for x in _additive_basis(R):
            gens.append(Mat(R, ((R.one, x), (R.zero, R.one))))
            gens.append(Mat(R, ((R.one, R.zero), (x, R.one))))
        if self.kind == "GL":
            for u in _unit_generators(R):
                gens.append(Mat(R, ((u, R.zero), (R.zero, R.one))))
        return gens

    def __repr__(self):
        return f"MatGroup({self.kind}2, {self.ring!r})"


def _additive_basis(R: Ring):
    out = []
    for i in range(R.r):
        g, cur = R.field.generator(), R.field.one
        for _ in range(R.field.n):
            out.append(R.monomial(i, cur))
            cur = R.field.mul(cur, g)
    return out


def _unit_generators(R: Ring):
    gens = [R.monomial(0, R.field.generator())]
    g = R.field.generator()
    for i in range(1, R.r):
        cur = R.field.one
        for _ in range(R.field.n):
            gens.append(R.add(R.one, R.monomial(i, cur)))
            cur = R.field.mul(cur, g)
    return gens


@lru_cache(maxsize=None)
def get_group(kind: str, p: int, f: int, m: int, r: int, e: int = 1) -> MatGroup:
    return MatGroup(kind, make_ring(p, f, m, r, e))


def group_enumerate(kind: str, ring: Ring, budget: int = 10**7):
    """Stream of group elements, each exactly once."""
    G = MatGroup(kind, ring)
    if G.order() > budget:
        raise BudgetExceeded(f"group order {G.order()} > budget {budget}")
    return iter(G.elements(budget))


# ---------------------------------------------------------------------------
# standard subgroups


class Subgroup:
    """Structured subgroup descriptor with exact membership and enumeration.

    `kind` is one of  T B U Uminus Z K B1 U1 T1 Z1 Uminus1 trivial
    explicit conj inter.  Connectedness is certified only for kinds that
    are points of a connected group variety at every level.
    """

    CONNECTED = {"T", "B", "U", "Uminus", "K", "U1", "Uminus1", "T1", "B1", "Z1", "trivial"}

    def __init__(self, kind: str, group: MatGroup, params=None):
        self.kind = kind
        self.group = group
        self.params = params
        self._elements = None

    def __repr__(self):
        return f"Subgroup({self.kind}, {self.group!r})"

    @property
    def connected(self) -> bool:
        if self.kind in Subgroup.CONNECTED:
            return True
        if self.kind == "conj":
            return self.params[0].connected
        return False

    def contains(self, m: Mat) -> bool:
        R = m.ring
        k = self.kind
        if k == "trivial":
            return m == Mat.identity(R, m.n)
        if k == "U":
            return is_unipotent_upper(m)
        if k == "Uminus":
            return is_unipotent_upper(m.transpose())
        if k == "T":
            return is_upper(m) and is_lower(m) and all(R.is_unit(m.rows[i][i]) for i in range(m.n))
        if k == "B":
            return is_upper(m) and all(R.is_unit(m.rows[i][i]) for i in range(m.n))
        if k == "Z":
            c = m.rows[0][0]
            return m == Mat.scalar(R, c, m.n) and R.is_unit(c)
        if k == "K":
            return in_congruence_kernel(m, self.params)
        if k == "U1":
            return is_unipotent_upper(m) and in_congruence_kernel(m, 1)
        if k == "Uminus1":
            return is_unipotent_upper(m.transpose()) and in_congruence_kernel(m, 1)
        if k == "T1":
            return self._t(m.ring, m.n).contains(m) and in_congruence_kernel(m, 1)
        if k == "B1":
            return is_upper(m) and in_congruence_kernel(m, 1)
        if k == "Z1":
            return Subgroup("Z", self.group).contains(m) and in_congruence_kernel(m, 1)
        if k == "conj":
            base, g = self.params
            gi = g.inv()
            return base.contains(gi * m * g)
        if k == "inter":
            return all(s.contains(m) for s in self.params)
        if k == "explicit":
            return m in self.params
        raise ValueError(f"unknown subgroup kind {k}")

    @staticmethod
    def _t(ring, n):
        return Subgroup("T", MatGroup("GL", ring, n))

    def elements(self) -> list[Mat]:
        if self._elements is not None:
            return self._elements
        G, R = self.group, self.group.ring
        k = self.kind
        out: list[Mat]
        if k == "trivial":
            out = [Mat.identity(R, G.n)]
        elif k == "U":
            out = [Mat(R, ((R.one, b), (R.zero, R.one))) for b in R.elements()]
        elif k == "Uminus":
            out = [Mat(R, ((R.one, R.zero), (b, R.one))) for b in R.elements()]
        elif k == "U1":
            out = [
                Mat(R, ((R.one, b), (R.zero, R.one)))
                for b in R.elements()
                if R.valuation(b) >= 1
            ]
        elif k == "Uminus1":
            out = [
                Mat(R, ((R.one, R.zero), (b, R.one)))
                for b in R.elements()
                if R.valuation(b) >= 1
            ]
        elif k == "T":
            if G.kind == "SL":
                out = [Mat(R, ((u, R.zero), (R.zero, R.inv(u)))) for u in R.units()]
            else:
                out = [
                    Mat(R, ((u, R.zero), (R.zero, v)))
                    for u in R.units()
                    for v in R.units()
                ]
        elif k == "T1":
            out = [m for m in Subgroup("T", G).elements() if in_congruence_kernel(m, 1)]
        elif k == "B":
            out = [
                t * u
                for t in Subgroup("T", G).elements()
                for u in Subgroup("U", G).elements()
            ]
        elif k == "B1":
            out = [m for m in Subgroup("B", G).elements() if in_congruence_kernel(m, 1)]
        elif k == "Z":
            if G.kind == "GL":
                out = [Mat.scalar(R, u, G.n) for u in R.units()]
            else:
                out = [
                    Mat.scalar(R, u, G.n)
                    for u in R.units()
                    if R.mul(u, u) == R.one
                ]
        elif k == "Z1":
            out = [m for m in Subgroup("Z", G).elements() if in_congruence_kernel(m, 1)]
        elif k == "K":
            i = self.params
            out = []
            for m in _kernel_candidates(G, i):
                out.append(m)
        elif k == "conj":
            base, g = self.params
            gi = g.inv()
            out = [g * m * gi for m in base.elements()]
        elif k == "inter":
            first, rest = self.params[0], self.params[1:]
            out = [m for m in first.elements() if all(s.contains(m) for s in rest)]
        elif k == "explicit":
            out = sorted(self.params, key=lambda m: m.rows)
        else:
            raise ValueError(f"unknown subgroup kind {k}")
        self._elements = out
        return out

    def level_size(self, m_level: int) -> int:
        """|H(F_{q^m})| for the certified structured kinds."""
        R, G = self.group.ring, self.group
        Q = R.q**m_level
        r = R.r
        k = self.kind
        if k == "trivial":
            return 1
        if k in ("U", "Uminus"):
            return Q**r
        if k in ("U1", "Uminus1"):
            return Q ** (r - 1)
        if k == "T":
            t1 = Q ** (r - 1) * (Q - 1)
            return t1 if G.kind == "SL" else t1 * t1
        if k == "B":
            return self.level_size_of("T", m_level) * Q**r
        if k == "T1":
            return Q ** (r - 1) if G.kind == "SL" else Q ** (2 * (r - 1))
        if k == "B1":
            # B cap K(1)
            tpart = Q ** (r - 1) if G.kind == "SL" else Q ** (2 * (r - 1))
            return tpart * Q ** (r - 1)
        if k == "conj":
            return self.params[0].level_size(m_level)
        raise ValueError(f"no level size formula for kind {k}")

    def level_size_of(self, kind, m_level):
        return Subgroup(kind, self.group).level_size(m_level)

    def is_group(self) -> bool:
        els = set(self.elements())
        for a in self.elements():
            if a.inv() not in els:
                return False
            for b in self.elements():
                if a * b not in els:
                    return False
        return True

    def generators(self) -> list[Mat]:
        """Small generating set for BFS work (falls back to all elements)."""
        G, R = self.group, self.group.ring
        k = self.kind
        if k == "U":
            return [Mat(R, ((R.one, x), (R.zero, R.one))) for x in _additive_basis(R)]
        if k == "Uminus":
            return [Mat(R, ((R.one, R.zero), (x, R.one))) for x in _additive_basis(R)]
        if k == "T" and G.kind == "SL":
            return [Mat(R, ((u, R.zero), (R.zero, R.inv(u)))) for u in _unit_generators(R)]
        if k == "T" and G.kind == "GL":
            out = []
            for u in _unit_generators(R):
                out.append(Mat(R, ((u, R.zero), (R.zero, R.one))))
                out.append(Mat(R, ((R.one, R.zero), (R.zero, u))))
            return out
        if k == "B":
            return Subgroup("T", G).generators() + Subgroup("U", G).generators()
        return self.elements()


def _kernel_candidates(G: MatGroup, i: int):
    """Elements of K(i) = ker(G_r -> G_i), enumerated directly."""
    R = G.ring
    free = R.r - i
    field_elems = list(R.field.elements())

    def entries():
        return itertools.product(
            itertools.product(field_elems, repeat=free), repeat=4
        )

    one = Mat.identity(R, 2)
    for (ea, eb, ec, ed) in entries():
        def lift(base, coeffs):
            out = list(base)
            for j, c in enumerate(coeffs):
                out[i + j] = R.field.add(out[i + j], c)
            return tuple(out)

        m = Mat(
            R,
            (
                (lift(R.one, ea), lift(R.zero, eb)),
                (lift(R.zero, ec), lift(R.one, ed)),
            ),
        )
        if G.contains(m):
            yield m


# ---------------------------------------------------------------------------
# characteristic/regularity data (n = 2)


def charpoly_data(g: Mat):
    """(trace, det, disc) with disc = trace^2 - 4 det; disc needs n = 2."""
    R = g.ring
    tr, d = g.trace(), g.det()
    if g.n != 2:
        return tr, d, None
    disc = R.sub(R.mul(tr, tr), R.mul(R.from_int(4), d))
    return tr, d, disc


def is_separable(g: Mat) -> bool:
    """Distinct eigenvalues, operationalized at n = 2 as disc != 0."""
    _, _, disc = charpoly_data(g)
    return disc != g.ring.zero


def centralizer(g: Mat, ambient: MatGroup, budget: int = 10**7) -> list[Mat]:
    out = []
    for h in ambient.elements(budget):
        if h * g == g * h:
            out.append(h)
    return out


def polynomial_span_centralizer(g: Mat, ambient: MatGroup) -> list[Mat]:
    """O[g] cap G: for n = 2 the span {a + b g} intersected with the group."""
    R = g.ring
    one = Mat.identity(R, 2)
    out = []
    for a in R.elements():
        for b in R.elements():
            m = Mat.scalar(R, a).add(Mat(R, tuple(tuple(R.mul(b, e) for e in row) for row in g.rows)))
            if ambient.contains(m):
                out.append(m)
    return out


def is_regular(g: Mat, ambient: MatGroup, budget: int = 10**7) -> bool:
    cz = centralizer(g, ambient, budget)
    span = polynomial_span_centralizer(g, ambient)
    return set(cz) == set(span)


# ---------------------------------------------------------------------------
# triangularization (Lemma-style constructive algorithm over the local ring)


def _smith_kernel_primitive(ring: Ring, rows, n: int):
    """Primitive kernel vector of the n x n matrix `rows`, or None.

    Row/column reduction with valuation pivoting; column operations are
    tracked so kernel vectors of the diagonal form pull back.
    """
    A = [list(r) for r in rows]
    C = [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)]

    def colop(j_dst, j_src, factor):
        for i in range(n):
            A[i][j_dst] = ring.sub(A[i][j_dst], ring.mul(factor, A[i][j_src]))
        for i in range(n):
            C[i][j_dst] = ring.sub(C[i][j_dst], ring.mul(factor, C[i][j_src]))

    def colswap(j1, j2):
        for i in range(n):
            A[i][j1], A[i][j2] = A[i][j2], A[i][j1]
            C[i][j1], C[i][j2] = C[i][j2], C[i][j1]

    for k in range(n):
        piv, pv = None, ring.r
        for i in range(k, n):
            for j in range(k, n):
                v = ring.valuation(A[i][j])
                if v < pv:
                    piv, pv = (i, j), v
        if piv is None or pv == ring.r:
            # remaining block is zero: e_k direction is in the kernel
            return tuple(C[i][k] for i in range(n))
        pi, pj = piv
        if pi != k:
            A[pi], A[k] = A[k], A[pi]
        if pj != k:
            colswap(pj, k)
        pivot = A[k][k]
        for i in range(k + 1, n):
            if A[i][k] != ring.zero:
                f = ring.divide_exact(A[i][k], pivot)
                for j in range(k, n):
                    A[i][j] = ring.sub(A[i][j], ring.mul(f, A[k][j]))
        for j in range(k + 1, n):
            if A[k][j] != ring.zero:
                colop(j, k, ring.divide_exact(A[k][j], pivot))
    return None


def _complete_primitive(ring: Ring, v, n: int) -> Mat:
    """lambda in SL_n with first column v (v primitive)."""
    unit_idx = next(i for i, c in enumerate(v) if ring.is_unit(c))
    cols = [list(v)]
    for j in range(n):
        if j != unit_idx:
            cols.append([ring.one if i == j else ring.zero for i in range(n)])
    m = Mat(ring, tuple(tuple(cols[j][i] for j in range(n)) for i in range(n)))
    d = m.det()
    di = ring.inv(d)
    # scale the last column to reach det 1
    rows = [list(r) for r in m.rows]
    for i in range(n):
        rows[i][n - 1] = ring.mul(di, rows[i][n - 1])
    return Mat(ring, tuple(tuple(r) for r in rows))


def triangularize(x: Mat, roots=None) -> Mat:
    """lambda in SL_n with lambda^-1 x lambda upper triangular.

    Follows the constructive proof: find an eigenvalue with a primitive
    eigenvector (exhaustive search over the ring unless `roots` is given),
    complete the eigenvector to an SL_n matrix, recurse on the lower block.
    Raises NonSplit when no full root chain exists in the ring.
    """
    R, n = x.ring, x.n
    if n == 1:
        return Mat.identity(R, 1)
    candidates = list(roots) if roots is not None else list(R.elements())
    for a in candidates:
        shifted = [
            [R.sub(x.rows[i][j], a if i == j else R.zero) for j in range(n)]
            for i in range(n)
        ]
        v = _smith_kernel_primitive(R, shifted, n)
        if v is None:
            continue
        lam1 = _complete_primitive(R, v, n)
        x1 = lam1.inv() * x * lam1
        if any(x1.rows[i][0] != R.zero for i in range(1, n)):
            continue
        sub = Mat(R, tuple(tuple(x1.rows[i][j] for j in range(1, n)) for i in range(1, n)))
        try:
            lam_sub = triangularize(sub, roots=roots)
        except NonSplit:
            continue
        block = [[R.one if i == j else R.zero for j in range(n)] for i in range(n)]
        for i in range(n - 1):
            for j in range(n - 1):
                block[i + 1][j + 1] = lam_sub.rows[i][j]
        lam = lam1 * Mat(R, tuple(tuple(r) for r in block))
        out = lam.inv() * x * lam
        assert is_upper(out)
        return lam
    raise NonSplit("characteristic polynomial does not split over the ring")


def has_ring_eigenvalue(x: Mat) -> bool:
    """True iff some ring element is an eigenvalue with a primitive eigenvector."""
    R, n = x.ring, x.n
    for a in R.elements():
        shifted = [
            [R.sub(x.rows[i][j], a if i == j else R.zero) for j in range(n)]
            for i in range(n)
        ]
        if _smith_kernel_primitive(R, shifted, n) is not None:
            return True
    return False


# ---------------------------------------------------------------------------
# normalizer / double cosets / quasi-Cartans


def normalizer_check_B(group: MatGroup, budget: int = 10**7) -> bool:
    """N_G(B) = B by exhaustion."""
    B = Subgroup("B", group)
    bgens = B.generators()
    for g in group.elements(budget):
        gi = g.inv()
        if all(B.contains(g * h * gi) for h in bgens):
            if not B.contains(g):
                return False
    return True


def double_cosets(H: Subgroup, K: Subgroup, ambient: MatGroup, budget: int = 10**7):
    """Partition of ambient into H\\G/K double cosets: [(representative, size)].

    Representative is the serialization-minimal element of its coset.
    """
    elems = ambient.elements(budget)
    hgens = [g for g in H.generators()] + [g.inv() for g in H.generators()]
    kgens = [g for g in K.generators()] + [g.inv() for g in K.generators()]
    seen: dict = {}
    cosets = []
    for g in elems:
        if g.rows in seen:
            continue
        # BFS the double coset of g
        frontier = [g]
        seen[g.rows] = len(cosets)
        members = 1
        rep = g.rows
        while frontier:
            new = []
            for x in frontier:
                for h in hgens:
                    y = h * x
                    if y.rows not in seen:
                        seen[y.rows] = len(cosets)
                        new.append(y)
                        members += 1
                        if y.rows < rep:
                            rep = y.rows
                for k in kgens:
                    y = x * k
                    if y.rows not in seen:
                        seen[y.rows] = len(cosets)
                        new.append(y)
                        members += 1
                        if y.rows < rep:
                            rep = y.rows
            frontier = new
        cosets.append((Mat(ambient.ring, rep), members))
    assert sum(s for _, s in cosets) == len(elems)
    return cosets


def standard_w(ring: Ring) -> Mat:
    return Mat.from_ints(ring, [[0, 1], [-1, 0]])


def standard_e(ring: Ring) -> Mat:
    """[[1,0],[pi,1]], the non-Weyl double coset representative."""
    m = Mat.identity(ring, 2)
    rows = [list(r) for r in m.rows]
    rows[1][0] = ring.z_pow(ring.e)  # pi = z^e
    return Mat(ring, tuple(tuple(r) for r in rows))


def quasi_cartan_representatives(ring: Ring):
    """The four reference regular separable matrices at r = 2, p odd: a split
    diagonal with distinct residues, the nonsplit (zeta) companion, and the
    two ramified companions.  The last three are [[0,1],[c,0]] with c in
    {zeta, pi, zeta*pi}; the ramified two are not group elements but their
    centralizers in the group are the ramified quasi-Cartans."""
    F = ring.field
    zeta = F.generator()  # a non-square unit
    t = Mat(ring, ((ring.one, ring.zero), (ring.zero, ring.monomial(0, zeta))))
    c_zeta = Mat(ring, ((ring.zero, ring.one), (ring.monomial(0, zeta), ring.zero)))
    c_pi = Mat(ring, ((ring.zero, ring.one), (ring.z_pow(1), ring.zero)))
    c_zpi = Mat(ring, ((ring.zero, ring.one), (ring.monomial(1, zeta), ring.zero)))
    return [t, c_zeta, c_pi, c_zpi]


def matrix_centralizer_in_group(M: Mat, group: MatGroup, budget: int = 10**7):
    return [h for h in group.elements(budget) if h * M == M * h]


def quasi_cartan_classes(group: MatGroup, budget: int = 10**7):
    """Conjugacy classes of quasi-Cartans C_G(M), M a regular separable
    2x2 matrix over the ring (M itself need not be invertible).

    Returns (classes, assigned) where classes is a list of
    (member list of a representative subgroup, number of subgroups in the
    class) and assigned maps each subgroup frozenset to its class index.
    """
    G, R = group, group.ring
    elems = G.elements(budget)
    one = Mat.identity(R, 2)
    ring_elems = list(R.elements())
    # enumerate spans O[M], dedupe, keep one regular separable M per span
    span_reps: dict = {}
    for entries in itertools.product(ring_elems, repeat=4):
        M = Mat(R, ((entries[0], entries[1]), (entries[2], entries[3])))
        if not is_separable(M):
            continue
        span = frozenset(
            Mat.scalar(R, a).add(Mat(R, tuple(tuple(R.mul(b, x) for x in row) for row in M.rows))).rows
            for a in ring_elems
            for b in ring_elems
        )
        if span not in span_reps:
            span_reps[span] = M
    seen_subgroups: dict = {}
    for span, M in span_reps.items():
        cz = [h for h in elems if h * M == M * h]
        # regularity: centralizer must be the unit part of the span
        if any(h.rows not in span for h in cz):
            continue
        key = frozenset(m.rows for m in cz)
        if key not in seen_subgroups:
            seen_subgroups[key] = cz
    keys = list(seen_subgroups)
    assigned: dict = {}
    classes = []
    for key in keys:
        if key in assigned:
            continue
        cls = {key}
        base = seen_subgroups[key]
        for h in elems:
            hi = h.inv()
            cls.add(frozenset((h * m * hi).rows for m in base))
        n_in_class = 0
        for c in cls:
            if c in seen_subgroups:
                assigned[c] = len(classes)
                n_in_class += 1
        classes.append((base, n_in_class))
    return classes, assigned
