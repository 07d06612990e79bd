"""Orbit-method character construction at truncation r = 2 (the certified
even-r path): additive characters psi_beta on the congruence kernel,
stabilizers, one-dimensional extensions, induction to the full group, and
the census of primitive irreducibles together with inflations from r = 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .classfn import ClassFunction, Cyc, GroupData, abelian_characters, group_data, induce, inner_product
from .dixon import character_table
from .errors import LevelTooLow, NotExtendable, ParameterMismatch
from .matgrp import Mat, MatGroup, Subgroup
from .orbits import LieElem, OrbitLabel, classify_orbits
from .ring import Ring, make_ring


def prime_trace(field, a) -> int:
    """Absolute trace F_q -> F_p as a small integer."""
    acc = field.zero
    x = a
    for _ in range(field.n):
        acc = field.add(acc, x)
        x = field.frob(x, 1)
    return field.to_vec(acc)[0]


@dataclass
class AdditiveCharacter:
    """psi on O_{F,r} with conductor p^r: psi(a) = zeta_p^(Tr of top coefficient)."""

    ring: Ring
    N: int  # ambient cyclotomic order, multiple of p

    def __post_init__(self):
        if self.N % self.ring.p:
            raise ParameterMismatch("cyclotomic order must be divisible by p")

    def value(self, a) -> Cyc:
        t = prime_trace(self.ring.field, a[self.ring.r - 1])
        return Cyc.root(self.N, t * (self.N // self.ring.p))


@dataclass
class KernelCharacter:
    """psi_beta(x) = psi(Tr(beta_lift (x-1))) on K_i."""

    beta: LieElem
    level: int
    ring: Ring  # the level-r ring of the ambient group
    psi: AdditiveCharacter
    values: dict  # Mat.rows -> Cyc on all of K_i

    def __call__(self, m: Mat) -> Cyc:
        return self.values[m.rows]


def _lift_beta(beta_mat: Mat, ring: Ring) -> Mat:
    """Zero-pad coefficients of a matrix over O_{r'} into O_r; the choice is
    killed by multiplication against ker(O_r -> O_{r'}) elements."""
    src = beta_mat.ring
    out_rows = []
    for row in beta_mat.rows:
        out_row = []
        for e in row:
            out_row.append(tuple(list(e) + [ring.field.zero] * (ring.r - src.r)))
        out_rows.append(tuple(out_row))
    return Mat(ring, tuple(out_rows))


def psi_beta(beta: LieElem, i: int, group: MatGroup, N: int) -> KernelCharacter:
    """The character of K_i attached to beta (defined over O_{F,r-i})."""
    R = group.ring
    if 2 * i < R.r:
        raise LevelTooLow(f"2*{i} < r={R.r}")
    psi = AdditiveCharacter(R, N)
    beta_hat = _lift_beta(beta.normal_form().mat, R)
    one = Mat.identity(R, 2)
    values = {}
    for k in Subgroup("K", group, i).elements():
        x = k.sub(one)
        tr = (beta_hat * x).trace()
        values[k.rows] = psi.value(tr)
    return KernelCharacter(beta, i, R, psi, values)


def kernel_generators(group: MatGroup, i: int) -> list[Mat]:
    """Generators of the abelian group K_i (2i >= r)."""
    R = group.ring
    gens = []
    F = R.field
    one = Mat.identity(R, 2)
    basis = []
    g, cur = F.generator(), F.one
    for _ in range(F.n):
        basis.append(cur)
        cur = F.mul(cur, g)
    for j in range(i, R.r):
        for c in basis:
            # the scalar direction (0,0)-alone matters for GL; the SL filter
            # drops it via the determinant
            for pos, tz in [((0, 1), False), ((1, 0), False), ((0, 0), True), ((0, 0), False)]:
                rows = [list(rw) for rw in one.rows]
                ent = list(rows[pos[0]][pos[1]])
                ent[j] = F.add(ent[j], c)
                rows[pos[0]][pos[1]] = tuple(ent)
                if tz:
                    ent2 = list(rows[1][1])
                    ent2[j] = F.sub(ent2[j], c)
                    rows[1][1] = tuple(ent2)
                m = Mat(R, tuple(tuple(rw) for rw in rows))
                if group.contains(m):
                    gens.append(m)
    return gens


def stabilizer_of_character(kchar: KernelCharacter, group: MatGroup, budget: int = 10**7) -> Subgroup:
    """Stab_G(psi_beta) by direct test on kernel generators."""
    gens = kernel_generators(group, kchar.level)
    out = []
    for g in group.elements(budget):
        gi = g.inv()
        if all(kchar.values[(g * k * gi).rows] == kchar.values[k.rows] for k in gens):
            out.append(g)
    return Subgroup("explicit", group, tuple(out))


def stabilizer_formula_check(kchar: KernelCharacter, stab: Subgroup, group: MatGroup) -> bool:
    """Stab = C_G(beta_hat) K_{l'} (the p != 2 certified identity at r = 2)."""
    R = group.ring
    l_prime = R.r // 2
    beta_hat = _lift_beta(kchar.beta.normal_form().mat, R)
    cz = [h for h in group.elements() if h * beta_hat == beta_hat * h]
    kl = Subgroup("K", group, l_prime).elements()
    product = {(c * k).rows for c in cz for k in kl}
    return product == {m.rows for m in stab.elements()}


# ---------------------------------------------------------------------------
# subgroup structure helpers


def find_generators(elements: list[Mat]) -> list[Mat]:
    """Small generating set by greedy closure."""
    elems_sorted = sorted(elements, key=lambda m: m.rows)
    gens: list[Mat] = []
    closure = {Mat.identity(elements[0].ring, elements[0].n).rows}
    for x in elems_sorted:
        if x.rows in closure:
            continue
        gens.append(x)
        closure = _close(gens, len(elements))
        if len(closure) == len(elements):
            break
    return gens


def _close(gens: list[Mat], cap: int) -> set:
    one = Mat.identity(gens[0].ring, gens[0].n)
    seen = {one.rows}
    frontier = [one]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y.rows not in seen:
                    seen.add(y.rows)
                    new.append(y)
        frontier = new
        assert len(seen) <= cap
    return seen


def commutator_subgroup(elements: list[Mat]) -> set:
    """[S,S] as a set of rows: normal closure of generator commutators."""
    sgens = find_generators(elements)
    comm_gens = []
    for a in sgens:
        ai = a.inv()
        for b in sgens:
            c = a * b * ai * b.inv()
            comm_gens.append(c)
    sub = _close(comm_gens, len(elements)) if comm_gens else set()
    ring = elements[0].ring
    if not sub:
        return {Mat.identity(ring, 2).rows}
    # iterate conjugation by S-generators until the subgroup is normal
    while True:
        new_gens = []
        for rows in list(sub):
            x = Mat(ring, rows)
            for g in sgens:
                y = g * x * g.inv()
                if y.rows not in sub:
                    new_gens.append(y)
        if not new_gens:
            return sub
        comm_gens.extend(new_gens)
        sub = _close(comm_gens, len(elements))


def extensions_over(kchar: KernelCharacter, stab: Subgroup, gdata_exponent: int) -> list[dict]:
    """All 1-dimensional characters of S restricting to psi_beta on K_i."""
    s_elems = stab.elements()
    ring = s_elems[0].ring
    derived = commutator_subgroup(s_elems)
    # extendability: psi_beta must be trivial on [S,S] cap K
    for rows, val in kchar.values.items():
        if rows in derived and not (val == Cyc.rational(val.N, 1)):
            raise NotExtendable("psi_beta nontrivial on [S,S]")
    # A = S/[S,S]
    coset_of: dict = {}
    coset_reps: list = []
    derived_mats = [Mat(ring, rw) for rw in derived]
    for x in sorted(s_elems, key=lambda m: m.rows):
        if x.rows in coset_of:
            continue
        cid = len(coset_reps)
        coset_reps.append(x)
        for d in derived_mats:
            coset_of[(x * d).rows] = cid

    def amult(c1: int, c2: int) -> int:
        return coset_of[(coset_reps[c1] * coset_reps[c2]).rows]

    N = gdata_exponent
    chars = abelian_characters(list(range(len(coset_reps))), amult, coset_of[Mat.identity(ring, 2).rows], N)
    out = []
    k_items = [(rows, val) for rows, val in kchar.values.items()]
    for chi in chars:
        if all(chi[coset_of[rows]] == val.promote(N) for rows, val in k_items):
            out.append({m.rows: chi[coset_of[m.rows]] for m in s_elems})
    if not out:
        raise NotExtendable("no extension found")
    return out


# ---------------------------------------------------------------------------
# the census


@dataclass
class Irrep:
    char: ClassFunction
    label: str  # split | cuspidal | nilpotent | inflated
    orbit: OrbitLabel | None
    dim: int


def build_primitive_irreps(group: MatGroup, gdata: GroupData, budget: int = 10**7) -> list[Irrep]:
    """All primitive irreducible characters of SL2(O_{F,2}), tagged by orbit."""
    R = group.ring
    if R.r != 2:
        raise ParameterMismatch("certified construction needs r = 2")
    mode = "traceZero" if R.p != 2 else "modCenter"
    residue_ring = make_ring(R.p, R.f, R.m, 1, 1)
    residue_group = MatGroup(group.kind, residue_ring)
    orbits = classify_orbits(residue_ring, mode, residue_group)
    out: list[Irrep] = []
    for label, _size in orbits:
        if label.kind == "imprimitive":
            continue
        kchar = psi_beta(label.representative, 1, group, gdata.exponent)
        stab = stabilizer_of_character(kchar, group, budget)
        s_elems = stab.elements()
        s_order = len(s_elems)
        k1_rows = {m.rows for m in Subgroup("K", group, 1).elements()}
        derived = commutator_subgroup(s_elems)
        if derived <= k1_rows:
            # S/K_1 abelian: extensions are exactly the linear characters over psi_beta
            for rho in extensions_over(kchar, stab, gdata.exponent):
                chi = induce(rho, s_order, gdata)
                assert inner_product(chi, chi) == 1, "induced character not irreducible"
                out.append(Irrep(chi, label.kind, label, int(chi.dim)))
        else:
            # degenerate small-q case (e.g. the q=2 cuspidal orbit, a single
            # point mod center): the stabilizer quotient is nonabelian, so take
            # all irreducibles of S lying over psi_beta directly
            for chi in _irreps_of_s_over(kchar, stab, group, gdata):
                out.append(Irrep(chi, label.kind, label, int(chi.dim)))
    return out


def _irreps_of_s_over(kchar: KernelCharacter, stab: Subgroup, group: MatGroup, gdata: GroupData):
    s_elems = stab.elements()
    sd = GroupData(s_elems, find_generators(s_elems), "Stab")
    table = character_table(sd)
    k_elems = Subgroup("K", group, kchar.level).elements()
    out = []
    for chi in table:
        acc = Cyc.zero(sd.exponent)
        for k in k_elems:
            acc = acc + chi(k) * kchar.values[k.rows].promote(sd.exponent).conj()
        if acc.as_fraction() != 0:
            ind = induce({m.rows: chi(m) for m in s_elems}, len(s_elems), gdata)
            assert inner_product(ind, ind) == 1
            out.append(ind)
    return out


def inflated_irreps(group: MatGroup, gdata: GroupData) -> list[Irrep]:
    """Irr(G_{F,1}) inflated through the reduction map."""
    R = group.ring
    residue_group = MatGroup(group.kind, make_ring(R.p, R.f, R.m, 1, 1))
    g1 = group_data(residue_group)
    table1 = character_table(g1)
    out = []
    for chi1 in table1:
        vals = []
        for rep in gdata.reps:
            red = rep.reduce(1)
            v = chi1.values[g1.class_of[red.rows]]
            vals.append(v.promote(gdata.exponent))
        chi = ClassFunction(gdata, vals)
        out.append(Irrep(chi, "inflated", None, int(chi.dim)))
    return out


def full_character_table(group: MatGroup, gdata: GroupData, budget: int = 10**7) -> list[Irrep]:
    """Primitive irreps + inflations; checks the census is complete."""
    prims = build_primitive_irreps(group, gdata, budget)
    infls = inflated_irreps(group, gdata)
    table = prims + infls
    assert len(table) == gdata.k, f"{len(table)} irreps vs {gdata.k} classes"
    assert sum(t.dim**2 for t in table) == gdata.order
    for i, t1 in enumerate(table):
        for j in range(i, len(table)):
            expect = Fraction(1 if i == j else 0)
            assert inner_product(t1.char, table[j].char) == expect
    # primitivity tags are consistent: primitive irreps are nontrivial on
    # K_{r-1}, inflations are trivial on it
    K_last = Subgroup("K", group, group.ring.r - 1).elements()
    for t in table:
        nontrivial = any(t.char(k) != t.char(Mat.identity(group.ring, 2)) for k in K_last)
        assert nontrivial == (t.label != "inflated")
    return table


# ---------------------------------------------------------------------------
# the Mackey containment test for nilpotent extensions


def mackey_nilpotent_test(rho: dict, stab: Subgroup, group: MatGroup, gdata: GroupData):
    """Returns (mackey_sum, direct_inner, contained, u_mult, wbar_mult).

    mackey_sum and direct_inner are the two independent computations of
    <Ind_S^G rho, Ind_U^G 1>; containment in Ind_U^G 1 is equivalent to
    u_mult = <rho|_U, 1> = 1, and the w-term wbar_mult = <rho|_{(U^-)^1}, 1>
    vanishes for nilpotent orbit characters.
    """
    N = gdata.exponent
    s_elems = stab.elements()
    s_rows = {m.rows for m in s_elems}
    U = Subgroup("U", group)
    u_elems = U.elements()
    u_rows = {m.rows for m in u_elems}

    # Mackey sum over S\G/U double cosets
    seen: set = set()
    mackey = Fraction(0)
    for x in gdata.elements:
        if x.rows in seen:
            continue
        coset = set()
        frontier = [x]
        coset.add(x.rows)
        while frontier:
            new = []
            for y in frontier:
                for s in _coset_gens(s_elems):
                    z = s * y
                    if z.rows not in coset:
                        coset.add(z.rows)
                        new.append(z)
                for u in _coset_gens(u_elems):
                    z = y * u
                    if z.rows not in coset:
                        coset.add(z.rows)
                        new.append(z)
            frontier = new
        seen |= coset
        xi = x.inv()
        inter = [m for m in u_elems if (x * m * xi).rows in s_rows]
        acc = Cyc.zero(N)
        for m in inter:
            acc = acc + rho[(x * m * xi).rows]
        mackey += acc.as_fraction() / len(inter)

    ind_rho = induce(rho, len(s_elems), gdata)
    one_u = {m.rows: Cyc.rational(N, 1) for m in u_elems}
    ind_u = induce(one_u, len(u_elems), gdata)
    direct = inner_product(ind_rho, ind_u)

    acc = Cyc.zero(N)
    for m in u_elems:
        if m.rows in rho:
            acc = acc + rho[m.rows]
        else:
            raise ParameterMismatch("U not inside S")
    u_mult = acc.as_fraction() / len(u_elems)

    uminus1 = Subgroup("Uminus1", group).elements()
    acc = Cyc.zero(N)
    for m in uminus1:
        acc = acc + rho[m.rows]
    wbar_mult = acc.as_fraction() / len(uminus1)

    contained = direct > 0
    return mackey, direct, contained, u_mult, wbar_mult


_COSET_GENS_CACHE: dict = {}


def _coset_gens(elems: list[Mat]) -> list[Mat]:
    key = id(elems)
    if key not in _COSET_GENS_CACHE:
        _COSET_GENS_CACHE[key] = (find_generators(elems), elems)
    return _COSET_GENS_CACHE[key][0]
