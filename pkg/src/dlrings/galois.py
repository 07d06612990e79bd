"""Semilinear endomorphisms of the matrix groups, Lang maps, fixed groups,
and constructive Lang sections.

The Lang equation x^{-1} phi^s(x) = v is F_p-linear in the rows of x
(Frobenius is additive, right multiplication is linear), so sections are
found exactly by nullspace computations over F_p at the minimal
coefficient level where they exist -- no group scans.  That level is
m0 * ord(N(v)) where N(v) = v phi(v) ... phi^{m0-1}(v) is the norm
cocycle; a solution exists at level M iff the M-norm collapses to 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import gf
from .errors import BudgetExceeded, ParameterMismatch
from .matgrp import Mat, MatGroup, Subgroup
from .ring import Ring, embed_ring, make_ring


@dataclass(frozen=True)
class RingEndo:
    """phi^phi_power o sigma^sigma_power, acting entrywise on matrices."""

    phi: int = 0
    sigma: int = 0

    def apply_elem(self, ring: Ring, a):
        return ring.frobenius(ring.sigma(a, self.sigma), self.phi)

    def apply(self, m: Mat) -> Mat:
        R = m.ring
        return Mat(R, tuple(tuple(self.apply_elem(R, e) for e in row) for row in m.rows))

    def compose(self, other: "RingEndo") -> "RingEndo":
        return RingEndo(self.phi + other.phi, self.sigma + other.sigma)

    def to_json(self):
        return {"phi": self.phi, "sigma": self.sigma}


PHI = RingEndo(phi=1)
SIGMA = RingEndo(sigma=1)


def lang(g: Mat, endo: RingEndo) -> Mat:
    """g^{-1} endo(g)."""
    return g.inv() * endo.apply(g)


def fixed_group(endos, ambient: MatGroup, budget: int = 10**7) -> list[Mat]:
    out = []
    for m in ambient.elements(budget):
        if all(e.apply(m) == m for e in endos):
            out.append(m)
    return out


def frobenius_norm(v: Mat, steps: int, endo: RingEndo = PHI) -> Mat:
    """v * endo(v) * endo^2(v) * ... * endo^{steps-1}(v)."""
    acc = v
    cur = v
    for _ in range(steps - 1):
        cur = endo.apply(cur)
        acc = acc * cur
    return acc


def element_order(m: Mat, cap: int = 10**6) -> int:
    one = Mat.identity(m.ring, m.n)
    x, k = m, 1
    while x != one:
        x = x * m
        k += 1
        if k > cap:
            raise BudgetExceeded("element order exceeds cap")
    return k


# ---------------------------------------------------------------------------
# working levels


_WORK_RING_CACHE: dict = {}


def working_ring(base: Ring, M: int) -> Ring:
    """Ring with the same (q, r, e) but coefficient field F_{q^M}."""
    key = (base.p, base.f, M, base.r, base.e)
    got = _WORK_RING_CACHE.get(key)
    if got is None:
        if M == base.m:
            got = base
        else:
            field = gf.get_field(base.p, base.f * M)
            zeta = None
            if base.e > 1:
                emb = gf.get_embedding(gf.get_field(base.p, base.f), field)
                got_z = _zeta_in_base(base)
                zeta = emb.fwd(got_z)
            got = Ring(field, base.f, base.r, base.e, zeta)
        _WORK_RING_CACHE[key] = got
    return got


def _zeta_in_base(R: Ring):
    """zeta as an element of F_q (required: phi fixes zeta)."""
    Fq = gf.get_field(R.p, R.f)
    emb = gf.get_embedding(Fq, R.field)
    for a in Fq.elements():
        if a and emb.fwd(a) == R.zeta:
            return a
    raise ParameterMismatch("zeta_e is not phi-fixed (need e | q-1)")


def embed_mat(m: Mat, target: Ring) -> Mat:
    phi = embed_ring(m.ring, target)
    return Mat(target, tuple(tuple(phi(e) for e in row) for row in m.rows))


# ---------------------------------------------------------------------------
# coordinates over F_p


def _coords(field, a):
    if field.backend == "table":
        return field.to_vec(a)
    return a


def _from_coords(field, vec):
    if field.backend == "table":
        return field.from_vec(tuple(int(c) for c in vec))
    return tuple(int(c) for c in vec)


def _basis(field):
    d = field.n
    out = []
    for i in range(d):
        v = [0] * d
        v[i] = 1
        out.append(_from_coords(field, v))
    return out


def _mult_matrix(field, c):
    """d x d F_p matrix of y -> y*c in the coordinate basis."""
    d = field.n
    cols = []
    for b in _basis(field):
        cols.append(_coords(field, field.mul(b, c)))
    return np.array(cols, dtype=np.int64).T


def _frob_matrix(field, e):
    d = field.n
    cols = []
    for b in _basis(field):
        cols.append(_coords(field, field.frob(b, e)))
    return np.array(cols, dtype=np.int64).T


# ---------------------------------------------------------------------------
# the semilinear solver


def lang_section(target: Mat, s: int, side: str = "right", max_steps: int = 64):
    """Solve the Lang equation for phi^s at the minimal coefficient level.

    side="right":  x^{-1} phi^s(x) = target
    side="left":   x phi^s(x)^{-1} = target

    Returns (x, ring_W, embed) where embed maps target.ring elements into
    ring_W.  For SL targets the solution is det-normalized to 1.
    """
    if side == "left":
        y, ring_w, emb = lang_section(target.transpose().inv(), s, "right", max_steps)
        return y.transpose(), ring_w, emb
    R0 = target.ring
    if target.n != 2:
        raise NotImplementedError("lang_section is tuned for n = 2")
    m0 = R0.m
    base = _lcm(m0, s)
    # existence level: a solution at level M forces the M-step norm cocycle
    # to collapse to 1, and H^1-vanishing makes that sufficient.
    if s == 1:
        t = element_order(frobenius_norm(target, m0, RingEndo(phi=1)))
        step = _lcm(base, m0 * t)
    elif m0 == 1:
        t = element_order(target)  # target is phi-fixed, norm = target^k
        step = _lcm(base, s * t)
    else:
        step = base
    sl = target.det() == R0.one
    for k in range(1, max_steps + 1):
        M = step * k
        x = _solve_at_level(target, s, M, sl)
        if x is not None:
            ring_w = x.ring
            emb = embed_ring(R0, ring_w)
            # verify
            lhs = x.inv() * RingEndo(phi=s).apply(x)
            rhs = Mat(ring_w, tuple(tuple(emb(e) for e in row) for row in target.rows))
            assert lhs == rhs, "lang solver produced a non-solution"
            return x, ring_w, emb
    raise BudgetExceeded(f"no Lang section within {max_steps} level steps")


def _lcm(a, b):
    import math

    return a * b // math.gcd(a, b)


def _solve_at_level(target: Mat, s: int, M: int, sl: bool):
    R0 = target.ring
    ring_w = working_ring(R0, M)
    W = ring_w.field
    p, r, d = R0.p, R0.r, W.n
    emb = embed_ring(R0, ring_w)
    v = [[emb(e) for e in row] for row in target.rows]
    nslots = 2 * r  # one row: 2 ring entries x r z-coefficients
    dim = nslots * d
    FR = _frob_matrix(W, R0.f * s)
    # T(rho)_j = phi^s(rho_j) - sum_i rho_i v_{ij}; block (slot_out, slot_in)
    A = np.zeros((dim, dim), dtype=np.int64)
    for ent in range(2):
        for zc in range(r):
            sl_out = ent * r + zc
            A[sl_out * d : (sl_out + 1) * d, sl_out * d : (sl_out + 1) * d] += FR
    for i in range(2):  # rho entry index
        for j in range(2):  # output entry index
            vij = v[i][j]
            for w_pow in range(r):
                c = vij[w_pow]
                if c == W.zero:
                    continue
                MU = _mult_matrix(W, c)
                for u_pow in range(r - w_pow):
                    sl_in = i * r + u_pow
                    sl_out = j * r + (u_pow + w_pow)
                    A[sl_out * d : (sl_out + 1) * d, sl_in * d : (sl_in + 1) * d] -= MU
    basis = gf.nullspace_modp(A % p, p)
    if not basis:
        return None

    def decode(vec):
        row = []
        for ent in range(2):
            coeffs = []
            for zc in range(r):
                sl = ent * r + zc
                coeffs.append(_from_coords(W, vec[sl * d : (sl + 1) * d]))
            row.append(tuple(coeffs))
        return tuple(row)

    rows = [decode(b) for b in basis]
    # first row: any with unit leading behaviour at the residue
    rho1 = next((rw for rw in rows if _residue_nonzero(ring_w, rw)), None)
    if rho1 is None:
        return None
    x = _pair_with_unit_det(ring_w, rows, basis, rho1, p, decode)
    if x is None:
        return None
    if sl:
        det = x.det()
        # det is phi^s-fixed, so scaling the first row keeps a solution
        di = ring_w.inv(det)
        rows_x = [list(rr) for rr in x.rows]
        rows_x[0] = [ring_w.mul(di, e) for e in rows_x[0]]
        x = Mat(ring_w, tuple(tuple(rr) for rr in rows_x))
        assert x.det() == ring_w.one
    return x


def _residue_nonzero(ring_w, row):
    return any(e[0] != ring_w.field.zero for e in row)


def _pair_with_unit_det(ring_w, rows, basis, rho1, p, decode):
    for rho2 in rows:
        m = Mat(ring_w, (rho1, rho2))
        if ring_w.is_unit(m.det()):
            return m
    # sparse F_p-combinations of basis vectors
    nb = len(basis)
    for count in range(2, min(nb, 6) + 1):
        for idxs in itertools.combinations(range(nb), count):
            vec = sum(basis[i] for i in idxs) % p
            rho2 = decode(vec)
            m = Mat(ring_w, (rho1, rho2))
            if ring_w.is_unit(m.det()):
                return m
    return None


# ---------------------------------------------------------------------------
# twisted fixed sets


@dataclass(frozen=True)
class TwistedFrobenius:
    g: Mat
    endo: RingEndo
    m: int

    def apply(self, x: Mat) -> Mat:
        e = RingEndo(self.endo.phi * self.m, self.endo.sigma * self.m)
        g = self.g if self.g.ring is x.ring else embed_mat(self.g, x.ring)
        return g * e.apply(x)


def twisted_fixed_enumerate(tw: TwistedFrobenius, ambient: MatGroup, budget: int = 10**7):
    """All x with g * phi^m(x) = x, as x0 * G^{phi^m}; yields Mats over the
    section's working ring."""
    if tw.endo.sigma:
        raise NotImplementedError("twists along sigma are out of scope")
    m = tw.m * tw.endo.phi
    R0 = make_ring(ambient.ring.p, ambient.ring.f, m, ambient.ring.r, ambient.ring.e)
    level_group = MatGroup(ambient.kind, R0)
    if level_group.order() > budget:
        raise BudgetExceeded(f"level group order {level_group.order()} > {budget}")
    one = Mat.identity(tw.g.ring, 2)
    if tw.g == one:
        x0, ring_w, _ = Mat.identity(R0, 2), R0, None
        emb_y = lambda y: y  # noqa: E731
    else:
        x0, ring_w, _ = lang_section(tw.g, m, side="left")
        phi_y = embed_ring(R0, ring_w)
        emb_y = lambda y: Mat(ring_w, tuple(tuple(phi_y(e) for e in row) for row in y.rows))  # noqa: E731
    for y in level_group.elements(budget):
        yield x0 * emb_y(y)
