"""Dixon-Schneider character tables for small groups (the r = 1 tables).

Class-sum structure constants are simultaneously diagonalized over F_P
for a prime P = 1 mod exponent(G) with P > 2*sqrt(|G|); central-character
eigenvalues lift to exact cyclotomic values through root-of-unity
multiplicities.  Completeness and orthonormality are asserted, so any
internal failure surfaces immediately.
"""

from __future__ import annotations

import numpy as np

from .classfn import ClassFunction, Cyc, GroupData, inner_product
from .gf import is_prime, nullspace_modp, prime_factors


def _structure_constants(g: GroupData):
    k = g.k
    class_members: list[list] = [[] for _ in range(k)]
    for x in g.elements:
        class_members[g.class_of[x.rows]].append(x)
    a = np.zeros((k, k, k), dtype=np.int64)
    invs = g.inverses()
    for l in range(k):
        gl = g.reps[l]
        for i in range(k):
            for x in class_members[i]:
                j = g.class_of[(invs[x.rows] * gl).rows]
                a[i, j, l] += 1
    return a


def _pick_prime(g: GroupData) -> int:
    P = g.exponent + 1
    bound = 2 * int(np.sqrt(g.order)) + 1
    while not (is_prime(P) and P > bound):
        P += g.exponent
    return P


def _solve_modp(V, B, P):
    """R with V R = B mod P (V of full column rank)."""
    V = np.array(V, dtype=np.int64) % P
    B = np.array(B, dtype=np.int64) % P
    rows, cols = V.shape
    aug = np.concatenate([V, B], axis=1) % P
    r = 0
    for c in range(cols):
        piv = next(rr for rr in range(r, rows) if aug[rr, c] % P)
        if piv != r:
            aug[[r, piv]] = aug[[piv, r]]
        aug[r] = (aug[r] * pow(int(aug[r, c]), -1, P)) % P
        mask = (aug[:, c] % P) != 0
        mask[r] = False
        if mask.any():
            aug[mask] = (aug[mask] - np.outer(aug[mask, c], aug[r])) % P
        r += 1
    return aug[:cols, cols:] % P


def _identity_index(g: GroupData) -> int:
    for i, rp in enumerate(g.reps):
        if rp * rp == rp:
            return i
    raise AssertionError("no identity class")


def _sqrt_mod(a: int, P: int) -> int:
    for x in range(P):
        if x * x % P == a % P:
            return x
    raise ValueError("no square root mod P")


def _primitive_root_of_unity(P: int, o: int) -> int:
    assert (P - 1) % o == 0
    if o == 1:
        return 1
    for w in range(2, P):
        x = pow(w, (P - 1) // o, P)
        if all(pow(x, o // ell, P) != 1 for ell in prime_factors(o)):
            return x
    raise ValueError("no root of unity found")


def character_table(g: GroupData) -> list[ClassFunction]:
    """Exact irreducible character table via Dixon lifting."""
    k = g.k
    P = _pick_prime(g)
    a = _structure_constants(g)
    mats = [np.array(a[i], dtype=np.int64) % P for i in range(k)]  # (j, l) slots
    spaces = [np.eye(k, dtype=np.int64)]
    for M in mats:
        nxt = []
        for V in spaces:
            if V.shape[1] == 1:
                nxt.append(V)
                continue
            R = _solve_modp(V, (M @ V) % P, P)
            found = []
            for lam in range(P):
                null = nullspace_modp((R - lam * np.eye(V.shape[1], dtype=np.int64)) % P, P)
                if null:
                    found.append((V @ np.array(null, dtype=np.int64).T) % P)
            assert sum(W.shape[1] for W in found) == V.shape[1]
            nxt.extend(found)
        spaces = nxt
        if all(V.shape[1] == 1 for V in spaces):
            break
    assert len(spaces) == k and all(V.shape[1] == 1 for V in spaces)

    one_idx = _identity_index(g)
    chars = []
    for V in spaces:
        v = V[:, 0] % P
        # normalize to the central character: omega_l = h_l chi(g_l)/chi(1)
        omega = (v * pow(int(v[one_idx]), -1, P)) % P
        s = 0
        for l in range(k):
            s = (s + omega[l] * omega[g.inverse_class[l]] * pow(int(g.sizes[l]), -1, P)) % P
        d = _sqrt_mod(g.order * pow(int(s), -1, P) % P, P)
        d = min(d, P - d)
        chi_mod = [int(d * int(omega[l]) * pow(int(g.sizes[l]), -1, P) % P) for l in range(k)]
        chars.append(_lift_character(g, chi_mod, d, P))

    assert sum(int(c.dim) ** 2 for c in chars) == g.order
    for c in chars:
        assert inner_product(c, c) == 1
    return chars


def _lift_character(g: GroupData, chi_mod, d, P) -> ClassFunction:
    N = g.exponent
    values = []
    for l in range(g.k):
        o = g.rep_orders[l]
        eta = _primitive_root_of_unity(P, o)
        terms = {}
        for j in range(o):
            m = 0
            for t in range(o):
                m = (m + chi_mod[g.power_class(l, t)] * pow(eta, (-j * t) % o, P)) % P
            m = int(m * pow(o, -1, P) % P)
            assert m <= d, "multiplicity lift out of range"
            if m:
                terms[(j * (N // o)) % N] = m
        values.append(Cyc.from_terms(N, terms))
    return ClassFunction(g, values)
