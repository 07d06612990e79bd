"""Adjoint-orbit classification for the 2x2 situation at truncation level l'.

Two modes: `traceZero` (the Lie algebra sl_2, for p odd) and `modCenter`
(M_2 modulo scalars, the right object when p = 2).  Coset normal form for
modCenter: subtract the (1,1) entry times the identity, so representatives
have vanishing (1,1) entry.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import BudgetExceeded
from .matgrp import Mat, MatGroup
from .ring import Ring


@dataclass(frozen=True)
class LieElem:
    mat: Mat
    mode: str  # "traceZero" | "modCenter"

    def normal_form(self) -> "LieElem":
        if self.mode == "traceZero":
            return self
        R = self.mat.ring
        c = self.mat.rows[0][0]
        rows = tuple(
            tuple(R.sub(e, c) if i == j else e for j, e in enumerate(row))
            for i, row in enumerate(self.mat.rows)
        )
        return LieElem(Mat(R, rows), self.mode)


@dataclass(frozen=True)
class OrbitLabel:
    kind: str  # split | cuspidal | nilpotent | imprimitive
    representative: LieElem


def lie_space(ring: Ring, mode: str) -> list[LieElem]:
    els = list(ring.elements())
    out = []
    if mode == "traceZero":
        for a, b, c in itertools.product(els, repeat=3):
            out.append(LieElem(Mat(ring, ((a, b), (c, ring.neg(a)))), mode))
    elif mode == "modCenter":
        for b, c, d in itertools.product(els, repeat=3):
            out.append(LieElem(Mat(ring, ((ring.zero, b), (c, d))), mode))
    else:
        raise ValueError(mode)
    return out


def _residue_kind(beta: LieElem) -> str:
    """Classify by the reduction mod the maximal ideal."""
    R = beta.mat.ring
    F = R.field
    m = beta.normal_form().mat
    res = [[e[0] for e in row] for row in m.rows]
    if all(c == F.zero for row in res for c in row):
        return "imprimitive"
    s = F.add(res[0][0], res[1][1])
    delta = F.sub(F.mul(res[0][0], res[1][1]), F.mul(res[0][1], res[1][0]))
    # roots of x^2 - s x + delta in F_q
    roots = [x for x in F.elements() if F.add(F.sub(F.mul(x, x), F.mul(s, x)), delta) == F.zero]
    distinct = len(set(roots))
    if distinct == 2:
        return "split"
    if distinct == 0:
        return "cuspidal"
    return "nilpotent"


def _conj_normal(g: Mat, gi: Mat, beta: LieElem) -> LieElem:
    return LieElem(g * beta.mat * gi, beta.mode).normal_form()


def classify_orbits(ring: Ring, mode: str, group: MatGroup, budget: int = 10**6):
    """Full partition of the space minus the imprimitive part into adjoint
    orbits: [(OrbitLabel, orbit size)], imprimitive orbits included last."""
    space = [b.normal_form() for b in lie_space(ring, mode)]
    if len(space) > budget:
        raise BudgetExceeded("lie space too large")
    gens = group.generators()
    pairs = [(g, g.inv()) for g in gens] + [(g.inv(), g) for g in gens]
    seen: dict = {}
    orbits = []
    for b in space:
        if b.mat.rows in seen:
            continue
        idx = len(orbits)
        frontier = [b]
        seen[b.mat.rows] = idx
        best = b.mat.rows
        size = 1
        while frontier:
            new = []
            for x in frontier:
                for g, gi in pairs:
                    y = _conj_normal(g, gi, x)
                    if y.mat.rows not in seen:
                        seen[y.mat.rows] = idx
                        new.append(y)
                        size += 1
                        if y.mat.rows < best:
                            best = y.mat.rows
            frontier = new
        rep = LieElem(Mat(ring, best), mode)
        orbits.append((OrbitLabel(_residue_kind(rep), rep), size))
    assert sum(s for _, s in orbits) == len(space)
    # primitive orbits first, imprimitive at the end, deterministic order
    orbits.sort(key=lambda t: (t[0].kind == "imprimitive", t[0].representative.mat.rows))
    return orbits


def orbit_of(beta: LieElem, group: MatGroup) -> OrbitLabel:
    """Label + canonical (serialization-minimal) representative of the orbit."""
    b = beta.normal_form()
    gens = group.generators()
    pairs = [(g, g.inv()) for g in gens] + [(g.inv(), g) for g in gens]
    seen = {b.mat.rows}
    frontier = [b]
    best = b.mat.rows
    while frontier:
        new = []
        for x in frontier:
            for g, gi in pairs:
                y = _conj_normal(g, gi, x)
                if y.mat.rows not in seen:
                    seen.add(y.mat.rows)
                    new.append(y)
                    if y.mat.rows < best:
                        best = y.mat.rows
        frontier = new
    rep = LieElem(Mat(beta.mat.ring, best), beta.mode)
    return OrbitLabel(_residue_kind(rep), rep)


def serialize_orbit_table(orbits, ring: Ring):
    return [
        {
            "kind": lab.kind,
            "representative": [[ring.encode(e) for e in row] for row in lab.representative.mat.rows],
            "size": size,
        }
        for lab, size in orbits
    ]
