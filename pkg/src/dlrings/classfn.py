"""Exact class-function arithmetic over cyclotomic numbers.

Values live in Q(zeta_N) with N the exponent of the group under study,
represented canonically on the power integral basis 1, z, ..., z^{phi(N)-1}
(reduction modulo the N-th cyclotomic polynomial).  Coefficients are
Fractions so inner products stay exact.
"""

from __future__ import annotations

import cmath
import itertools
from fractions import Fraction
from functools import lru_cache

from .errors import BudgetExceeded, NonIntegral, ParameterMismatch
from .matgrp import Mat, MatGroup


def _poly_div_int(num, den):
    """Exact division of integer polynomials (den monic), little endian."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    while len(num) >= len(den) and any(num):
        if num[-1] == 0:
            num.pop()
            continue
        shift = len(num) - len(den)
        c = num[-1]
        out[shift] = c
        for i, d in enumerate(den):
            num[shift + i] -= c * d
        assert num[-1] == 0
        num.pop()
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(N: int) -> tuple[int, ...]:
    if N == 1:
        return (-1, 1)
    num = [0] * (N + 1)
    num[0], num[N] = -1, 1
    for d in range(1, N):
        if N % d == 0:
            num = _poly_div_int(num, cyclotomic_poly(d))
    return tuple(num)


@lru_cache(maxsize=None)
def _power_table(N: int):
    """x^t mod Phi_N for t in [0, N), as integer tuples of length phi(N)."""
    phi_n = len(cyclotomic_poly(N)) - 1
    poly = cyclotomic_poly(N)
    pows = []
    cur = [0] * phi_n
    cur[0] = 1
    for _ in range(N):
        pows.append(tuple(cur))
        nxt = [0] + cur[: phi_n - 1]
        top = cur[phi_n - 1]
        if top:
            for i in range(phi_n):
                nxt[i] -= top * poly[i]
        cur = nxt
    return tuple(pows)


class Cyc:
    """Exact element of Q(zeta_N) in canonical power-basis form."""

    __slots__ = ("N", "vec")

    def __init__(self, N: int, vec):
        self.N = N
        self.vec = tuple(Fraction(c) for c in vec)

    @staticmethod
    def zero(N: int) -> "Cyc":
        return Cyc(N, [0] * (len(cyclotomic_poly(N)) - 1))

    @staticmethod
    def rational(N: int, c) -> "Cyc":
        v = [Fraction(0)] * (len(cyclotomic_poly(N)) - 1)
        v[0] = Fraction(c)
        return Cyc(N, v)

    @staticmethod
    def root(N: int, k: int) -> "Cyc":
        return Cyc(N, _power_table(N)[k % N])

    @staticmethod
    def from_terms(N: int, terms: dict) -> "Cyc":
        """sum over k of terms[k] * zeta_N^k."""
        phi_n = len(cyclotomic_poly(N)) - 1
        v = [Fraction(0)] * phi_n
        tab = _power_table(N)
        for k, c in terms.items():
            c = Fraction(c)
            for i, b in enumerate(tab[k % N]):
                v[i] += c * b
        return Cyc(N, v)

    def _chk(self, other: "Cyc"):
        if self.N != other.N:
            raise ParameterMismatch("cyclotomic levels differ")

    def __add__(self, other):
        self._chk(other)
        return Cyc(self.N, [a + b for a, b in zip(self.vec, other.vec)])

    def __sub__(self, other):
        self._chk(other)
        return Cyc(self.N, [a - b for a, b in zip(self.vec, other.vec)])

    def __neg__(self):
        return Cyc(self.N, [-a for a in self.vec])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyc(self.N, [a * other for a in self.vec])
        self._chk(other)
        n = len(self.vec)
        prod = [Fraction(0)] * (2 * n - 1)
        for i, a in enumerate(self.vec):
            if a:
                for j, b in enumerate(other.vec):
                    if b:
                        prod[i + j] += a * b
        tab = _power_table(self.N)
        out = list(prod[:n])
        for t in range(n, 2 * n - 1):
            c = prod[t]
            if c:
                for i, b in enumerate(tab[t]):
                    out[i] += c * b
        return Cyc(self.N, out)

    __rmul__ = __mul__

    def conj(self) -> "Cyc":
        tab = _power_table(self.N)
        n = len(self.vec)
        out = [Fraction(0)] * n
        for i, a in enumerate(self.vec):
            if a:
                for j, b in enumerate(tab[(self.N - i) % self.N]):
                    out[j] += a * b
        return Cyc(self.N, out)

    def promote(self, N2: int) -> "Cyc":
        """Image under zeta_N -> zeta_N2^{N2/N} (requires N | N2)."""
        if N2 == self.N:
            return self
        assert N2 % self.N == 0
        step = N2 // self.N
        terms = {}
        for i, a in enumerate(self.vec):
            if a:
                terms[i * step] = a
        return Cyc.from_terms(N2, terms)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.vec)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.vec[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise NonIntegral(f"not rational: {self}")
        return self.vec[0]

    def to_complex(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.N)
        return sum(float(c) * z**k for k, c in enumerate(self.vec))

    def __eq__(self, other):
        return isinstance(other, Cyc) and self.N == other.N and self.vec == other.vec

    def __hash__(self):
        return hash((self.N, self.vec))

    def serialize(self) -> str:
        terms = [f"{c}*z^{k}" for k, c in enumerate(self.vec) if c]
        return "+".join(terms) if terms else "0"

    def __repr__(self):
        return f"Cyc{self.N}({self.serialize()})"


# ---------------------------------------------------------------------------
# conjugacy data


class GroupData:
    """Conjugacy classes, orders and lookup tables for an explicit group."""

    def __init__(self, elements: list[Mat], generators: list[Mat], name: str = "G"):
        self.name = name
        self.elements = elements
        self.order = len(elements)
        self.gens = generators
        self._build_classes()
        self._invs = None

    def _build_classes(self):
        gens = self.gens + [g.inv() for g in self.gens]
        ginvs = [g.inv() for g in gens]
        class_of: dict = {}
        reps, sizes, all_members = [], [], []
        for x in self.elements:
            if x.rows in class_of:
                continue
            idx = len(reps)
            frontier = [x]
            class_of[x.rows] = idx
            members = [x.rows]
            best = x.rows
            while frontier:
                new = []
                for y in frontier:
                    for g, gi in zip(gens, ginvs):
                        z = g * y * gi
                        if z.rows not in class_of:
                            class_of[z.rows] = idx
                            new.append(z)
                            members.append(z.rows)
                            if z.rows < best:
                                best = z.rows
                frontier = new
            reps.append(Mat(x.ring, best))
            sizes.append(len(members))
            all_members.append(members)
        assert sum(sizes) == self.order
        self.class_of = class_of
        self.reps = reps
        self.sizes = sizes
        self.class_members = all_members
        self.k = len(reps)
        self.rep_orders = [self._order(rp) for rp in self.reps]
        self.exponent = 1
        for o in self.rep_orders:
            self.exponent = self.exponent * o // _gcd(self.exponent, o)
        # class of the inverse of each representative
        self.inverse_class = [self.class_of[rp.inv().rows] for rp in self.reps]

    @staticmethod
    def _order(m: Mat) -> int:
        one = Mat.identity(m.ring, m.n)
        x, k = m, 1
        while x != one:
            x = x * m
            k += 1
        return k

    def class_index(self, m: Mat) -> int:
        return self.class_of[m.rows]

    def centralizer_order(self, class_idx: int) -> int:
        return self.order // self.sizes[class_idx]

    def inverses(self) -> dict:
        if self._invs is None:
            self._invs = {x.rows: x.inv() for x in self.elements}
        return self._invs

    def power_class(self, class_idx: int, t: int) -> int:
        x = self.reps[class_idx]
        y = Mat.identity(x.ring, x.n)
        for _ in range(t % self.rep_orders[class_idx]):
            y = y * x
        return self.class_of[y.rows]


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def group_data(group: MatGroup, budget: int = 10**6, name: str | None = None) -> GroupData:
    els = group.elements(budget)
    if len(els) > budget:
        raise BudgetExceeded("class enumeration budget")
    return GroupData(els, group.generators(), name or repr(group))


def conjugacy_classes(gdata: GroupData):
    """[(representative, size)] in deterministic order."""
    return list(zip(gdata.reps, gdata.sizes))


# ---------------------------------------------------------------------------
# class functions


class ClassFunction:
    __slots__ = ("gdata", "values")

    def __init__(self, gdata: GroupData, values):
        assert len(values) == gdata.k
        self.gdata = gdata
        self.values = tuple(values)

    @staticmethod
    def trivial(gdata: GroupData) -> "ClassFunction":
        return ClassFunction(gdata, [Cyc.rational(gdata.exponent, 1)] * gdata.k)

    def __call__(self, m: Mat) -> Cyc:
        return self.values[self.gdata.class_index(m)]

    @property
    def dim(self) -> Fraction:
        one_idx = self.gdata.class_index(Mat.identity(self.gdata.elements[0].ring, self.gdata.elements[0].n))
        return self.values[one_idx].as_fraction()

    def __add__(self, other):
        assert self.gdata is other.gdata
        return ClassFunction(self.gdata, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other):
        assert self.gdata is other.gdata
        return ClassFunction(self.gdata, [a - b for a, b in zip(self.values, other.values)])

    def __mul__(self, other):
        if isinstance(other, ClassFunction):
            assert self.gdata is other.gdata
            return ClassFunction(self.gdata, [a * b for a, b in zip(self.values, other.values)])
        return ClassFunction(self.gdata, [v * other for v in self.values])

    def __eq__(self, other):
        return isinstance(other, ClassFunction) and self.gdata is other.gdata and self.values == other.values

    def __hash__(self):
        return hash((id(self.gdata), self.values))


def inner_product(chi: ClassFunction, psi: ClassFunction) -> Fraction:
    if chi.gdata is not psi.gdata:
        raise ParameterMismatch("class functions on different groups")
    g = chi.gdata
    acc = Cyc.zero(g.exponent)
    for i in range(g.k):
        acc = acc + (chi.values[i] * psi.values[i].conj()) * g.sizes[i]
    return acc.as_fraction() / g.order


def restrict(chi: ClassFunction, sub_elements: list[Mat]) -> dict:
    """Values of chi on a subgroup, keyed by element rows."""
    return {m.rows: chi(m) for m in sub_elements}


def induce(values_on_h: dict, h_order: int, gdata: GroupData) -> ClassFunction:
    """Frobenius induction from a subgroup given by a value dict on elements.

    Ind(chi)(g) = |C(g)|/|H| * sum of chi over class(g) cap H.
    """
    N = gdata.exponent
    out = []
    for l in range(gdata.k):
        acc = Cyc.zero(N)
        for rows in gdata.class_members[l]:
            v = values_on_h.get(rows)
            if v is not None:
                acc = acc + (v if v.N == N else v.promote(N))
        out.append(acc * Fraction(gdata.centralizer_order(l), h_order))
    return ClassFunction(gdata, out)


def permutation_character(gdata: GroupData, sub_elements: list[Mat]) -> ClassFunction:
    """chi(g) = number of fixed cosets xH; independent of `induce`."""
    sub_rows = [m for m in sub_elements]
    coset_id: dict = {}
    coset_reps: list[Mat] = []
    for x in gdata.elements:
        if x.rows in coset_id:
            continue
        cid = len(coset_reps)
        coset_reps.append(x)
        for h in sub_rows:
            coset_id[(x * h).rows] = cid
    assert len(coset_reps) * len(sub_elements) == gdata.order
    N = gdata.exponent
    out = []
    for rep in gdata.reps:
        fixed = sum(1 for x in coset_reps if coset_id[(rep * x).rows] == coset_id[x.rows])
        out.append(Cyc.rational(N, fixed))
    return ClassFunction(gdata, out)


def decompose(chi: ClassFunction, basis: list[ClassFunction]) -> list[int]:
    """Multiplicities against an orthonormal irreducible basis (may be negative
    for virtual characters); raises NonIntegral on inconsistency."""
    out = []
    for b in basis:
        c = inner_product(chi, b)
        if c.denominator != 1:
            raise NonIntegral(f"multiplicity {c} is not an integer")
        out.append(int(c))
    return out


# ---------------------------------------------------------------------------
# characters of finite abelian groups (chain extension)


def abelian_characters(elements: list, mult, one, N: int) -> list[dict]:
    """All homomorphisms A -> mu_N for an abelian group given by a mult table.

    Elements must be hashable.  Returns dicts element -> Cyc.  N must be a
    multiple of the exponent of A.
    """
    chars = [{one: Cyc.rational(N, 1)}]
    covered = [one]
    covered_set = {one}
    for a in elements:
        if a in covered_set:
            continue
        # order of a relative to the covered subgroup
        t, x = 1, a
        while x not in covered_set:
            x = mult(x, a)
            t += 1
        # x = a^t is covered; each character extends t ways
        new_chars = []
        for chi in chars:
            target = chi[x]  # chi(a^t)
            for j in range(N):
                w = Cyc.root(N, j)
                wt = Cyc.rational(N, 1)
                for _ in range(t):
                    wt = wt * w
                if wt == target:
                    new_chars.append((chi, w))
        # rebuild coset structure
        new_covered = list(covered)
        powers = [None]
        cur = a
        for _ in range(1, t):
            powers.append(cur)
            for c in covered:
                new_covered.append(mult(cur, c))
            cur = mult(cur, a)
        out_chars = []
        for chi, w in new_chars:
            ext = dict(chi)
            wp = Cyc.rational(N, 1)
            cur = a
            for s in range(1, t):
                wp = wp * w
                for c in covered:
                    ext[mult(cur, c)] = wp * chi[c]
                cur = mult(cur, a)
            out_chars.append(ext)
        chars = out_chars
        covered = new_covered
        covered_set = set(covered)
    assert len(chars) == len(covered) == len(elements)
    return chars
