"""Truncated tame local rings O_{L,r} = F_{q^m}[z]/z^r.

Equal characteristic throughout: the base ring O_{F,r'} is literally
F_q[z]/z^{r'}, and a tamely ramified extension of degree e is the same
data shape with uniformizer z, the base uniformizer embedded as z^e,
and the Galois generator acting by z -> zeta_e * z.

Elements are coefficient tuples of length r (index i = coefficient of
z^i).  ``Ring`` methods work on raw tuples; ``RingElem`` is a thin
operator-overloading wrapper around them for interactive use and tests.
"""

from __future__ import annotations

from functools import lru_cache

from . import gf
from .errors import NonUnit, NonzeroTrace, ParameterMismatch


class Ring:
    def __init__(self, field, f: int, r: int, e: int = 1, zeta=None):
        if field.n % f:
            raise ParameterMismatch("field degree not a multiple of f")
        self.field = field
        self.p = field.p
        self.f = f
        self.q = field.p**f
        self.m = field.n // f
        self.r = r
        self.e = e
        if e > 1:
            if e % field.p == 0:
                raise ParameterMismatch("wild ramification (p | e) is unsupported")
            if (field.order - 1) % e:
                raise ParameterMismatch("zeta_e does not exist in the working field")
            if zeta is None:
                zeta = field.pow(field.generator(), (field.order - 1) // e)
            # exact order e
            if field.pow(zeta, e) != field.one or any(
                field.pow(zeta, e // ell) == field.one for ell in gf.prime_factors(e)
            ):
                raise ParameterMismatch("zeta does not have exact order e")
            self.zeta = zeta
        else:
            self.zeta = field.one
        self.r_prime = (r - 1) // e + 1
        self.zero = tuple([field.zero] * r)
        one = [field.zero] * r
        one[0] = field.one
        self.one = tuple(one)

    # -- arithmetic on coefficient tuples ------------------------------------

    def add(self, a, b):
        fa = self.field.add
        return tuple(fa(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        fs = self.field.sub
        return tuple(fs(x, y) for x, y in zip(a, b))

    def neg(self, a):
        fn = self.field.neg
        return tuple(fn(x) for x in a)

    def mul(self, a, b):
        F, r = self.field, self.r
        out = [F.zero] * r
        for i, x in enumerate(a):
            if x != F.zero:
                for j in range(r - i):
                    y = b[j]
                    if y != F.zero:
                        out[i + j] = F.add(out[i + j], F.mul(x, y))
        return tuple(out)

    def smul(self, c, a):
        """Multiply by a field scalar."""
        F = self.field
        return tuple(F.mul(c, x) for x in a)

    def is_unit(self, a) -> bool:
        return a[0] != self.field.zero

    def inv(self, a):
        if not self.is_unit(a):
            raise NonUnit(f"valuation {self.valuation(a)} > 0")
        F, r = self.field, self.r
        out = [F.zero] * r
        out[0] = F.inv(a[0])
        # back-substitution: sum_{j<=i} a_j * out_{i-j} = 0 for i >= 1
        for i in range(1, r):
            acc = F.zero
            for j in range(1, i + 1):
                acc = F.add(acc, F.mul(a[j], out[i - j]))
            out[i] = F.neg(F.mul(acc, out[0]))
        return tuple(out)

    def valuation(self, a) -> int:
        for i, c in enumerate(a):
            if c != self.field.zero:
                return i
        return self.r

    def frobenius(self, a, t: int = 1):
        """Coefficientwise q^t power; fixes z."""
        F, ft = self.field, self.f * t
        return tuple(F.frob(c, ft) for c in a)

    def sigma(self, a, k: int = 1):
        """Galois action z -> zeta_e^k * z (coefficient i scaled by zeta^(i*k))."""
        if self.e == 1 or k % self.e == 0:
            return tuple(a)
        F = self.field
        zk = F.pow(self.zeta, k % self.e)
        out, s = [], F.one
        for c in a:
            out.append(F.mul(s, c))
            s = F.mul(s, zk)
        return tuple(out)

    def sigma_trace(self, a):
        acc = self.zero
        for k in range(self.e):
            acc = self.add(acc, self.sigma(a, k))
        return acc

    def from_int(self, c: int):
        out = [self.field.zero] * self.r
        out[0] = self.field.from_int(c)
        return tuple(out)

    def z_pow(self, i: int):
        out = [self.field.zero] * self.r
        if i < self.r:
            out[i] = self.field.one
        return tuple(out)

    def monomial(self, i: int, c):
        out = [self.field.zero] * self.r
        if i < self.r:
            out[i] = c
        return tuple(out)

    def shift_down(self, a, k: int):
        """Divide by z^k; requires valuation >= k. Top coefficients fill with 0."""
        F = self.field
        assert all(c == F.zero for c in a[:k])
        return tuple(list(a[k:]) + [F.zero] * k)

    def divide_exact(self, a, b):
        """Some c with b*c = a; requires valuation(a) >= valuation(b)."""
        v = self.valuation(b)
        if self.valuation(a) < v:
            raise NonUnit("division with valuation drop")
        if v == self.r:
            return self.zero
        return self.mul(self.shift_down(a, v), self.inv(self.shift_down(b, v)))

    def size(self) -> int:
        return self.field.order**self.r

    def elements(self):
        if self.field.backend != "table":
            raise ParameterMismatch("enumeration needs a table-backed field")
        import itertools

        return (tuple(t) for t in itertools.product(self.field.elements(), repeat=self.r))

    def units(self):
        return (a for a in self.elements() if self.is_unit(a))

    def reduce(self, a, r_target: int):
        assert r_target <= self.r
        return tuple(a[:r_target])

    # -- text encoding --------------------------------------------------------

    def encode(self, a) -> str:
        toks = []
        for i, c in enumerate(a):
            t = "0" if c == self.field.zero else f"g{self.field.dlog(c)}"
            if i == 0:
                toks.append(t)
            elif i == 1:
                toks.append(f"{t}*z")
            else:
                toks.append(f"{t}*z^{i}")
        return "+".join(toks)

    def decode(self, s: str):
        out = [self.field.zero] * self.r
        for i, tok in enumerate(s.split("+")):
            c = tok.split("*")[0]
            out[i] = self.field.zero if c == "0" else int(c[1:]) + 1
        return tuple(out)

    def __repr__(self):
        return f"Ring(q={self.q}, m={self.m}, r={self.r}, e={self.e})"


def make_ring(p: int, f: int = 1, m: int = 1, r: int = 1, e: int = 1) -> Ring:
    """O over F_{q^m} with q = p^f, truncation r, tame ramification e."""
    return _make_ring(p, f, m, r, e)


@lru_cache(maxsize=None)
def _make_ring(p, f, m, r, e) -> Ring:
    field = gf.get_field(p, f * m)
    return Ring(field, f, r, e)


class RingElem:
    """Operator wrapper around (ring, coeff tuple)."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: Ring, coeffs):
        assert len(coeffs) == ring.r
        self.ring = ring
        self.coeffs = tuple(coeffs)

    def _check(self, other: "RingElem"):
        if self.ring is not other.ring:
            raise ParameterMismatch("elements from different rings")

    def __add__(self, other):
        self._check(other)
        return RingElem(self.ring, self.ring.add(self.coeffs, other.coeffs))

    def __sub__(self, other):
        self._check(other)
        return RingElem(self.ring, self.ring.sub(self.coeffs, other.coeffs))

    def __mul__(self, other):
        self._check(other)
        return RingElem(self.ring, self.ring.mul(self.coeffs, other.coeffs))

    def __neg__(self):
        return RingElem(self.ring, self.ring.neg(self.coeffs))

    def inv(self):
        return RingElem(self.ring, self.ring.inv(self.coeffs))

    def frobenius(self, t: int = 1):
        return RingElem(self.ring, self.ring.frobenius(self.coeffs, t))

    def sigma(self, k: int = 1):
        return RingElem(self.ring, self.ring.sigma(self.coeffs, k))

    @property
    def valuation(self):
        return self.ring.valuation(self.coeffs)

    def is_unit(self):
        return self.ring.is_unit(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, RingElem) and self.ring is other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((id(self.ring), self.coeffs))

    def __repr__(self):
        return f"RingElem({self.ring.encode(self.coeffs)})"


# ---------------------------------------------------------------------------
# embeddings between rings


def embed_ring(src: Ring, dst: Ring):
    """Coefficientwise map for a larger working field, same (r, e).

    Returns a function on coefficient tuples.
    """
    if (src.r, src.e, src.q) != (dst.r, dst.e, dst.q):
        raise ParameterMismatch("rings are not level-compatible")
    emb = gf.get_embedding(src.field, dst.field)
    if dst.field.backend == "table" and src.field.backend == "table":
        if emb.fwd(src.zeta) != dst.zeta and src.e > 1:
            raise ParameterMismatch("zeta choices disagree between levels")

    def phi(a):
        return tuple(emb.fwd(c) for c in a)

    return phi


def embed_base_ring(base: Ring, ext: Ring):
    """O_{F,r'} -> O_{L,r}: base uniformizer goes to z^e, coefficients embed.

    Requires base.e == 1, ext.r_prime >= base.r is NOT required; coefficients
    of z^i with e*i >= ext.r are dropped (they are zero in the target).
    Injective exactly when base.r <= ext.r_prime.
    """
    if base.e != 1:
        raise ParameterMismatch("base ring must be unramified")
    if base.q != ext.q:
        raise ParameterMismatch("residue fields differ")
    emb = gf.get_embedding(base.field, ext.field)

    def phi(a):
        out = [ext.field.zero] * ext.r
        for i, c in enumerate(a):
            if ext.e * i < ext.r:
                out[ext.e * i] = emb.fwd(c)
        return tuple(out)

    return phi


# ---------------------------------------------------------------------------
# Galois fixed points and additive Hilbert 90


def solve_hilbert90(ring: Ring, y):
    """x with x - sigma(x) = y, valid whenever the sigma-trace of y vanishes.

    Uses x = sum_{n=1}^{e-1} sigma^n(1/e) * sum_{i=0}^{n-1} sigma^i(y).
    """
    if ring.sigma_trace(y) != ring.zero:
        raise NonzeroTrace(ring.encode(y) if ring.field.backend == "table" else str(y))
    e_inv = ring.inv(ring.from_int(ring.e))
    x = ring.zero
    partial = ring.zero  # sum_{i<n} sigma^i(y)
    for n in range(1, ring.e):
        partial = ring.add(partial, ring.sigma(y, n - 1))
        x = ring.add(x, ring.mul(ring.sigma(e_inv, n), partial))
    return x


def fixed_subring(ring: Ring, endos) -> list:
    """All elements fixed by every (phi_power, sigma_power) in `endos`."""

    def apply(endo, a):
        ph = getattr(endo, "phi", None)
        sg = getattr(endo, "sigma", None)
        if ph is None:
            ph, sg = endo
        return ring.frobenius(ring.sigma(a, sg), ph)

    out = [a for a in ring.elements() if all(apply(en, a) == a for en in endos)]
    return out
