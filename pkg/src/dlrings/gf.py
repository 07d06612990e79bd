"""Finite fields F_{p^n}.

Two backends share one informal interface (add/mul/inv/frob/...):

* ``GFTable`` -- Zech-logarithm tables, elements are int codes
  (0 is zero, 1+k encodes g^k for a fixed primitive g).  Used for every
  enumeration-heavy computation; table size is the field order.
* ``GFPoly``  -- coefficient tuples modulo a fixed irreducible polynomial.
  No tables, so it scales to the large extensions needed by the
  semilinear Lang solver, at scalar speed.

Embeddings between instances are computed by sending a generator to a
root of its minimal polynomial and are deterministic (smallest root in
the backend's element order).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .errors import NonUnit, ParameterMismatch

TABLE_LIMIT = 2**17  # largest field order backed by Zech tables


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# polynomial helpers over F_p (coefficient lists, little endian, no trailing 0)


def _ptrim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _ptrim(out)


def _psub(a, b, p):
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] = c % p
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return _ptrim(out)


def _pmod(a, f, p):
    # f monic
    a = list(a)
    df = len(f) - 1
    while len(a) - 1 >= df and a:
        lead = a[-1]
        if lead:
            shift = len(a) - 1 - df
            for i, c in enumerate(f):
                a[shift + i] = (a[shift + i] - lead * c) % p
        a.pop()
    return _ptrim(a)


def _ppowmod(a, e, f, p):
    res = [1]
    a = _pmod(a, f, p)
    while e:
        if e & 1:
            res = _pmod(_pmul(res, a, p), f, p)
        a = _pmod(_pmul(a, a, p), f, p)
        e >>= 1
    return res


def _pgcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        # make b monic for the reduction
        inv = pow(b[-1], -1, p)
        bm = [(c * inv) % p for c in b]
        a, b = b, _pmod(a, bm, p)
    return a


def irreducible_poly(p: int, n: int) -> tuple[int, ...]:
    """Deterministic monic irreducible of degree n over F_p (lexicographic scan)."""
    if n == 1:
        return (0, 1)
    factors = prime_factors(n)
    # iterate over non-leading coefficient vectors in lexicographic order
    for code in range(p**n):
        coeffs = []
        c = code
        for _ in range(n):
            coeffs.append(c % p)
            c //= p
        f = coeffs + [1]
        if f[0] == 0:
            continue
        x = [0, 1]
        if _ppowmod(x, p**n, f, p) != _pmod(x, f, p):
            continue
        ok = True
        for ell in factors:
            g = _psub(_ppowmod(x, p ** (n // ell), f, p), _pmod(x, f, p), p)
            if len(_pgcd(g, f, p)) > 1:
                ok = False
                break
        if ok:
            return tuple(f)
    raise RuntimeError(f"no irreducible polynomial of degree {n} over F_{p}")


# ---------------------------------------------------------------------------


class GFTable:
    """F_{p^n} via discrete-log (Zech) tables.

    Element codes: 0 is the zero element, 1+k is g^k.  All arithmetic is a
    couple of list lookups, which is what every enumeration loop downstream
    relies on.
    """

    backend = "table"

    def __init__(self, p: int, n: int):
        if not is_prime(p):
            raise ValueError(f"p={p} is not prime")
        order = p**n
        if order > TABLE_LIMIT:
            raise ValueError(f"field order {order} exceeds table limit {TABLE_LIMIT}")
        self.p = p
        self.n = n
        self.order = order
        self.mult_order = order - 1
        self.zero = 0
        self.one = 1
        self.modulus = self._find_primitive_modulus()
        self._build_tables()

    def _find_primitive_modulus(self):
        p, n = self.p, self.n
        if n == 1:
            # smallest primitive root mod p
            for g in range(1, p):
                if all(pow(g, (p - 1) // ell, p) != 1 for ell in prime_factors(p - 1)):
                    self._gen_vec = (g,)
                    return (-g % p, 1)
        for code in range(p**n):
            coeffs = []
            c = code
            for _ in range(n):
                coeffs.append(c % p)
                c //= p
            f = coeffs + [1]
            if f[0] == 0:
                continue
            # x must have full multiplicative order p^n - 1; that certifies
            # both primitivity and irreducibility at once.
            if self._order_of_x(f) == p**n - 1:
                self._gen_vec = (0, 1) if n > 1 else None
                return tuple(f)
        raise RuntimeError("no primitive polynomial found")

    def _order_of_x(self, f):
        p = self.p
        target = p ** (len(f) - 1) - 1
        x = [0, 1]
        if _ppowmod(x, target, f, p) != [1]:
            return 0
        for ell in prime_factors(target):
            if _ppowmod(x, target // ell, f, p) == [1]:
                return 0
        return target

    def _build_tables(self):
        p, n, Q = self.p, self.n, self.order
        f = list(self.modulus)
        # enumerate powers of the generator as coefficient vectors
        vec_of = [None] * (Q - 1)
        cur = [1]
        code_of_vec = {}
        for k in range(Q - 1):
            v = tuple(cur + [0] * (n - len(cur)))
            vec_of[k] = v
            code_of_vec[v] = k + 1
            cur = _pmod(_pmul(cur, self._gen_vec if n == 1 else [0, 1], p), f, p)
            if not cur:
                cur = [0]
        zerovec = tuple([0] * n)
        code_of_vec[zerovec] = 0
        # zech[k] = code of 1 + g^k
        zech = [0] * (Q - 1)
        for k in range(Q - 1):
            v = list(vec_of[k])
            v[0] = (v[0] + 1) % p
            zech[k] = code_of_vec[tuple(v)]
        self._zech = zech
        self._vec_of = vec_of
        self._code_of_vec = code_of_vec
        # additive code of small integers
        ints = [0] * p
        for c in range(1, p):
            ints[c] = code_of_vec[tuple([c] + [0] * (n - 1))]
        self._int_codes = ints
        self._neg_one = self.from_int(-1)

    # -- basic arithmetic ---------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if a == 0:
            return b
        if b == 0:
            return a
        i, j = a - 1, b - 1
        if i > j:
            i, j = j, i
        z = self._zech[j - i]
        if z == 0:
            return 0
        return (i + z - 1) % self.mult_order + 1

    def neg(self, a: int) -> int:
        return self.mul(self._neg_one, a)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return (a + b - 2) % self.mult_order + 1

    def inv(self, a: int) -> int:
        if a == 0:
            raise NonUnit("zero is not invertible")
        return (self.mult_order - (a - 1)) % self.mult_order + 1

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e <= 0:
                raise NonUnit("0**nonpositive")
            return 0
        return (a - 1) * e % self.mult_order + 1

    def frob(self, a: int, e: int = 1) -> int:
        """a ** (p**e)."""
        if a == 0:
            return 0
        return (a - 1) * pow(self.p, e, self.mult_order) % self.mult_order + 1

    def from_int(self, c: int) -> int:
        return self._int_codes[c % self.p]

    def elements(self):
        return range(self.order)

    def generator(self) -> int:
        return 2 if self.order > 2 else 1

    def dlog(self, a: int) -> int:
        if a == 0:
            raise NonUnit("dlog of zero")
        return a - 1

    # -- subfields / embeddings ----------------------------------------------

    def subfield_codes(self, d: int) -> list[int]:
        """Elements of the subfield F_{p^d}, d | n."""
        if self.n % d:
            raise ValueError("not a subfield degree")
        step = self.mult_order // (self.p**d - 1)
        return [0] + [k * step + 1 for k in range(self.p**d - 1)]

    def in_subfield(self, a: int, d: int) -> bool:
        if a == 0:
            return True
        return (a - 1) % (self.mult_order // (self.p**d - 1)) == 0

    def minpoly_over_prime(self, a: int) -> tuple[int, ...]:
        """Monic minimal polynomial of a over F_p, as int coefficients."""
        conj, x = [], a
        while x not in conj:
            conj.append(x)
            x = self.frob(x)
        poly = [self.one]
        for c in conj:
            # poly *= (X - c)
            new = [0] * (len(poly) + 1)
            for i, co in enumerate(poly):
                new[i + 1] = self.add(new[i + 1], co)
                new[i] = self.add(new[i], self.mul(self.neg(c), co))
            poly = new
        out = []
        for co in poly:
            assert self.in_subfield(co, 1)
            out.append(self._vec_of[co - 1][0] if co else 0)
        return tuple(out)

    def to_vec(self, a: int) -> tuple[int, ...]:
        if a == 0:
            return tuple([0] * self.n)
        return self._vec_of[a - 1]

    def from_vec(self, v) -> int:
        return self._code_of_vec[tuple(v)]

    def __repr__(self):
        return f"GFTable(p={self.p}, n={self.n})"


class GFPoly:
    """F_{p^n} with elements as coefficient tuples modulo a fixed irreducible."""

    backend = "poly"

    def __init__(self, p: int, n: int, modulus: tuple[int, ...] | None = None):
        self.p = p
        self.n = n
        self.order = p**n
        self.modulus = modulus if modulus is not None else irreducible_poly(p, n)
        assert len(self.modulus) == n + 1 and self.modulus[n] == 1
        self.zero = tuple([0] * n)
        one = [0] * n
        one[0] = 1 % p
        self.one = tuple(one)
        # reduction rows: x^(n+k) mod f for k in [0, n-1]
        rows = []
        cur = [(-c) % p for c in self.modulus[:n]]  # x^n mod f
        for _ in range(n):
            rows.append(tuple(cur))
            cur = self._shift_reduce(cur)
        self._red_rows = rows
        self._frob_cache: dict[int, list[tuple[int, ...]]] = {}

    def _shift_reduce(self, cur):
        p, n = self.p, self.n
        top = cur[n - 1]
        shifted = [0] + cur[: n - 1]
        base = [(-c * top) % p for c in self.modulus[:n]]
        return [(a + b) % p for a, b in zip(shifted, base)]

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def mul(self, a, b):
        p, n = self.p, self.n
        out = [0] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        low = [c % p for c in out[:n]]
        for k in range(n - 1):
            c = out[n + k] % p
            if c:
                row = self._red_rows[k]
                low = [(lo + c * rv) % p for lo, rv in zip(low, row)]
        return tuple(low)

    def inv(self, a):
        if a == self.zero:
            raise NonUnit("zero is not invertible")
        return self.pow(a, self.order - 2)

    def pow(self, a, e):
        if e < 0:
            return self.pow(self.inv(a), -e)
        res, base = self.one, a
        while e:
            if e & 1:
                res = self.mul(res, base)
            base = self.mul(base, base)
            e >>= 1
        return res

    def _frob_rows(self, e: int) -> list[tuple[int, ...]]:
        # matrix of x -> x^(p^e) as images of basis monomials
        e = e % self.n
        if e in self._frob_cache:
            return self._frob_cache[e]
        xp = self.pow(tuple([0, 1 % self.p] + [0] * (self.n - 2)) if self.n > 1 else self.one, pow(self.p, e))
        rows, cur = [], self.one
        for _ in range(self.n):
            rows.append(cur)
            cur = self.mul(cur, xp)
        self._frob_cache[e] = rows
        return rows

    def frob(self, a, e: int = 1):
        if self.n == 1:
            return a
        rows = self._frob_rows(e)
        p = self.p
        out = [0] * self.n
        for c, row in zip(a, rows):
            if c:
                out = [(o + c * rv) % p for o, rv in zip(out, row)]
        return tuple(out)

    def from_int(self, c: int):
        v = [0] * self.n
        v[0] = c % self.p
        return tuple(v)

    def generator(self):
        # not necessarily a primitive element; only used for variety
        raise NotImplementedError("GFPoly has no distinguished generator")

    def __repr__(self):
        return f"GFPoly(p={self.p}, n={self.n})"


# ---------------------------------------------------------------------------
# embeddings


class FieldEmbedding:
    """Ring embedding small -> big determined by a chosen root of the
    generator's minimal polynomial.  `fwd`/`back` work on single codes."""

    def __init__(self, small, big, root):
        self.small = small
        self.big = big
        self.root = root
        self._fwd: dict = {small.zero: big.zero}
        self._bwd: dict = {big.zero: small.zero}
        # image of g^k is root^k
        x = big.one
        g = small.generator()
        y = small.one
        for _ in range(small.mult_order):
            self._fwd[y] = x
            self._bwd[x] = y
            x = big.mul(x, root)
            y = small.mul(y, g)

    def fwd(self, a):
        return self._fwd[a]

    def back(self, a):
        return self._bwd[a]

    def contains(self, a) -> bool:
        return a in self._bwd


def _poly_root_in_field(field, coeffs: tuple[int, ...]):
    """Deterministic root of a monic poly with F_p coefficients, all of whose
    roots lie in `field` (degree divides field.n).  Cantor-Zassenhaus style."""
    p = field.p
    # polynomial over `field`, little endian, as list of field elements
    h = [field.from_int(c) for c in coeffs]

    def fmonic(f):
        lead = f[-1]
        li = field.inv(lead)
        return [field.mul(li, c) for c in f]

    def fmod(a, f):
        a = list(a)
        df = len(f) - 1
        while len(a) - 1 >= df and a:
            lead = a[-1]
            if lead != field.zero:
                shift = len(a) - 1 - df
                for i, c in enumerate(f):
                    a[shift + i] = field.sub(a[shift + i], field.mul(lead, c))
            a.pop()
        while a and a[-1] == field.zero:
            a.pop()
        return a

    def fmul(a, b):
        out = [field.zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x != field.zero:
                for j, y in enumerate(b):
                    out[i + j] = field.add(out[i + j], field.mul(x, y))
        return out

    def fgcd(a, b):
        a, b = list(a), list(b)
        while b:
            a, b = b, fmod(a, fmonic(b))
        return a

    def fpowmod(a, e, f):
        res = [field.one]
        a = fmod(a, f)
        while e:
            if e & 1:
                res = fmod(fmul(res, a), f)
            a = fmod(fmul(a, a), f)
            e >>= 1
        return res

    h = fmonic(h)
    # Split until linear. Deterministic sweep: basis monomials x^k first
    # (enough to separate roots of a quadratic), then digit combinations.
    counter = [0]

    def next_elt():
        counter[0] += 1
        c = counter[0]
        if field.backend == "table":
            return c % field.order
        if c <= field.n:
            v = [0] * field.n
            v[c - 1] = 1
            return tuple(v)
        v, cc = [], c - field.n
        for _ in range(field.n):
            v.append(cc % p)
            cc //= p
        return tuple(v)

    def fadd(a, b):
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, y in enumerate(b):
            out[i] = field.add(out[i], y)
        while out and out[-1] == field.zero:
            out.pop()
        return out

    def split(f):
        if len(f) - 1 == 1:
            return field.neg(f[0])
        for _ in range(8 * field.n + 32):
            c = next_elt()
            if p == 2:
                # additive splitting: traces of c*root separate the roots
                if c == field.zero:
                    continue
                r = [field.zero, c]
                s, cur = [], fmod(list(r), f)
                for _ in range(field.n):
                    s = fadd(s, cur)
                    cur = fmod(fmul(cur, cur), f)
                g = fgcd(s, f)
            else:
                r = [c, field.one]
                s = list(fpowmod(r, (field.order - 1) // 2, f))
                s = fadd(s, [field.neg(field.one)])
                g = fgcd(s, f)
            if 0 < len(g) - 1 < len(f) - 1:
                g = fmonic(g)
                if len(g) - 1 > (len(f) - 1) // 2:
                    # take the complementary factor, it is smaller
                    q, rem = _fdivmod(f, g)
                    assert not rem
                    g = fmonic(q)
                return split(g)
        raise RuntimeError("root splitting failed")

    def _fdivmod(a, f):
        a = list(a)
        df = len(f) - 1
        q = [field.zero] * max(1, len(a) - df)
        while len(a) - 1 >= df and a:
            lead = a[-1]
            if lead != field.zero:
                shift = len(a) - 1 - df
                q[shift] = lead
                for i, cf in enumerate(f):
                    a[shift + i] = field.sub(a[shift + i], field.mul(lead, cf))
            a.pop()
        while a and a[-1] == field.zero:
            a.pop()
        return q, a

    root = split(h)
    # verify
    acc, xp = field.zero, field.one
    for c in coeffs:
        acc = field.add(acc, field.mul(field.from_int(c), xp))
        xp = field.mul(xp, root)
    assert acc == field.zero
    return root


@lru_cache(maxsize=None)
def get_field(p: int, n: int, force_poly: bool = False):
    if not force_poly and p**n <= TABLE_LIMIT:
        return GFTable(p, n)
    return GFPoly(p, n)


_EMBED_CACHE: dict = {}


def get_embedding(small, big) -> FieldEmbedding:
    """Embedding of `small` into `big` (small.n | big.n), cached."""
    key = (id(small), id(big))
    if key in _EMBED_CACHE:
        return _EMBED_CACHE[key]
    if small.p != big.p or big.n % small.n:
        raise ParameterMismatch("no embedding between these fields")
    minpoly = small.minpoly_over_prime(small.generator())
    if small.n == 1:
        root = big.from_int(small.to_vec(small.generator())[0])
    elif big.backend == "table":
        root = None
        step = big.mult_order // small.mult_order
        for j in range(small.mult_order):
            cand = (j * step) % big.mult_order + 1
            acc, xp = big.zero, big.one
            for c in minpoly:
                acc = big.add(acc, big.mul(big.from_int(c), xp))
                xp = big.mul(xp, cand)
            if acc == big.zero:
                root = cand
                break
        assert root is not None
    else:
        root = _poly_root_in_field(big, minpoly)
    emb = FieldEmbedding(small, big, root)
    _EMBED_CACHE[key] = emb
    return emb


# ---------------------------------------------------------------------------
# GF(p) linear algebra (numpy), used by the semilinear solver


def nullspace_modp(A, p):
    """Basis (list of int vectors) of the right nullspace of A over F_p."""
    import numpy as np

    A = np.array(A, dtype=np.int64) % p
    rows, cols = A.shape
    M = A.copy()
    pivots = []
    r = 0
    for c in range(cols):
        piv = None
        for rr in range(r, rows):
            if M[rr, c] % p:
                piv = rr
                break
        if piv is None:
            continue
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        inv = pow(int(M[r, c]), -1, p)
        M[r] = (M[r] * inv) % p
        mask = (M[:, c] % p) != 0
        mask[r] = False
        if mask.any():
            M[mask] = (M[mask] - np.outer(M[mask, c], M[r])) % p
        pivots.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = np.zeros(cols, dtype=np.int64)
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-int(M[i, fc])) % p
        basis.append(v % p)
    return basis
