"""Exact arithmetic in F_p and its extensions F_{p^k}.

A field is described by (p, k, modulus): the extension F_{p^k} is presented
as F_p[x]/(modulus) for a monic irreducible modulus of degree k.  For k = 1
the modulus is x, so elements are plain residues mod p.

Elements are carried as integer indices: the element with coefficient vector
(c_0, ..., c_{k-1}) has index sum(c_i * p**i).  For p = 2 this makes field
addition a single XOR.  Small fields (q <= 2^16) lazily build exp/log tables
over a fixed generator so that multiplication and inversion are table
lookups; larger fields fall back to polynomial arithmetic mod the modulus.

Everything here is immutable after construction and safe to share across
workers.
"""

from __future__ import annotations

import itertools

_WORD_PRIME_LIMIT = 1 << 61
_TABLE_LIMIT = 1 << 16
_ADD_TABLE_LIMIT = 1 << 10

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n < 3.3e24."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# Raw polynomial helpers over F_p (coefficient tuples, low -> high, no
# trailing zeros).  These are only used to search for / validate moduli;
# general-purpose polynomial arithmetic lives in unipoly.py.
# ---------------------------------------------------------------------------

def _strip(c):
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return tuple(c[:n])


def _polymul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _strip(out)


def _polyrem(a, b, p):
    # b must be nonzero
    a = list(a)
    db = len(b) - 1
    inv_lb = pow(b[-1], p - 2, p)
    while len(a) - 1 >= db and a:
        if a[-1] == 0:
            a.pop()
            continue
        coef = a[-1] * inv_lb % p
        shift = len(a) - 1 - db
        for j, bj in enumerate(b):
            if bj:
                a[shift + j] = (a[shift + j] - coef * bj) % p
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return tuple(a)


def _polygcd(a, b, p):
    while b:
        a, b = b, _polyrem(a, b, p)
    return a


def _polymulmod(a, b, mod, p):
    return _polyrem(_polymul(a, b, p), mod, p)


def _polypowmod(a, e, mod, p):
    result = (1,)
    a = _polyrem(a, mod, p)
    while e:
        if e & 1:
            result = _polymulmod(result, a, mod, p)
        a = _polymulmod(a, a, mod, p)
        e >>= 1
    return result


def _prime_factors(n):
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


def _is_irreducible_coeffs(f, p):
    """Rabin irreducibility test for a monic poly over F_p."""
    k = len(f) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    x = (0, 1)
    # x^(p^k) == x mod f
    h = x
    for _ in range(k):
        h = _polypowmod(h, p, f, p)
    if h != x:
        return False
    for ell in _prime_factors(k):
        h = x
        for _ in range(k // ell):
            h = _polypowmod(h, p, f, p)
        diff = [0] * max(len(h), 2)
        for i, c in enumerate(h):
            diff[i] = c
        diff[1] = (diff[1] - 1) % p
        g = _polygcd(_strip(tuple(c % p for c in diff)), f, p)
        if len(g) - 1 > 0:
            return False
    return True


def find_irreducible_coeffs(p: int, k: int):
    """Lexicographically smallest monic irreducible of degree k over F_p.

    The scan orders candidates by coefficient vector (c_0, ..., c_{k-1})
    with c_0 as the most significant key, so the choice is canonical and
    two calls always agree.
    """
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    if k < 1:
        raise ValueError(f"extension degree must be >= 1, got {k}")
    if k == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=k):
        f = tuple(tail) + (1,)
        if _is_irreducible_coeffs(f, p):
            return f
    raise AssertionError("unreachable: irreducibles of every degree exist")


# ---------------------------------------------------------------------------
# Field descriptor
# ---------------------------------------------------------------------------

class Field:
    """F_{p^k} presented as F_p[x]/(modulus); element ops on integer indices."""

    __slots__ = ("p", "k", "q", "modulus", "_exp", "_log", "_add_table",
                 "__weakref__")

    def __init__(self, p: int, k: int = 1, modulus=None, _trusted: bool = False):
        if not _trusted:
            if not is_prime(p):
                raise ValueError(f"p = {p} is not prime")
            if p >= _WORD_PRIME_LIMIT:
                raise ValueError("p exceeds the machine-word-size limit")
            if k < 1:
                raise ValueError(f"extension degree must be >= 1, got {k}")
        self.p = p
        self.k = k
        self.q = p ** k
        if modulus is None:
            modulus = find_irreducible_coeffs(p, k) if k > 1 else (0, 1)
        else:
            modulus = tuple(c % p for c in modulus)
            if not _trusted:
                if len(modulus) != k + 1 or modulus[-1] != 1:
                    raise ValueError("modulus must be monic of degree k")
                if k > 1 and not _is_irreducible_coeffs(modulus, p):
                    raise ValueError("modulus is not irreducible over F_p")
        self.modulus = modulus
        self._exp = None
        self._log = None
        self._add_table = None

    # -- identity ----------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, Field)
                and self.p == other.p and self.k == other.k
                and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __repr__(self):
        if self.k == 1:
            return f"Field({self.p})"
        return f"Field({self.p}, {self.k}, modulus={self.modulus})"

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    # -- element codec ------------------------------------------------------

    def coeffs_of(self, a: int):
        """Coefficient vector (length k) of the element with index a."""
        p, k = self.p, self.k
        out = []
        for _ in range(k):
            out.append(a % p)
            a //= p
        return tuple(out)

    def index_of(self, coeffs) -> int:
        p = self.p
        a = 0
        for c in reversed(tuple(coeffs)):
            a = a * p + c % p
        return a

    def elements(self):
        return range(self.q)

    def random_element(self, rng) -> int:
        return rng.randrange(self.q)

    # -- arithmetic on indices ----------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        table = self._add_table
        if table is not None:
            return table[a * self.q + b]
        return self._add_generic(a, b)

    def _add_generic(self, a, b):
        p = self.p
        out = 0
        mult = 1
        while a or b:
            out += ((a % p + b % p) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def neg(self, a: int) -> int:
        if self.k == 1:
            return -a % self.p
        if self.p == 2:
            return a
        p = self.p
        out = 0
        mult = 1
        while a:
            out += (-a % p) % p * mult
            a //= p
            mult *= p
        return out

    def sub(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a - b) % self.p
        if self.p == 2:
            return a ^ b
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        if self.q <= _TABLE_LIMIT:
            self._ensure_tables()
            return self._exp[self._log[a] + self._log[b]]
        return self.index_of(_polymulmod(self.coeffs_of(a), self.coeffs_of(b),
                                         self.modulus, self.p))

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inversion of zero field element")
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        if self.q <= _TABLE_LIMIT:
            self._ensure_tables()
            return self._exp[(self.q - 1) - self._log[a]]
        return self.pow_(a, self.q - 2)

    def pow_(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow_(self.inv(a), -e)
        if self.k == 1:
            return pow(a, e, self.p)
        if a == 0:
            return 0 if e else 1
        if self.q <= _TABLE_LIMIT:
            self._ensure_tables()
            return self._exp[self._log[a] * e % (self.q - 1)]
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def frobenius(self, a: int) -> int:
        """The p-power map a -> a^p."""
        return self.pow_(a, self.p)

    # -- tables --------------------------------------------------------------

    def _ensure_tables(self):
        if self._exp is not None:
            return
        q, p = self.q, self.p
        gen = self._find_generator()
        exp = [1] * (2 * (q - 1))
        log = [0] * q
        acc = 1
        for i in range(q - 1):
            exp[i] = acc
            log[acc] = i
            acc = self.index_of(_polymulmod(self.coeffs_of(acc),
                                            self.coeffs_of(gen),
                                            self.modulus, p))
        for i in range(q - 1, 2 * (q - 1)):
            exp[i] = exp[i - (q - 1)]
        self._exp = exp
        self._log = log
        if p != 2 and q <= _ADD_TABLE_LIMIT:
            table = [0] * (q * q)
            for a in range(q):
                for b in range(a, q):
                    s = self._add_generic(a, b)
                    table[a * q + b] = s
                    table[b * q + a] = s
            self._add_table = table

    def _find_generator(self):
        q = self.q
        if q == 2:
            return 1
        factors = _prime_factors(q - 1)
        for g in range(2, q):
            ok = True
            for ell in factors:
                c = self.coeffs_of(g)
                if _polypowmod(c, (q - 1) // ell, self.modulus, self.p) == (1,):
                    ok = False
                    break
            if ok:
                return g
        raise AssertionError("no generator found; field construction is broken")


class FieldElement:
    """An element of a Field, wrapping (field, index) with operator sugar."""

    __slots__ = ("field", "idx")

    def __init__(self, field: Field, idx: int):
        self.field = field
        self.idx = idx % field.q

    @classmethod
    def from_coeffs(cls, field: Field, coeffs) -> "FieldElement":
        return cls(field, field.index_of(coeffs))

    @property
    def coeffs(self):
        return self.field.coeffs_of(self.idx)

    def _check(self, other):
        if not isinstance(other, FieldElement):
            raise TypeError(f"cannot combine FieldElement with {type(other).__name__}")
        if other.field != self.field:
            raise ValueError("field descriptor mismatch")
        return other

    def __add__(self, other):
        other = self._check(other)
        return FieldElement(self.field, self.field.add(self.idx, other.idx))

    def __sub__(self, other):
        other = self._check(other)
        return FieldElement(self.field, self.field.sub(self.idx, other.idx))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.idx))

    def __mul__(self, other):
        other = self._check(other)
        return FieldElement(self.field, self.field.mul(self.idx, other.idx))

    def __truediv__(self, other):
        other = self._check(other)
        return FieldElement(self.field, self.field.mul(self.idx, self.field.inv(other.idx)))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow_(self.idx, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.idx))

    def frobenius(self) -> "FieldElement":
        return FieldElement(self.field, self.field.frobenius(self.idx))

    def is_zero(self) -> bool:
        return self.idx == 0

    def __eq__(self, other):
        return (isinstance(other, FieldElement)
                and self.field == other.field and self.idx == other.idx)

    def __hash__(self):
        return hash((self.field, self.idx))

    def __repr__(self):
        return f"FieldElement({self.field!r}, {self.idx})"
