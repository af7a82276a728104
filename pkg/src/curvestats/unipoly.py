"""Univariate polynomial toolkit over a Field.

Coefficients are stored low degree first with no trailing zeros; the zero
polynomial has an empty coefficient tuple and degree -1.  Two storage
backends sit behind the UniPoly constructor:

  * _Gf2Poly  -- F_2 coefficients packed into a single Python int, one
    coefficient per 8-bit slot.  Multiplication is then one big-int multiply
    followed by a mask (the slot width keeps convolution sums below 256, so
    the low bit of each slot is the product coefficient mod 2), and
    remainder/gcd are shift-XOR loops.  This is the hot path: the
    elimination engine over F_2 spends nearly all its time here.
  * _TuplePoly -- anything else; coefficient tuples of element indices with
    schoolbook or numpy-convolution multiplication.

On top of the backends live the shared algorithms: gcd, modular powering,
squarefree part, distinct-degree factorization, equal-degree splitting,
irreducibility testing and root finding.
"""

from __future__ import annotations

import numpy as np

from .field import Field, find_irreducible_coeffs

_SLOT = 8
_SLOT_MAX_LEN = 255          # convolution sums must stay below 2^8
_NP_THRESHOLD = 40           # combined length above which numpy convolve wins
_NP_PRIME_LIMIT = 1 << 20    # keep int64 convolution sums exact
_ROOT_SCAN_LIMIT = 1 << 12

_mask_cache: dict[int, int] = {}


def _slot_mask(nslots: int) -> int:
    m = _mask_cache.get(nslots)
    if m is None:
        m = sum(1 << (_SLOT * i) for i in range(nslots))
        _mask_cache[nslots] = m
    return m


class UniPoly:
    """Dense univariate polynomial over a Field."""

    __slots__ = ("field",)

    def __new__(cls, field: Field, coeffs=()):
        if cls is UniPoly:
            cls = _Gf2Poly if (field.p == 2 and field.k == 1) else _TuplePoly
        self = object.__new__(cls)
        self.field = field
        self._init(coeffs)
        return self

    # -- subclass storage hooks ---------------------------------------------

    def _init(self, coeffs):
        raise NotImplementedError

    @property
    def coeffs(self) -> tuple:
        raise NotImplementedError

    @property
    def degree(self) -> int:
        """Degree; -1 stands in for -infinity on the zero polynomial."""
        raise NotImplementedError

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, field):
        return UniPoly(field, ())

    @classmethod
    def one(cls, field):
        return UniPoly(field, (1,))

    @classmethod
    def x(cls, field):
        return UniPoly(field, (0, 1))

    @classmethod
    def constant(cls, field, c):
        return UniPoly(field, (c,))

    # -- basic queries --------------------------------------------------------

    def is_zero(self) -> bool:
        return self.degree < 0

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    def lc(self) -> int:
        c = self.coeffs
        return c[-1] if c else 0

    def constant_coeff(self) -> int:
        c = self.coeffs
        return c[0] if c else 0

    def __eq__(self, other):
        return (isinstance(other, UniPoly) and self.field == other.field
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        return f"UniPoly({self.field!r}, {self.coeffs})"

    def __bool__(self):
        return not self.is_zero()

    # -- ring operations (subclass-provided) ----------------------------------

    def __add__(self, other):
        raise NotImplementedError

    def __sub__(self, other):
        raise NotImplementedError

    def __neg__(self):
        raise NotImplementedError

    def __mul__(self, other):
        raise NotImplementedError

    def mul_scalar(self, c: int):
        raise NotImplementedError

    def shift(self, j: int):
        """Multiply by x**j."""
        raise NotImplementedError

    def divmod_(self, other):
        raise NotImplementedError

    def rem(self, other):
        return self.divmod_(other)[1]

    def exact_div(self, other):
        q, r = self.divmod_(other)
        if not r.is_zero():
            raise ArithmeticError("division expected to be exact was not")
        return q

    # -- shared algorithms -----------------------------------------------------

    def monic(self):
        if self.is_zero():
            return self
        lead = self.lc()
        if lead == 1:
            return self
        return self.mul_scalar(self.field.inv(lead))

    def gcd(self, other: "UniPoly") -> "UniPoly":
        """Monic greatest common divisor; gcd(0, 0) = 0."""
        if self.field != other.field:
            raise ValueError("field descriptor mismatch")
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.rem(b)
        return a.monic()

    def powmod(self, e: int, mod: "UniPoly") -> "UniPoly":
        result = UniPoly.one(self.field)
        base = self.rem(mod)
        while e:
            if e & 1:
                result = (result * base).rem(mod)
            base = (base * base).rem(mod)
            e >>= 1
        return result

    def eval_at(self, a: int) -> int:
        """Evaluate at the element with index a (Horner)."""
        f = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = f.add(f.mul(acc, a), c)
        return acc

    def eval_in(self, target: Field, a: int, map_coeff=None) -> int:
        """Evaluate at a in a larger field, mapping coefficients first."""
        acc = 0
        for c in reversed(self.coeffs):
            mc = c if map_coeff is None else map_coeff(c)
            acc = target.add(target.mul(acc, a), mc)
        return acc

    def map_coeffs(self, target: Field, map_coeff=None) -> "UniPoly":
        if map_coeff is None:
            return UniPoly(target, self.coeffs)
        return UniPoly(target, tuple(map_coeff(c) for c in self.coeffs))

    def derivative(self) -> "UniPoly":
        f = self.field
        c = self.coeffs
        return UniPoly(f, tuple(f.mul(i % f.p, c[i]) for i in range(1, len(c))))

    def pth_root(self) -> "UniPoly":
        """Inverse of x -> x^p on polynomials with zero derivative."""
        f = self.field
        p = f.p
        c = self.coeffs
        if any(c[i] for i in range(len(c)) if i % p):
            raise ValueError("polynomial is not a p-th power")
        root_exp = p ** (f.k - 1)
        return UniPoly(f, tuple(f.pow_(c[i], root_exp)
                                for i in range(0, len(c), p)))

    def squarefree_part(self) -> "UniPoly":
        """Monic radical: the product of the distinct irreducible factors."""
        fpoly = self.monic()
        if fpoly.degree <= 0:
            return UniPoly.one(self.field) if not fpoly.is_zero() else fpoly
        d = fpoly.derivative()
        if d.is_zero():
            return fpoly.pth_root().squarefree_part()
        g = fpoly.gcd(d)
        w = fpoly.exact_div(g)
        # strip from g every factor it shares with w; what remains is a p-th power
        gw = g.gcd(w)
        while gw.degree > 0:
            g = g.exact_div(gw)
            gw = g.gcd(w)
        if g.degree > 0:
            return (w * g.pth_root().squarefree_part()).monic()
        return w.monic()

    def is_irreducible(self) -> bool:
        """Rabin's test over F_q."""
        n = self.degree
        if n < 1:
            return False
        if n == 1:
            return True
        f = self.monic()
        field = self.field
        q = field.q
        x = UniPoly.x(field)
        h = x.rem(f)
        for _ in range(n):
            h = h.powmod(q, f)
        if h != x.rem(f):
            return False
        from .field import _prime_factors
        for ell in _prime_factors(n):
            h = x.rem(f)
            for _ in range(n // ell):
                h = h.powmod(q, f)
            if f.gcd(h - x).degree > 0:
                return False
        return True

    def distinct_degree_factor(self) -> list:
        """[(m, product of the degree-m irreducible factors of the radical)].

        The squarefree part is taken first, so repeated factors appear once.
        """
        if self.is_zero():
            raise ValueError("cannot factor the zero polynomial")
        field = self.field
        f = self.squarefree_part()
        out = []
        if f.degree < 1:
            return out
        q = field.q
        x = UniPoly.x(field)
        h = x.rem(f)
        m = 0
        while f.degree > 0:
            m += 1
            if 2 * m > f.degree:
                out.append((f.degree, f))
                break
            h = h.powmod(q, f)
            g = f.gcd(h - x)
            if g.degree > 0:
                out.append((m, g))
                f = f.exact_div(g)
                h = h.rem(f)
        return out

    def split_irreducible(self, m: int, rng) -> list:
        """Full equal-degree splitting of a product of degree-m irreducibles.

        Output is sorted by coefficient tuple, so it does not depend on the
        randomness beyond termination.
        """
        f = self.monic()
        if f.degree % m != 0:
            raise ValueError(f"degree {f.degree} is not a multiple of m = {m}")
        factors = []
        self._edf(f, m, rng, factors)
        factors.sort(key=lambda g: g.coeffs)
        return factors

    def _edf(self, f, m, rng, out):
        if f.degree == m:
            out.append(f)
            return
        field = self.field
        q = field.q
        n = f.degree
        while True:
            r = UniPoly(field, tuple(field.random_element(rng) for _ in range(n)))
            if r.degree < 1:
                continue
            if field.p == 2:
                # trace of r from F_{q^m} down to F_2, computed mod f
                k_total = m * field.k
                t = r.rem(f)
                acc = t
                for _ in range(k_total - 1):
                    t = (t * t).rem(f)
                    acc = acc + t
                g = f.gcd(acc)
            else:
                s = r.powmod((q ** m - 1) // 2, f)
                g = f.gcd(s - UniPoly.one(field))
            if 0 < g.degree < n:
                self._edf(g, m, rng, out)
                self._edf(f.exact_div(g), m, rng, out)
                return

    def irreducible_factors(self, rng) -> list:
        """Distinct monic irreducible factors (multiplicity discarded)."""
        out = []
        for m, prod in self.distinct_degree_factor():
            out.extend(prod.split_irreducible(m, rng))
        return out

    def roots(self, rng=None) -> list:
        """Roots in the coefficient field itself, sorted by index."""
        if self.is_zero():
            raise ValueError("every element is a root of the zero polynomial")
        field = self.field
        if field.q <= _ROOT_SCAN_LIMIT:
            return [a for a in field.elements() if self.eval_at(a) == 0]
        x = UniPoly.x(field)
        g = self.gcd(x.powmod(field.q, self.monic()) - x)
        if g.degree < 1:
            return []
        import random as _random
        rng = rng if rng is not None else _random.Random(0)
        linears = g.split_irreducible(1, rng)
        return sorted(field.neg(h.constant_coeff()) for h in linears)


class _TuplePoly(UniPoly):
    """Generic backend: coefficient tuples of element indices."""

    __slots__ = ("_c",)

    def _init(self, coeffs):
        c = tuple(coeffs)
        n = len(c)
        while n and c[n - 1] == 0:
            n -= 1
        self._c = c[:n]

    @property
    def coeffs(self):
        return self._c

    @property
    def degree(self):
        return len(self._c) - 1

    def __add__(self, other):
        f = self.field
        a, b = self._c, other._c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, bi in enumerate(b):
            out[i] = f.add(out[i], bi)
        return UniPoly(f, out)

    def __neg__(self):
        f = self.field
        return UniPoly(f, tuple(f.neg(c) for c in self._c))

    def __sub__(self, other):
        f = self.field
        a, b = self._c, other._c
        out = list(a) + [0] * max(0, len(b) - len(a))
        for i, bi in enumerate(b):
            out[i] = f.sub(out[i], bi)
        return UniPoly(f, out)

    def __mul__(self, other):
        f = self.field
        a, b = self._c, other._c
        if not a or not b:
            return UniPoly.zero(f)
        if f.k == 1:
            p = f.p
            if len(a) + len(b) > _NP_THRESHOLD and p < _NP_PRIME_LIMIT:
                out = np.convolve(np.array(a, dtype=np.int64),
                                  np.array(b, dtype=np.int64)) % p
                return UniPoly(f, out.tolist())
            out = [0] * (len(a) + len(b) - 1)
            for i, ai in enumerate(a):
                if ai:
                    for j, bj in enumerate(b):
                        out[i + j] = (out[i + j] + ai * bj) % p
            return UniPoly(f, out)
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] = f.add(out[i + j], f.mul(ai, bj))
        return UniPoly(f, out)

    def mul_scalar(self, c):
        f = self.field
        if c == 0:
            return UniPoly.zero(f)
        if c == 1:
            return self
        if f.k == 1:
            p = f.p
            return UniPoly(f, tuple(ai * c % p for ai in self._c))
        return UniPoly(f, tuple(f.mul(ai, c) for ai in self._c))

    def shift(self, j):
        if not self._c:
            return self
        return UniPoly(self.field, (0,) * j + self._c)

    def divmod_(self, other):
        f = self.field
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        db = other.degree
        if self.degree < db:
            return UniPoly.zero(f), self
        inv_lb = f.inv(other.lc())
        b = other._c
        r = list(self._c)
        qc = [0] * (len(r) - db)
        k1 = f.k == 1
        p = f.p
        while len(r) - 1 >= db:
            lead = r[-1]
            if lead == 0:
                r.pop()
                continue
            coef = lead * inv_lb % p if k1 else f.mul(lead, inv_lb)
            shift = len(r) - 1 - db
            qc[shift] = coef
            if k1:
                for j in range(db):
                    if b[j]:
                        r[shift + j] = (r[shift + j] - coef * b[j]) % p
            else:
                for j in range(db):
                    if b[j]:
                        r[shift + j] = f.sub(r[shift + j], f.mul(coef, b[j]))
            r.pop()
        return UniPoly(f, qc), UniPoly(f, r)


class _Gf2Poly(UniPoly):
    """Packed backend for F_2[x]: one coefficient bit per 8-bit slot."""

    __slots__ = ("_v",)

    def _init(self, coeffs):
        if isinstance(coeffs, int):
            self._v = coeffs
            return
        v = 0
        for i, c in enumerate(coeffs):
            if c & 1:
                v |= 1 << (_SLOT * i)
        self._v = v

    @classmethod
    def _from_packed(cls, field, v: int):
        self = object.__new__(cls)
        self.field = field
        self._v = v
        return self

    @property
    def coeffs(self):
        v = self._v
        out = []
        while v:
            out.append(v & 1)
            v >>= _SLOT
        return tuple(out)

    @property
    def degree(self):
        v = self._v
        return (v.bit_length() - 1) // _SLOT if v else -1

    def __eq__(self, other):
        if isinstance(other, _Gf2Poly):
            return self.field == other.field and self._v == other._v
        return UniPoly.__eq__(self, other)

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __add__(self, other):
        return _Gf2Poly._from_packed(self.field, self._v ^ other._v)

    __sub__ = __add__

    def __neg__(self):
        return self

    def __mul__(self, other):
        a, b = self._v, other._v
        if not a or not b:
            return _Gf2Poly._from_packed(self.field, 0)
        da = (a.bit_length() - 1) // _SLOT
        db = (b.bit_length() - 1) // _SLOT
        if min(da, db) >= _SLOT_MAX_LEN:
            return self._mul_chunked(other)
        return _Gf2Poly._from_packed(self.field,
                                     (a * b) & _slot_mask(da + db + 1))

    def _mul_chunked(self, other):
        # split the smaller operand into slot blocks short enough that
        # convolution sums cannot overflow a slot
        a, b = self._v, other._v
        if a.bit_length() > b.bit_length():
            a, b = b, a
        block_bits = _SLOT * _SLOT_MAX_LEN
        block_mask = (1 << block_bits) - 1
        acc = 0
        shift = 0
        while a:
            chunk = a & block_mask
            if chunk:
                db = (b.bit_length() - 1) // _SLOT
                dc = (chunk.bit_length() - 1) // _SLOT
                acc ^= ((chunk * b) & _slot_mask(db + dc + 1)) << shift
            a >>= block_bits
            shift += block_bits
        return _Gf2Poly._from_packed(self.field, acc)

    def mul_scalar(self, c):
        return self if c & 1 else _Gf2Poly._from_packed(self.field, 0)

    def shift(self, j):
        return _Gf2Poly._from_packed(self.field, self._v << (_SLOT * j))

    def divmod_(self, other):
        bv = other._v
        if not bv:
            raise ZeroDivisionError("polynomial division by zero")
        db = (bv.bit_length() - 1) // _SLOT
        r = self._v
        q = 0
        dr = (r.bit_length() - 1) // _SLOT if r else -1
        while dr >= db:
            q |= 1 << (_SLOT * (dr - db))
            r ^= bv << (_SLOT * (dr - db))
            dr = (r.bit_length() - 1) // _SLOT if r else -1
        return (_Gf2Poly._from_packed(self.field, q),
                _Gf2Poly._from_packed(self.field, r))

    def rem(self, other):
        bv = other._v
        if not bv:
            raise ZeroDivisionError("polynomial division by zero")
        db = (bv.bit_length() - 1) // _SLOT
        r = self._v
        dr = (r.bit_length() - 1) // _SLOT if r else -1
        while dr >= db:
            r ^= bv << (_SLOT * (dr - db))
            dr = (r.bit_length() - 1) // _SLOT if r else -1
        return _Gf2Poly._from_packed(self.field, r)

    def gcd(self, other):
        if self.field != other.field:
            raise ValueError("field descriptor mismatch")
        a, b = self._v, other._v
        while b:
            db = (b.bit_length() - 1) // _SLOT
            r = a
            dr = (r.bit_length() - 1) // _SLOT if r else -1
            while dr >= db:
                r ^= b << (_SLOT * (dr - db))
                dr = (r.bit_length() - 1) // _SLOT if r else -1
            a, b = b, r
        return _Gf2Poly._from_packed(self.field, a)

    def monic(self):
        return self

    def derivative(self):
        # terms of odd degree survive; even slots of the shifted value
        v = self._v >> _SLOT
        out = 0
        i = 0
        while v:
            if (i % 2 == 0) and (v & 1):
                out |= 1 << (_SLOT * i)
            v >>= _SLOT
            i += 1
        return _Gf2Poly._from_packed(self.field, out)

    def pth_root(self):
        v = self._v
        out = 0
        i = 0
        while v:
            if v & 1:
                if i % 2:
                    raise ValueError("polynomial is not a square")
                out |= 1 << (_SLOT * (i // 2))
            v >>= _SLOT
            i += 1
        return _Gf2Poly._from_packed(self.field, out)

    def eval_at(self, a):
        if a == 0:
            return self._v & 1
        # a == 1: parity of the coefficient count
        return bin(self._v).count("1") & 1


def find_irreducible(p: int, k: int) -> UniPoly:
    """Canonical monic irreducible of degree k over F_p (see field module)."""
    coeffs = find_irreducible_coeffs(p, k)
    return UniPoly(Field(p), coeffs)


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd of two polynomials over the same field; gcd(0, 0) = 0."""
    return a.gcd(b)
