"""Bivariate polynomials over a Field and the elimination primitives.

A BiPoly is stored as a tuple of y-coefficients, each a UniPoly in x, with
no trailing zero coefficients.  On top of that representation:

  * resultant_y     -- resultant with respect to y via the subresultant
    pseudo-remainder sequence (fraction-free; coefficient degrees stay
    bounded by the resultant degree instead of doubling each step).
  * bipoly_gcd      -- content/primitive-part split plus a primitive
    pseudo-remainder sequence for the y-part.
  * shears and variable swaps, used by the common-zero decision procedure
    to escape degenerate resultants.

prem(A, B) follows the classical pseudo-division: it returns
lc(B)^(deg A - deg B + 1) * A  mod  B, which keeps every division in the
subresultant sequence exact.
"""

from __future__ import annotations

from math import comb

from .field import Field
from .unipoly import UniPoly


class BiPoly:
    """Dense bivariate polynomial; coefficients of y^j are UniPoly in x."""

    __slots__ = ("field", "ycoeffs")

    def __init__(self, field: Field, ycoeffs):
        ycoeffs = tuple(ycoeffs)
        n = len(ycoeffs)
        while n and ycoeffs[n - 1].is_zero():
            n -= 1
        self.field = field
        self.ycoeffs = ycoeffs[:n]

    @classmethod
    def zero(cls, field):
        return cls(field, ())

    @classmethod
    def from_terms(cls, field, terms: dict) -> "BiPoly":
        """Build from {(x_exp, y_exp): element index}."""
        if not terms:
            return cls.zero(field)
        degy = max(j for (_, j) in terms)
        degx = max(i for (i, _) in terms)
        cols = [[0] * (degx + 1) for _ in range(degy + 1)]
        for (i, j), c in terms.items():
            cols[j][i] = field.add(cols[j][i], c)
        return cls(field, tuple(UniPoly(field, col) for col in cols))

    @classmethod
    def from_unipoly_in_x(cls, u: UniPoly) -> "BiPoly":
        return cls(u.field, (u,))

    def terms(self) -> dict:
        out = {}
        for j, c in enumerate(self.ycoeffs):
            for i, v in enumerate(c.coeffs):
                if v:
                    out[(i, j)] = v
        return out

    # -- queries ---------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.ycoeffs

    @property
    def degy(self) -> int:
        return len(self.ycoeffs) - 1

    @property
    def degx(self) -> int:
        if not self.ycoeffs:
            return -1
        return max(c.degree for c in self.ycoeffs)

    def total_degree(self) -> int:
        if not self.ycoeffs:
            return -1
        return max(j + c.degree for j, c in enumerate(self.ycoeffs)
                   if not c.is_zero())

    def is_constant(self) -> bool:
        return self.degy <= 0 and self.degx <= 0

    def lc_y(self) -> UniPoly:
        if not self.ycoeffs:
            return UniPoly.zero(self.field)
        return self.ycoeffs[-1]

    def __eq__(self, other):
        return (isinstance(other, BiPoly) and self.field == other.field
                and self.ycoeffs == other.ycoeffs)

    def __hash__(self):
        return hash((self.field, self.ycoeffs))

    def __repr__(self):
        return f"BiPoly({self.field!r}, degx={self.degx}, degy={self.degy})"

    # -- arithmetic --------------------------------------------------------------

    def __add__(self, other):
        a, b = self.ycoeffs, other.ycoeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for j, c in enumerate(b):
            out[j] = out[j] + c
        return BiPoly(self.field, out)

    def __neg__(self):
        return BiPoly(self.field, tuple(-c for c in self.ycoeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, UniPoly):
            return BiPoly(self.field, tuple(c * other for c in self.ycoeffs))
        if self.is_zero() or other.is_zero():
            return BiPoly.zero(self.field)
        out = [UniPoly.zero(self.field)
               for _ in range(len(self.ycoeffs) + len(other.ycoeffs) - 1)]
        for j, c in enumerate(self.ycoeffs):
            if c.is_zero():
                continue
            for j2, c2 in enumerate(other.ycoeffs):
                if not c2.is_zero():
                    out[j + j2] = out[j + j2] + c * c2
        return BiPoly(self.field, out)

    def mul_scalar(self, c: int) -> "BiPoly":
        return BiPoly(self.field, tuple(u.mul_scalar(c) for u in self.ycoeffs))

    def shift_y(self, j: int) -> "BiPoly":
        if self.is_zero():
            return self
        zero = UniPoly.zero(self.field)
        return BiPoly(self.field, (zero,) * j + self.ycoeffs)

    # -- evaluation and substitution ----------------------------------------------

    def eval(self, a: int, b: int) -> int:
        """Value at (x, y) = (a, b), as an element index."""
        f = self.field
        acc = 0
        for c in reversed(self.ycoeffs):
            acc = f.add(f.mul(acc, b), c.eval_at(a))
        return acc

    def eval_x(self, a: int, target: Field = None, map_coeff=None) -> UniPoly:
        """Specialize x = a, yielding a UniPoly in y (optionally over target)."""
        target = target if target is not None else self.field
        return UniPoly(target, tuple(c.eval_in(target, a, map_coeff)
                                     for c in self.ycoeffs))

    def map_coeffs(self, target: Field, map_coeff=None) -> "BiPoly":
        return BiPoly(target, tuple(c.map_coeffs(target, map_coeff)
                                    for c in self.ycoeffs))

    def swap_xy(self) -> "BiPoly":
        terms = {(j, i): c for (i, j), c in self.terms().items()}
        return BiPoly.from_terms(self.field, terms)

    def shear_x(self, lam: int) -> "BiPoly":
        """Substitute x -> x + lam*y."""
        if lam == 0 or self.is_zero():
            return self
        f = self.field
        out: dict = {}
        lam_pows = [1]
        for (i, j), c in self.terms().items():
            while len(lam_pows) <= i:
                lam_pows.append(f.mul(lam_pows[-1], lam))
            for t in range(i + 1):
                coef = f.mul(c, f.mul(comb(i, t) % f.p, lam_pows[t]))
                if coef:
                    key = (i - t, j + t)
                    prev = out.get(key, 0)
                    s = f.add(prev, coef)
                    if s:
                        out[key] = s
                    elif key in out:
                        del out[key]
        return BiPoly.from_terms(f, out)

    # -- content / primitive part ---------------------------------------------------

    def content(self) -> UniPoly:
        """Monic gcd of the y-coefficients (a UniPoly in x)."""
        acc = UniPoly.zero(self.field)
        for c in self.ycoeffs:
            acc = acc.gcd(c)
            if acc.degree == 0:
                break
        return acc

    def primitive_part(self) -> "BiPoly":
        if self.is_zero():
            return self
        cont = self.content()
        if cont.degree == 0:
            return self
        return BiPoly(self.field, tuple(c.exact_div(cont) for c in self.ycoeffs))

    def text(self, xname: str = "x", yname: str = "y") -> str:
        """Human-readable term list, highest y-degree first."""
        parts = []
        for j in range(len(self.ycoeffs) - 1, -1, -1):
            c = self.ycoeffs[j]
            for i in range(c.degree, -1, -1):
                v = c.coeffs[i] if i < len(c.coeffs) else 0
                if not v:
                    continue
                factors = []
                if v != 1 or (i == 0 and j == 0):
                    factors.append(str(v))
                if i:
                    factors.append(xname if i == 1 else f"{xname}^{i}")
                if j:
                    factors.append(yname if j == 1 else f"{yname}^{j}")
                parts.append("*".join(factors))
        return " + ".join(parts) if parts else "0"


# -------------------------------------------------------------------------------
# Pseudo-division and the resultant
# -------------------------------------------------------------------------------

def prem(a: BiPoly, b: BiPoly) -> BiPoly:
    """Pseudo-remainder: lc(b)^(degy a - degy b + 1) * a  mod  b."""
    if b.is_zero():
        raise ZeroDivisionError("pseudo-division by zero")
    db = b.degy
    bc = b.ycoeffs
    lb = bc[-1]
    rc = list(a.ycoeffs)
    e = a.degy - db + 1
    while rc and len(rc) - 1 >= db:
        lr = rc.pop()          # the top terms cancel exactly
        shift = len(rc) - db
        for j in range(len(rc)):
            c = rc[j] * lb
            if shift <= j:
                c = c - bc[j - shift] * lr
            rc[j] = c
        while rc and rc[-1].is_zero():
            rc.pop()
        e -= 1
    if e > 0 and rc:
        mult = lb
        for _ in range(e - 1):
            mult = mult * lb
        rc = [c * mult for c in rc]
    return BiPoly(a.field, rc)


def resultant_y(a: BiPoly, b: BiPoly) -> UniPoly:
    """Resultant with respect to y, as a polynomial in x.

    Subresultant pseudo-remainder sequence; all interior divisions are exact.
    Inputs must both have positive y-degree (callers deal with the degenerate
    y-constant cases separately).
    """
    if a.field != b.field:
        raise ValueError("field descriptor mismatch")
    if a.degy < 1 or b.degy < 1:
        raise ValueError("resultant_y needs positive y-degree on both sides")
    field = a.field
    neg_one = field.neg(1)
    sign = 1
    if a.degy < b.degy:
        if (a.degy * b.degy) % 2 == 1:
            sign = -sign
        a, b = b, a
    one = UniPoly.one(field)
    g = one
    h = one
    while True:
        delta = a.degy - b.degy
        if (a.degy % 2 == 1) and (b.degy % 2 == 1):
            sign = -sign
        r = prem(a, b)
        a = b
        if r.is_zero():
            return UniPoly.zero(field)
        divisor = g * _unipow(h, delta)
        b = BiPoly(field, tuple(c.exact_div(divisor) for c in r.ycoeffs))
        g = a.lc_y()
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = _unipow(g, delta).exact_div(_unipow(h, delta - 1))
        if b.degy <= 0:
            break
    e = a.degy
    c = b.ycoeffs[0]
    res = _unipow(c, e)
    if e >= 2:
        res = res.exact_div(_unipow(h, e - 1))
    if sign < 0 and field.p != 2:
        res = res.mul_scalar(neg_one)
    return res


def _unipow(u: UniPoly, e: int) -> UniPoly:
    if e == 0:
        return UniPoly.one(u.field)
    acc = u
    for _ in range(e - 1):
        acc = acc * u
    return acc


def bipoly_gcd(a: BiPoly, b: BiPoly) -> BiPoly:
    """Bivariate gcd, normalized so its leading coefficient chain is monic."""
    if a.field != b.field:
        raise ValueError("field descriptor mismatch")
    if a.is_zero():
        return _normalize(b)
    if b.is_zero():
        return _normalize(a)
    field = a.field
    cont = a.content().gcd(b.content())
    pa, pb = a.primitive_part(), b.primitive_part()
    if pa.degy < pb.degy:
        pa, pb = pb, pa
    while True:
        if pb.is_zero():
            gy = pa
            break
        if pb.degy == 0:
            # primitive and y-free means a unit times 1
            gy = BiPoly(field, (UniPoly.one(field),))
            break
        r = prem(pa, pb)
        pa, pb = pb, r.primitive_part()
    g = gy.primitive_part() * cont
    return _normalize(g)


def _normalize(g: BiPoly) -> BiPoly:
    if g.is_zero():
        return g
    lead = g.lc_y().lc()
    if lead == 1:
        return g
    return g.mul_scalar(g.field.inv(lead))


def system_gcd(polys) -> BiPoly:
    """gcd of a list of BiPoly, with early exit once it collapses to a unit."""
    acc = None
    for g in polys:
        acc = g if acc is None else bipoly_gcd(acc, g)
        if acc.is_constant() and not acc.is_zero():
            break
    return acc


def bipoly_exact_div(a: BiPoly, h: BiPoly) -> BiPoly:
    """Quotient a / h for an exact multiple a of h.

    Every intermediate remainder stays a multiple of h, so its leading
    y-coefficient is an exact UniPoly multiple of h's; a failed coefficient
    division means a was not a multiple after all.
    """
    if h.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    field = a.field
    dh = h.degy
    r = a
    qterms = {}
    while not r.is_zero() and r.degy >= dh:
        t = r.lc_y().exact_div(h.lc_y())
        qterms[r.degy - dh] = t
        r = r - (h * t).shift_y(r.degy - dh)
    if not r.is_zero():
        raise ArithmeticError("bivariate division expected to be exact was not")
    if not qterms:
        return BiPoly.zero(field)
    out = [UniPoly.zero(field)] * (max(qterms) + 1)
    for j, t in qterms.items():
        out[j] = t
    return BiPoly(field, out)
