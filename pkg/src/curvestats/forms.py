"""Homogeneous forms, bihomogeneous forms, projective points and surfaces.

A Form is a dense homogeneous polynomial of degree d in n+1 variables over
F_p, its coefficient vector indexed by the graded-lex ordering of exponent
multi-indices (x0-major, descending).  A BiForm is a bihomogeneous form of
bidegree (d, d) in (u0, u1; v0, v1), stored as a (d+1) x (d+1) grid whose
(i, j) entry multiplies u0^(d-i) u1^i v0^(d-j) v1^j.

The two supported surfaces are the projective plane and the Segre quadric
(P^1 x P^1 embedded in P^3 by (u0 v0 : u0 v1 : u1 v0 : u1 v1)).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from math import comb

from .errors import ResourceCapError
from .field import Field, is_prime
from .bipoly import BiPoly

ENUMERATION_CAP = 1 << 28

P2 = "p2"
SEGRE = "segre"


@dataclass(frozen=True)
class SurfaceModel:
    """One of the two supported ambient surfaces over F_p."""

    kind: str
    p: int

    def __post_init__(self):
        if self.kind not in (P2, SEGRE):
            raise ValueError(f"unknown surface kind {self.kind!r}")
        if not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")

    @property
    def ambient_vars(self) -> int:
        return 3 if self.kind == P2 else 4


@functools.lru_cache(maxsize=None)
def monomial_exponents(n_vars: int, d: int) -> tuple:
    """Exponent tuples of the degree-d monomials, graded-lex (x0-major)."""
    if n_vars == 1:
        return ((d,),)
    out = []
    for e0 in range(d, -1, -1):
        for rest in monomial_exponents(n_vars - 1, d - e0):
            out.append((e0,) + rest)
    return tuple(out)


@functools.lru_cache(maxsize=None)
def _monomial_index(n_vars: int, d: int) -> dict:
    return {e: i for i, e in enumerate(monomial_exponents(n_vars, d))}


def space_size(p: int, n: int, d: int) -> int:
    """|S(d)| = p^C(d+n, n) for forms of degree d on P^n."""
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    return p ** comb(d + n, n)


class Form:
    """Dense homogeneous polynomial of degree d in n_vars variables over F_p."""

    __slots__ = ("p", "n_vars", "degree", "coeffs")

    def __init__(self, p: int, n_vars: int, degree: int, coeffs):
        coeffs = tuple(c % p for c in coeffs)
        expected = comb(degree + n_vars - 1, n_vars - 1)
        if len(coeffs) != expected:
            raise ValueError(
                f"coefficient vector has length {len(coeffs)}, expected {expected}")
        self.p = p
        self.n_vars = n_vars
        self.degree = degree
        self.coeffs = coeffs

    @classmethod
    def zero(cls, p, n_vars, degree):
        return cls(p, n_vars, degree,
                   (0,) * comb(degree + n_vars - 1, n_vars - 1))

    @classmethod
    def from_terms(cls, p, n_vars, degree, terms: dict):
        """Build from {exponent tuple: coefficient}."""
        idx = _monomial_index(n_vars, degree)
        coeffs = [0] * len(idx)
        for e, c in terms.items():
            coeffs[idx[tuple(e)]] = (coeffs[idx[tuple(e)]] + c) % p
        return cls(p, n_vars, degree, coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __eq__(self, other):
        return (isinstance(other, Form) and self.p == other.p
                and self.n_vars == other.n_vars
                and self.degree == other.degree and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.p, self.n_vars, self.degree, self.coeffs))

    def __repr__(self):
        return f"Form(p={self.p}, n_vars={self.n_vars}, d={self.degree}, {self.text()!r})"

    def exponents(self):
        return monomial_exponents(self.n_vars, self.degree)

    def text(self) -> str:
        """Canonical encoding: graded-lex monomials, e.g. 'x0^3*x1 + x2'."""
        parts = []
        for e, c in zip(self.exponents(), self.coeffs):
            if not c:
                continue
            factors = []
            if c != 1 or not any(e):
                factors.append(str(c))
            for v, ev in enumerate(e):
                if ev == 1:
                    factors.append(f"x{v}")
                elif ev > 1:
                    factors.append(f"x{v}^{ev}")
            parts.append("*".join(factors))
        return " + ".join(parts) if parts else "0"

    # -- calculus and substitution -------------------------------------------------

    def partial(self, var: int) -> "Form":
        """Formal partial derivative (characteristic p)."""
        if self.degree < 1:
            raise ValueError("cannot differentiate a constant form")
        p = self.p
        out = {}
        for e, c in zip(self.exponents(), self.coeffs):
            if not c or not e[var]:
                continue
            coef = c * e[var] % p
            if coef:
                e2 = list(e)
                e2[var] -= 1
                out[tuple(e2)] = coef
        return Form.from_terms(p, self.n_vars, self.degree - 1, out)

    def partials(self) -> list:
        return [self.partial(v) for v in range(self.n_vars)]

    def eval_at(self, point: "ProjPoint") -> int:
        """Value at the normalized representative, as a field element index."""
        if len(point.coords) != self.n_vars:
            raise ValueError("point dimension does not match the form")
        f = point.field
        pows = []
        for c in point.coords:
            row = [1]
            for _ in range(self.degree):
                row.append(f.mul(row[-1], c))
            pows.append(row)
        acc = 0
        for e, coef in zip(self.exponents(), self.coeffs):
            if not coef:
                continue
            term = coef  # prime-subfield elements keep their index in extensions
            for v, ev in enumerate(e):
                if ev:
                    term = f.mul(term, pows[v][ev])
            acc = f.add(acc, term)
        return acc

    def dehomogenize(self, chart_index: int) -> BiPoly:
        """Set the chart variable to 1; bivariate in the remaining variables.

        Only defined for forms on P^2 (three variables); the remaining
        variables keep their index order.
        """
        if self.n_vars != 3:
            raise ValueError("dehomogenize applies to forms in three variables")
        if not 0 <= chart_index <= 2:
            raise ValueError(f"chart index {chart_index} out of range")
        others = [v for v in range(3) if v != chart_index]
        field = Field(self.p)
        terms = {}
        for e, c in zip(self.exponents(), self.coeffs):
            if not c:
                continue
            key = (e[others[0]], e[others[1]])
            terms[key] = (terms.get(key, 0) + c) % self.p
        return BiPoly.from_terms(field, {k: v for k, v in terms.items() if v})

    def substitute_linear(self, matrix) -> "Form":
        """F(M x): each x_i is replaced by the linear form sum_j M[i][j] x_j."""
        p = self.p
        nv = self.n_vars
        linear = []
        for i in range(nv):
            linear.append({tuple(1 if t == j else 0 for t in range(nv)):
                           matrix[i][j] % p
                           for j in range(nv) if matrix[i][j] % p})
        out = {}
        for e, c in zip(self.exponents(), self.coeffs):
            if not c:
                continue
            term = {tuple([0] * nv): c}
            for v, ev in enumerate(e):
                for _ in range(ev):
                    term = _dict_poly_mul(term, linear[v], p)
            for k, v in term.items():
                out[k] = (out.get(k, 0) + v) % p
        return Form.from_terms(p, nv, self.degree,
                               {k: v for k, v in out.items() if v})

    def segre_restrict(self) -> "BiForm":
        """Pull back along the Segre embedding of P^1 x P^1 into P^3."""
        if self.n_vars != 4:
            raise ValueError("segre_restrict applies to forms on P^3")
        p, d = self.p, self.degree
        grid = [[0] * (d + 1) for _ in range(d + 1)]
        for e, c in zip(self.exponents(), self.coeffs):
            if not c:
                continue
            a, b, cc, ee = e
            i = cc + ee   # u1 exponent
            j = b + ee    # v1 exponent
            grid[i][j] = (grid[i][j] + c) % p
        return BiForm(p, d, grid)


def _dict_poly_mul(a: dict, b: dict, p: int) -> dict:
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            key = tuple(x + y for x, y in zip(ea, eb))
            v = (out.get(key, 0) + ca * cb) % p
            out[key] = v
    return {k: v for k, v in out.items() if v}


class BiForm:
    """Bihomogeneous form of bidegree (d, d) on P^1 x P^1 over F_p."""

    __slots__ = ("p", "degree", "grid")

    def __init__(self, p: int, degree: int, grid):
        grid = tuple(tuple(c % p for c in row) for row in grid)
        if len(grid) != degree + 1 or any(len(r) != degree + 1 for r in grid):
            raise ValueError(f"grid must be {degree + 1} x {degree + 1}")
        self.p = p
        self.degree = degree
        self.grid = grid

    @classmethod
    def zero(cls, p, degree):
        return cls(p, degree, [[0] * (degree + 1) for _ in range(degree + 1)])

    def is_zero(self) -> bool:
        return not any(any(row) for row in self.grid)

    def __eq__(self, other):
        return (isinstance(other, BiForm) and self.p == other.p
                and self.degree == other.degree and self.grid == other.grid)

    def __hash__(self):
        return hash((self.p, self.degree, self.grid))

    def __repr__(self):
        return f"BiForm(p={self.p}, d={self.degree}, {self.text()!r})"

    def __add__(self, other):
        if self.p != other.p or self.degree != other.degree:
            raise ValueError("bidegree or field mismatch")
        return BiForm(self.p, self.degree,
                      [[a + b for a, b in zip(r1, r2)]
                       for r1, r2 in zip(self.grid, other.grid)])

    def text(self) -> str:
        d = self.degree
        parts = []
        for i in range(d + 1):
            for j in range(d + 1):
                c = self.grid[i][j]
                if not c:
                    continue
                factors = []
                if c != 1:
                    factors.append(str(c))
                for name, ev in (("u0", d - i), ("u1", i), ("v0", d - j), ("v1", j)):
                    if ev == 1:
                        factors.append(name)
                    elif ev > 1:
                        factors.append(f"{name}^{ev}")
                parts.append("*".join(factors) if factors else str(c))
        return " + ".join(parts) if parts else "0"

    def eval_at(self, u: "ProjPoint", v: "ProjPoint") -> int:
        """Value at ((u0:u1), (v0:v1)) over a common field."""
        if u.field != v.field:
            raise ValueError("the two point factors live in different fields")
        f = u.field
        d = self.degree
        u0, u1 = u.coords
        v0, v1 = v.coords
        def pows(c):
            row = [1]
            for _ in range(d):
                row.append(f.mul(row[-1], c))
            return row
        pu0, pu1, pv0, pv1 = pows(u0), pows(u1), pows(v0), pows(v1)
        acc = 0
        for i in range(d + 1):
            for j in range(d + 1):
                c = self.grid[i][j]
                if not c:
                    continue
                term = f.mul(c, f.mul(pu0[d - i], pu1[i]))
                term = f.mul(term, f.mul(pv0[d - j], pv1[j]))
                acc = f.add(acc, term)
        return acc


class ProjPoint:
    """Point of P^n(F_q), normalized so the first nonzero coordinate is 1."""

    __slots__ = ("field", "coords")

    def __init__(self, field: Field, coords):
        coords = tuple(coords)
        if not any(coords):
            raise ValueError("projective points need a nonzero coordinate")
        pivot = next(c for c in coords if c)
        if pivot != 1:
            inv = field.inv(pivot)
            coords = tuple(field.mul(c, inv) for c in coords)
        self.field = field
        self.coords = coords

    def __eq__(self, other):
        return (isinstance(other, ProjPoint) and self.field == other.field
                and self.coords == other.coords)

    def __hash__(self):
        return hash((self.field, self.coords))

    def __repr__(self):
        return f"ProjPoint({':'.join(str(c) for c in self.coords)})"


def enumerate_projective_points(n: int, field: Field, cap: int = ENUMERATION_CAP):
    """All points of P^n(F_q): one affine cell per position of the leading 1."""
    count = (field.q ** (n + 1) - 1) // (field.q - 1)
    if count > cap:
        raise ResourceCapError(
            f"P^{n}(F_{field.q}) has {count} points, above the cap {cap}")
    points = []
    for lead in range(n + 1):
        tail = n - lead
        for idx in range(field.q ** tail):
            coords = [0] * lead + [1]
            rest = idx
            for _ in range(tail):
                coords.append(rest % field.q)
                rest //= field.q
            points.append(ProjPoint(field, coords))
    return points


def enumerate_forms(p: int, n: int, d: int, cap: int = ENUMERATION_CAP):
    """All of S(d) in coefficient-vector lexicographic order (zero first)."""
    total = space_size(p, n, d)
    if total > cap:
        raise ResourceCapError(
            f"S(d) has {total} forms, above the cap {cap}; use sample mode")
    n_coeffs = comb(d + n, n)
    for index in range(total):
        yield form_from_index(p, n, d, index)


def form_from_index(p: int, n: int, d: int, index: int) -> Form:
    """The index-th form in the lex enumeration (first coefficient is the
    most significant base-p digit)."""
    n_coeffs = comb(d + n, n)
    digits = []
    for _ in range(n_coeffs):
        digits.append(index % p)
        index //= p
    return Form(p, n + 1, d, tuple(reversed(digits)))


def sample_form(p: int, n: int, d: int, rng) -> Form:
    """Uniform draw from S(d): every coefficient independently uniform."""
    n_coeffs = comb(d + n, n)
    return Form(p, n + 1, d, tuple(rng.randrange(p) for _ in range(n_coeffs)))


def enumerate_biforms(p: int, d: int, cap: int = ENUMERATION_CAP):
    """All bidegree-(d, d) BiForms in grid-lex order (zero first)."""
    n_coeffs = (d + 1) ** 2
    total = p ** n_coeffs
    if total > cap:
        raise ResourceCapError(
            f"section space has {total} elements, above the cap {cap}")
    for index in range(total):
        yield biform_from_index(p, d, index)


def biform_from_index(p: int, d: int, index: int) -> BiForm:
    n_coeffs = (d + 1) ** 2
    digits = []
    for _ in range(n_coeffs):
        digits.append(index % p)
        index //= p
    digits.reverse()
    grid = [digits[i * (d + 1):(i + 1) * (d + 1)] for i in range(d + 1)]
    return BiForm(p, d, grid)


def sample_biform(p: int, d: int, rng) -> BiForm:
    """Uniform draw from the bidegree-(d, d) section space."""
    return BiForm(p, d, [[rng.randrange(p) for _ in range(d + 1)]
                         for _ in range(d + 1)])


def surface_points(surface: SurfaceModel, k: int = 1):
    """The rational points of the surface over F_{p^k}.

    For the plane these are ProjPoints; for the Segre quadric, pairs of
    ProjPoints on the two rulings.
    """
    field = Field(surface.p, k) if k > 1 else Field(surface.p)
    if surface.kind == P2:
        return enumerate_projective_points(2, field)
    line = enumerate_projective_points(1, field)
    return [(u, v) for u in line for v in line]
