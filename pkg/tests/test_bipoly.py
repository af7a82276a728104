import random

import pytest
from sympy import Matrix, Poly, prem as sympy_prem, symbols

from curvestats.bipoly import (BiPoly, bipoly_exact_div, bipoly_gcd, prem,
                               resultant_y, system_gcd)
from curvestats.field import Field
from curvestats.unipoly import UniPoly

X, Y = symbols("x y")

F2 = Field(2)
F3 = Field(3)


def to_expr(b):
    return sum(int(c) * X ** i * Y ** j for (i, j), c in b.terms().items())


def sylvester_det_mod(a, b, p):
    """Reference resultant straight from the Sylvester determinant."""
    pa, pb = Poly(to_expr(a), Y), Poly(to_expr(b), Y)
    m, n = pa.degree(), pb.degree()
    ca, cb = pa.all_coeffs(), pb.all_coeffs()
    rows = [[0] * i + ca + [0] * (n - 1 - i) for i in range(n)]
    rows += [[0] * i + cb + [0] * (m - 1 - i) for i in range(m)]
    det = Matrix(rows).det()
    if det == 0:
        return ()
    coeffs = [int(c) % p for c in reversed(Poly(det, X).all_coeffs())]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def rand_bipoly(F, degx, degy, rng, density=0.7):
    terms = {}
    for i in range(degx + 1):
        for j in range(degy + 1):
            if rng.random() < density:
                c = F.random_element(rng)
                if c:
                    terms[(i, j)] = c
    return BiPoly.from_terms(F, terms)


def test_resultant_examples():
    a = BiPoly.from_terms(F2, {(0, 2): 1, (1, 1): 1, (0, 0): 1})
    b = BiPoly.from_terms(F2, {(0, 1): 1, (1, 0): 1})
    assert resultant_y(a, b).coeffs == (1,)
    same = BiPoly.from_terms(F3, {(0, 1): 1, (0, 0): 2})
    assert resultant_y(same, same).is_zero()
    a = BiPoly.from_terms(F3, {(0, 2): 1, (1, 0): 2})
    b = BiPoly.from_terms(F3, {(0, 1): 1, (0, 0): 2})
    assert resultant_y(a, b).coeffs == (1, 2)   # 1 - x


def test_resultant_rejects_y_constants():
    a = BiPoly.from_terms(F2, {(1, 0): 1})
    b = BiPoly.from_terms(F2, {(0, 1): 1})
    with pytest.raises(ValueError):
        resultant_y(a, b)
    with pytest.raises(ValueError):
        resultant_y(b, a)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_resultant_matches_sylvester_determinant(p):
    F = Field(p)
    rng = random.Random(40 + p)
    checked = 0
    while checked < 60:
        a = rand_bipoly(F, rng.randrange(4), rng.randrange(1, 4), rng)
        b = rand_bipoly(F, rng.randrange(4), rng.randrange(1, 4), rng)
        if a.degy < 1 or b.degy < 1:
            continue
        assert resultant_y(a, b).coeffs == sylvester_det_mod(a, b, p)
        checked += 1


@pytest.mark.parametrize("p", [2, 3])
def test_resultant_zero_iff_common_y_factor(p):
    F = Field(p)
    rng = random.Random(70 + p)
    planted = coprime = 0
    while planted < 25 or coprime < 25:
        a = rand_bipoly(F, 2, 2, rng)
        b = rand_bipoly(F, 2, 2, rng)
        if a.degy < 1 or b.degy < 1:
            continue
        g = bipoly_gcd(a, b)
        res = resultant_y(a, b)
        if g.degy >= 1:
            assert res.is_zero()
            planted += 1
        else:
            assert not res.is_zero()
            coprime += 1
        # plant a factor to hit the zero branch for sure
        h = rand_bipoly(F, 1, 1, rng)
        if h.degy >= 1:
            ah, bh = a * h, b * h
            if ah.degy >= 1 and bh.degy >= 1:
                assert resultant_y(ah, bh).is_zero()
                planted += 1


def test_prem_matches_sympy():
    rng = random.Random(13)
    for p in (3, 5):
        checked = 0
        F = Field(p)
        while checked < 25:
            a = rand_bipoly(F, 3, 4, rng)
            b = rand_bipoly(F, 3, 3, rng)
            if a.degy < b.degy or b.degy < 1:
                continue
            mine = prem(a, b)
            theirs = sympy_prem(Poly(to_expr(a), Y, modulus=p),
                                Poly(to_expr(b), Y, modulus=p))
            expr = theirs.as_expr()
            terms = {}
            if expr != 0:
                pe = Poly(expr, X, Y, modulus=p)
                for mono, c in zip(pe.monoms(), pe.coeffs()):
                    terms[(mono[0], mono[1])] = int(c) % p
            assert mine.terms() == terms
            checked += 1


@pytest.mark.parametrize("p", [2, 3])
def test_gcd_of_planted_products(p):
    F = Field(p)
    rng = random.Random(80 + p)
    from curvestats.bipoly import _normalize
    checked = 0
    while checked < 30:
        h = rand_bipoly(F, 2, 2, rng)
        u = rand_bipoly(F, 2, 1, rng)
        v = rand_bipoly(F, 1, 2, rng)
        if h.is_zero() or u.is_zero() or v.is_zero():
            continue
        g = bipoly_gcd(h * u, h * v)
        # the planted factor divides the gcd
        assert bipoly_gcd(g, _normalize(h)) == _normalize(h)
        checked += 1


def test_exact_div_roundtrip():
    rng = random.Random(17)
    for p in (2, 3):
        F = Field(p)
        for _ in range(40):
            a = rand_bipoly(F, 2, 2, rng)
            h = rand_bipoly(F, 2, 2, rng)
            if a.is_zero() or h.is_zero() or h.degy < 1:
                continue
            prod = a * h
            q = bipoly_exact_div(prod, h)
            assert q == a
    with pytest.raises(ArithmeticError):
        bipoly_exact_div(BiPoly.from_terms(F2, {(0, 1): 1, (0, 0): 1}),
                         BiPoly.from_terms(F2, {(1, 1): 1}))


def test_shear_and_swap_eval_compat():
    rng = random.Random(23)
    for p in (2, 3):
        F = Field(p)
        for _ in range(30):
            g = rand_bipoly(F, 3, 3, rng)
            lam = F.random_element(rng)
            sheared = g.shear_x(lam)
            swapped = g.swap_xy()
            for a in F.elements():
                for b in F.elements():
                    assert sheared.eval(a, b) == g.eval(F.add(a, F.mul(lam, b)), b)
                    assert swapped.eval(a, b) == g.eval(b, a)


def test_content_primitive_product():
    rng = random.Random(29)
    F = Field(3)
    for _ in range(30):
        g = rand_bipoly(F, 3, 3, rng)
        if g.is_zero():
            continue
        c = g.content()
        pp = g.primitive_part()
        assert pp * c == g


def test_system_gcd_early_exit():
    a = BiPoly.from_terms(F2, {(1, 0): 1, (0, 1): 1})
    b = BiPoly.from_terms(F2, {(1, 1): 1, (0, 0): 1})
    g = system_gcd([a, b])
    assert g.is_constant() and not g.is_zero()
