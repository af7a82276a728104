import random

import pytest
import sympy
from sympy import Poly, factor_list, symbols

from curvestats.field import Field
from curvestats.unipoly import UniPoly, poly_gcd

X = symbols("x")

F2 = Field(2)
F3 = Field(3)
F4 = Field(2, 2)


def rand_poly(F, max_deg, rng):
    return UniPoly(F, tuple(F.random_element(rng)
                            for _ in range(rng.randrange(max_deg + 1) + 1)))


def test_gcd_examples():
    # x^2+1 = (x+1)^2 over F2
    assert poly_gcd(UniPoly(F2, (1, 0, 1)), UniPoly(F2, (1, 1))).coeffs == (1, 1)
    # gcd with zero is the monic normalization
    f = UniPoly(F3, (2, 1))
    assert poly_gcd(f, UniPoly.zero(F3)) == f.monic()
    assert poly_gcd(UniPoly.zero(F3), UniPoly.zero(F3)).is_zero()
    # Euclid trace over F3: gcd(x^2+1, x^2+x+2) = 1
    assert poly_gcd(UniPoly(F3, (1, 0, 1)), UniPoly(F3, (2, 1, 1))).coeffs == (1,)


def test_gcd_field_mismatch():
    with pytest.raises(ValueError):
        poly_gcd(UniPoly(F2, (1, 1)), UniPoly(F3, (1, 1)))


@pytest.mark.parametrize("p,k", [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2)])
def test_divmod_roundtrip(p, k):
    F = Field(p, k)
    rng = random.Random(p * 10 + k)
    for _ in range(80):
        a = rand_poly(F, 40, rng)
        b = rand_poly(F, 20, rng)
        if b.is_zero():
            continue
        q, r = a.divmod_(b)
        assert q * b + r == a
        assert r.degree < b.degree
        c = rand_poly(F, 8, rng)
        assert a * b == b * a
        assert (a + c) * b == a * b + c * b


def test_gcd_matches_sympy():
    rng = random.Random(3)
    for p in (2, 3, 5):
        F = Field(p)
        for _ in range(60):
            a, b = rand_poly(F, 15, rng), rand_poly(F, 15, rng)
            if a.is_zero() or b.is_zero():
                continue
            mine = a.gcd(b)
            pa = Poly(list(reversed(a.coeffs)), X, modulus=p)
            pb = Poly(list(reversed(b.coeffs)), X, modulus=p)
            theirs = pa.gcd(pb).monic()
            coeffs = tuple(int(c) % p for c in reversed(theirs.all_coeffs()))
            assert mine.coeffs == coeffs


def test_distinct_degree_examples():
    # x^4 + x = x(x+1)(x^2+x+1) over F2
    dd = UniPoly(F2, (0, 1, 0, 0, 1)).distinct_degree_factor()
    assert [(m, g.coeffs) for m, g in dd] == [(1, (0, 1, 1)), (2, (1, 1, 1))]
    # an irreducible quadratic reports itself
    dd = UniPoly(F2, (1, 1, 1)).distinct_degree_factor()
    assert [(m, g.coeffs) for m, g in dd] == [(2, (1, 1, 1))]
    # x^2 over F3: squarefree part is x
    dd = UniPoly(F3, (0, 0, 1)).distinct_degree_factor()
    assert [(m, g.coeffs) for m, g in dd] == [(1, (0, 1))]
    with pytest.raises(ValueError):
        UniPoly.zero(F2).distinct_degree_factor()


def test_split_examples():
    rng = random.Random(5)
    fs = UniPoly(F2, (0, 1, 1)).split_irreducible(1, rng)
    assert [f.coeffs for f in fs] == [(0, 1), (1, 1)]
    f = UniPoly(F3, (1, 0, 1))
    assert f.split_irreducible(2, rng) == [f]
    prod = UniPoly(F3, (1, 0, 1)) * UniPoly(F3, (2, 1, 1))
    fs = prod.split_irreducible(2, rng)
    assert sorted(f.coeffs for f in fs) == [(1, 0, 1), (2, 1, 1)]
    with pytest.raises(ValueError):
        prod.split_irreducible(3, rng)


def test_split_output_independent_of_randomness():
    prod = UniPoly(F3, (1, 0, 1)) * UniPoly(F3, (2, 1, 1))
    runs = [prod.split_irreducible(2, random.Random(seed)) for seed in range(5)]
    assert all(r == runs[0] for r in runs)


@pytest.mark.parametrize("p,k", [(2, 1), (3, 1), (2, 2)])
def test_factorization_roundtrip(p, k):
    F = Field(p, k)
    rng = random.Random(p + k)
    for _ in range(40):
        f = rand_poly(F, 14, rng)
        if f.degree < 1:
            continue
        sf = f.squarefree_part()
        dd = f.distinct_degree_factor()
        prod = UniPoly.one(F)
        for m, g in dd:
            assert g.degree % m == 0
            pieces = g.split_irreducible(m, rng)
            back = UniPoly.one(F)
            for h in pieces:
                assert h.degree == m
                assert h.is_irreducible()
                back = back * h
            assert back == g.monic()
            prod = prod * g
        assert prod.monic() == sf


def test_squarefree_part_against_sympy():
    rng = random.Random(11)
    for p in (2, 3):
        F = Field(p)
        for _ in range(50):
            f = rand_poly(F, 12, rng)
            if f.degree < 1:
                continue
            mine = f.squarefree_part()
            expr = sum(int(c) * X ** i for i, c in enumerate(f.coeffs))
            _, factors = factor_list(Poly(expr, X, modulus=p))
            rad = Poly(1, X, modulus=p)
            for base, _mult in factors:
                rad = rad * base
            coeffs = tuple(int(c) % p for c in reversed(rad.monic().all_coeffs()))
            assert mine.coeffs == coeffs, f.coeffs


def test_powmod_matches_naive():
    rng = random.Random(2)
    F = Field(5)
    for _ in range(20):
        f = rand_poly(F, 6, rng)
        mod = rand_poly(F, 5, rng)
        if mod.degree < 1:
            continue
        e = rng.randrange(1, 30)
        naive = UniPoly.one(F)
        for _ in range(e):
            naive = (naive * f).rem(mod)
        assert f.powmod(e, mod) == naive


def test_roots():
    f = UniPoly(F3, (2, 0, 1))          # x^2 - 1
    assert f.roots() == [1, 2]
    g = UniPoly(F2, (1, 1, 1))          # irreducible over F2
    assert g.roots() == []
    # but it splits over F4
    gk = g.map_coeffs(F4)
    assert len(gk.roots()) == 2


def test_eval_in_extension():
    f = UniPoly(F2, (1, 1, 0, 1))       # x^3 + x + 1
    alpha = 2                            # the class of x in F4
    val = f.eval_in(F4, alpha)
    # x^3 = 1 in F4* (order 3), so f(alpha) = 1 + alpha + 1 = alpha
    assert val == alpha


def test_packed_backend_consistency():
    """The packed F_2 backend agrees with generic arithmetic coefficients."""
    rng = random.Random(9)
    for _ in range(60):
        a = rand_poly(F2, 120, rng)
        b = rand_poly(F2, 60, rng)
        # compare against an odd-prime-style reference computed over F2
        # via integer convolution mod 2
        ca, cb = a.coeffs, b.coeffs
        if not ca or not cb:
            continue
        ref = [0] * (len(ca) + len(cb) - 1)
        for i, ai in enumerate(ca):
            for j, bj in enumerate(cb):
                ref[i + j] ^= ai & bj
        while ref and not ref[-1]:
            ref.pop()
        assert (a * b).coeffs == tuple(ref)
        if not b.is_zero():
            q, r = a.divmod_(b)
            assert q * b + r == a
