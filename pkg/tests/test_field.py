import random

import pytest
import sympy
from sympy import GF, Poly, symbols

from curvestats.field import Field, FieldElement, is_prime
from curvestats.unipoly import UniPoly, find_irreducible

X = symbols("x")


def test_is_prime_smalls():
    primes = {2, 3, 5, 7, 11, 13, 61}
    for n in range(2, 70):
        assert is_prime(n) == (all(n % d for d in range(2, n)) and n > 1)


@pytest.mark.parametrize("p,k,expected", [
    (2, 1, (0, 1)),
    (2, 2, (1, 1, 1)),
    (3, 2, (1, 0, 1)),
])
def test_find_irreducible_examples(p, k, expected):
    assert find_irreducible(p, k).coeffs == expected


def test_find_irreducible_deterministic():
    a = find_irreducible(3, 4)
    b = find_irreducible(3, 4)
    assert a.coeffs == b.coeffs


@pytest.mark.parametrize("p,k", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)])
def test_find_irreducible_is_irreducible_and_minimal(p, k):
    found = find_irreducible(p, k).coeffs

    def to_sympy(coeffs):
        return Poly(sum(int(c) * X ** i for i, c in enumerate(coeffs)),
                    X, modulus=p)

    assert to_sympy(found).is_irreducible
    # every lexicographically smaller monic candidate must be reducible
    import itertools
    for tail in itertools.product(range(p), repeat=k):
        cand = tuple(tail) + (1,)
        if cand == found:
            break
        assert not to_sympy(cand).is_irreducible, cand


def test_find_irreducible_rejects_bad_input():
    with pytest.raises(ValueError):
        find_irreducible(4, 2)
    with pytest.raises(ValueError):
        find_irreducible(2, 0)


def test_f4_multiplication():
    F4 = Field(2, 2)
    x = FieldElement.from_coeffs(F4, (0, 1))
    x_plus_1 = FieldElement.from_coeffs(F4, (1, 1))
    assert (x * x_plus_1).idx == 1


def test_additive_identity_and_f3_inverse():
    F9 = Field(3, 2)
    rng = random.Random(0)
    for _ in range(20):
        a = FieldElement(F9, F9.random_element(rng))
        zero = FieldElement(F9, 0)
        assert a + zero == a
    assert Field(3).inv(2) == 2


@pytest.mark.parametrize("p,k", [(2, 1), (2, 3), (2, 6), (3, 1), (3, 2),
                                 (3, 4), (5, 1), (5, 2), (5, 3)])
def test_field_axioms_random(p, k):
    F = Field(p, k)
    rng = random.Random(p * 100 + k)
    for _ in range(80):
        a, b, c = (F.random_element(rng) for _ in range(3))
        assert F.add(a, F.add(b, c)) == F.add(F.add(a, b), c)
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c)
        assert F.mul(a, b) == F.mul(b, a)
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1


@pytest.mark.parametrize("p,k", [(2, 4), (2, 6), (3, 3), (5, 2)])
def test_frobenius_order(p, k):
    F = Field(p, k)
    rng = random.Random(7)
    for _ in range(40):
        a = F.random_element(rng)
        t = a
        for _ in range(k):
            t = F.frobenius(t)
        assert t == a
    # the p-power map is additive
    for _ in range(40):
        a, b = F.random_element(rng), F.random_element(rng)
        assert F.frobenius(F.add(a, b)) == F.add(F.frobenius(a), F.frobenius(b))


def test_element_codec_roundtrip():
    F = Field(5, 3)
    for idx in (0, 1, 7, 124):
        assert F.index_of(F.coeffs_of(idx)) == idx
    assert len(F.coeffs_of(0)) == 3


def test_descriptor_equality_means_same_arithmetic():
    a, b = Field(3, 2), Field(3, 2)
    assert a == b and hash(a) == hash(b)
    for x in range(9):
        for y in range(9):
            assert a.mul(x, y) == b.mul(x, y)


def test_errors():
    with pytest.raises(ValueError):
        Field(6)
    with pytest.raises(ValueError):
        Field(2, 0)
    with pytest.raises(ValueError):
        Field(2, 2, modulus=(0, 0, 1))   # x^2 is reducible
    with pytest.raises(ValueError):
        Field((1 << 61) + 1)             # beyond word-size primes
    F4, F2 = Field(2, 2), Field(2)
    with pytest.raises(ValueError):
        FieldElement(F4, 2) + FieldElement(F2, 1)
    with pytest.raises(ZeroDivisionError):
        F4.inv(0)


def test_element_operators():
    F = Field(3, 2)
    rng = random.Random(1)
    for _ in range(30):
        a = FieldElement(F, F.random_element(rng))
        b = FieldElement(F, F.random_element(rng))
        assert a - b == a + (-b)
        if not b.is_zero():
            assert (a / b) * b == a
        assert a ** 5 == FieldElement(F, F.pow_(a.idx, 5))
        assert a.frobenius() == a ** 3
