import math
import random

import pytest

from curvestats.errors import ResourceCapError
from curvestats.field import Field
from curvestats.forms import (BiForm, Form, ProjPoint, SurfaceModel,
                              biform_from_index, enumerate_biforms,
                              enumerate_forms, enumerate_projective_points,
                              form_from_index, monomial_exponents, sample_biform,
                              sample_form, space_size, surface_points, P2, SEGRE)

F2 = Field(2)
F4 = Field(2, 2)


def klein_quartic():
    return Form.from_terms(2, 3, 4, {(3, 1, 0): 1, (0, 3, 1): 1, (1, 0, 3): 1})


@pytest.mark.parametrize("p,n,d,expected", [
    (2, 2, 2, 64), (2, 2, 3, 1024), (3, 3, 2, 3 ** 10),
])
def test_space_size(p, n, d, expected):
    assert space_size(p, n, d) == expected


def test_space_size_validation():
    with pytest.raises(ValueError):
        space_size(4, 2, 2)
    with pytest.raises(ValueError):
        space_size(2, 0, 2)


def test_monomial_order_is_graded_lex():
    assert monomial_exponents(3, 2) == (
        (2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2))


def test_enumeration():
    forms = list(enumerate_forms(2, 2, 1))
    assert len(forms) == 8
    assert forms[0].is_zero()
    assert len(set(f.coeffs for f in forms)) == 8
    assert sum(1 for _ in enumerate_forms(2, 2, 3)) == 1024


def test_enumeration_cap_names_sample_mode():
    with pytest.raises(ResourceCapError, match="sample"):
        list(enumerate_forms(2, 2, 3, cap=100))


def test_sample_form_pinned_regression():
    rng = random.Random(12345)
    assert sample_form(2, 2, 3, rng).coeffs == (1, 0, 1, 1, 0, 1, 1, 0, 1, 0)
    rng = random.Random(12345)
    assert sample_form(3, 2, 2, rng).coeffs == (1, 2, 0, 1, 1, 0)


def test_sample_form_coefficientwise_uniform():
    draws = 100_000
    rng = random.Random(99)
    counts = [0] * 6
    for _ in range(draws):
        f = sample_form(2, 2, 2, rng)
        for i, c in enumerate(f.coeffs):
            counts[i] += c
    sigma = math.sqrt(draws * 0.25)
    for c in counts:
        assert abs(c - draws / 2) <= 4 * sigma


def test_sample_form_hits_all_small_forms_uniformly():
    draws = 10_000
    rng = random.Random(7)
    tally = {}
    for _ in range(draws):
        f = sample_form(2, 2, 1, rng)
        tally[f.coeffs] = tally.get(f.coeffs, 0) + 1
    assert len(tally) == 8
    sigma = math.sqrt(draws * (1 / 8) * (7 / 8))
    for count in tally.values():
        assert abs(count - draws / 8) <= 3 * sigma


@pytest.mark.parametrize("n,q,expected", [(2, 2, 7), (1, 4, 5), (3, 2, 15)])
def test_projective_point_counts(n, q, expected):
    field = Field(2, int(math.log2(q)))
    pts = enumerate_projective_points(n, field)
    assert len(pts) == expected
    assert len(set(pts)) == expected
    assert len(pts) == (field.q ** (n + 1) - 1) // (field.q - 1)


def test_projective_point_normalization():
    # two representatives of the same point collapse to one normal form
    a = ProjPoint(F4, (2, 3, 1))
    b = ProjPoint(F4, tuple(F4.mul(2, c) for c in (2, 3, 1)))
    assert a == b
    assert a.coords[0] == 1
    with pytest.raises(ValueError):
        ProjPoint(F2, (0, 0, 0))


def test_eval_form_examples():
    K = klein_quartic()
    assert K.eval_at(ProjPoint(F2, (1, 0, 0))) == 0
    f = Form.from_terms(2, 3, 2, {(2, 0, 0): 1, (0, 1, 1): 1})
    assert f.eval_at(ProjPoint(F2, (1, 1, 1))) == 0
    with pytest.raises(ValueError):
        f.eval_at(ProjPoint(F2, (1, 0, 0, 0)))


def test_partials_examples():
    assert Form.from_terms(2, 3, 2, {(2, 0, 0): 1}).partial(0).is_zero()
    K = klein_quartic()
    assert K.partial(0) == Form.from_terms(2, 3, 3, {(2, 1, 0): 1, (0, 0, 3): 1})
    no_y = Form.from_terms(2, 3, 2, {(2, 0, 0): 1, (1, 0, 1): 1})
    assert no_y.partial(1).is_zero()


@pytest.mark.parametrize("p,d", [(2, 2), (2, 4), (3, 3), (3, 6), (5, 5)])
def test_euler_relation(p, d):
    rng = random.Random(p * d)
    for _ in range(15):
        f = sample_form(p, 2, d, rng)
        acc = {}
        for v, g in enumerate(f.partials()):
            for e, c in zip(g.exponents(), g.coeffs):
                if not c:
                    continue
                e2 = list(e)
                e2[v] += 1
                acc[tuple(e2)] = (acc.get(tuple(e2), 0) + c) % p
        lhs = Form.from_terms(p, 3, d, {k: v for k, v in acc.items() if v})
        rhs = Form(p, 3, d, tuple(c * d % p for c in f.coeffs))
        assert lhs == rhs


def test_dehomogenize_examples():
    f = Form.from_terms(2, 3, 2, {(2, 0, 0): 1, (0, 1, 1): 1})
    assert f.dehomogenize(2).terms() == {(2, 0): 1, (0, 1): 1}
    xyz = Form.from_terms(2, 3, 3, {(1, 1, 1): 1})
    assert xyz.dehomogenize(0).terms() == {(1, 1): 1}


def test_dehomogenize_rehomogenize_roundtrip():
    rng = random.Random(31)
    for p in (2, 3):
        for _ in range(20):
            d = rng.randrange(1, 5)
            f = sample_form(p, 2, d, rng)
            for chart in range(3):
                others = [v for v in range(3) if v != chart]
                bp = f.dehomogenize(chart)
                terms = {}
                for (i, j), c in bp.terms().items():
                    e = [0, 0, 0]
                    e[others[0]], e[others[1]] = i, j
                    e[chart] = d - i - j
                    terms[tuple(e)] = c
                assert Form.from_terms(p, 3, d, terms) == f


def test_segre_restरict_examples():
    f = Form.from_terms(2, 4, 1, {(1, 0, 0, 0): 1})
    assert f.segre_restrict().grid[0][0] == 1
    q = Form.from_terms(2, 4, 2, {(1, 0, 0, 1): 1, (0, 1, 1, 0): 1})
    assert q.segre_restrict().is_zero()
    sq = Form.from_terms(2, 4, 2, {(2, 0, 0, 0): 1})
    b = sq.segre_restrict()
    assert b.grid[0][0] == 1 and sum(map(sum, b.grid)) == 1


def test_segre_restrict_linear():
    rng = random.Random(37)
    for _ in range(30):
        d = rng.randrange(1, 4)
        f, g = sample_form(2, 3, d, rng), sample_form(2, 3, d, rng)
        fg = Form(2, 4, d, tuple((a + b) % 2 for a, b in zip(f.coeffs, g.coeffs)))
        assert fg.segre_restrict() == f.segre_restrict() + g.segre_restrict()


@pytest.mark.parametrize("k", [1, 2])
def test_segre_restrict_eval_compatible(k):
    Fk = Field(2, k)
    rng = random.Random(41)
    line = enumerate_projective_points(1, Fk)
    for _ in range(10):
        d = rng.randrange(1, 4)
        f = sample_form(2, 3, d, rng)
        b = f.segre_restrict()
        for u in line:
            for v in line:
                image = ProjPoint(Fk, (
                    Fk.mul(u.coords[0], v.coords[0]),
                    Fk.mul(u.coords[0], v.coords[1]),
                    Fk.mul(u.coords[1], v.coords[0]),
                    Fk.mul(u.coords[1], v.coords[1])))
                assert b.eval_at(u, v) == f.eval_at(image)


def test_form_text_encoding():
    K = klein_quartic()
    assert K.text() == "x0^3*x1 + x0*x2^3 + x1^3*x2"
    assert Form.zero(2, 3, 2).text() == "0"
    f = Form.from_terms(3, 3, 2, {(2, 0, 0): 2, (0, 1, 1): 1})
    assert f.text() == "2*x0^2 + x1*x2"


def test_sample_and_enumerate_biforms():
    assert sum(1 for _ in enumerate_biforms(2, 1)) == 16
    rng = random.Random(5)
    b = sample_biform(2, 3, rng)
    assert len(b.grid) == 4
    first = next(iter(enumerate_biforms(2, 2)))
    assert first.is_zero()


def test_surface_points():
    assert len(surface_points(SurfaceModel(P2, 2))) == 7
    assert len(surface_points(SurfaceModel(SEGRE, 2))) == 9
    assert len(surface_points(SurfaceModel(P2, 3))) == 13
    assert len(surface_points(SurfaceModel(SEGRE, 2), k=2)) == 25


def test_index_roundtrip():
    for idx in (0, 1, 100, 1023):
        f = form_from_index(2, 2, 3, idx)
        assert isinstance(f, Form)
    grid = biform_from_index(2, 2, 511)
    assert isinstance(grid, BiForm)
