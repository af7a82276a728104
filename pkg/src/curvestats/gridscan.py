"""Vectorized search for common zeros of bivariate systems on affine grids.

Scans all of F_{p^m} x F_{p^m} for points where every polynomial of a chart
system vanishes.  Elements are carried as indices; for p = 2 the index is
the coefficient bit-vector, so field addition is XOR and a polynomial value
over the whole grid is an XOR-reduction of precomputed monomial rows.  For
odd p the grid lives as digit vectors and evaluation is one integer matrix
product reduced mod p.

Tables are cached per (p, m, degree bounds); building them costs far more
than a single scan, and experiment runs reuse them across every sampled
form.
"""

from __future__ import annotations

import functools

import numpy as np

from .errors import ResourceCapError
from .field import Field

_GRID_POINT_CAP = 1 << 21


@functools.lru_cache(maxsize=64)
def _field_mul_tables(p: int, m: int):
    """(exp, log) numpy arrays for vectorized multiplication in F_{p^m}."""
    f = Field(p, m)
    f._ensure_tables()
    exp = np.array(f._exp, dtype=np.int64)
    log = np.array(f._log, dtype=np.int64)
    return exp, log


def _vec_mul(u, v, exp, log):
    out = exp[log[u] + log[v]]
    out[(u == 0) | (v == 0)] = 0
    return out


@functools.lru_cache(maxsize=64)
def _grid_tables(p: int, m: int, dx: int, dy: int):
    """Monomial-value rows over the affine grid F_{p^m} x F_{p^m}.

    Returns (idx_rows, digit_rows, grid_side):
      idx_rows   -- ((dx+1)(dy+1), q^2) uint16 element indices (p = 2 only)
      digit_rows -- ((dx+1)(dy+1), q^2 * m) uint8 digit vectors (odd p only)
    """
    q = p ** m
    if q * q > _GRID_POINT_CAP:
        raise ResourceCapError(
            f"grid F_{p}^{m} x F_{p}^{m} has {q * q} points, above the cap")
    exp, log = _field_mul_tables(p, m)
    a = np.repeat(np.arange(q, dtype=np.int64), q)
    b = np.tile(np.arange(q, dtype=np.int64), q)
    xpow = [np.ones(q * q, dtype=np.int64)]
    for _ in range(dx):
        xpow.append(_vec_mul(xpow[-1], a, exp, log))
    ypow = [np.ones(q * q, dtype=np.int64)]
    for _ in range(dy):
        ypow.append(_vec_mul(ypow[-1], b, exp, log))
    rows = []
    for i in range(dx + 1):
        for j in range(dy + 1):
            rows.append(_vec_mul(xpow[i], ypow[j], exp, log))
    stacked = np.array(rows, dtype=np.int64)
    if p == 2:
        return stacked.astype(np.uint16), None, q
    # digit-vector form: (rows, grid*m)
    field = Field(p, m)
    idx2dig = np.zeros((q, m), dtype=np.uint8)
    for e in range(q):
        idx2dig[e] = field.coeffs_of(e)
    digits = idx2dig[stacked].reshape(len(rows), q * q * m)
    return None, digits, q


def _system_matrix(system, dx, dy):
    """Coefficient matrix (n_polys, (dx+1)(dy+1)) aligned with table rows."""
    mat = np.zeros((len(system), (dx + 1) * (dy + 1)), dtype=np.int64)
    for r, g in enumerate(system):
        for (i, j), c in g.terms().items():
            mat[r, i * (dy + 1) + j] = c
    return mat


def scan_common_zero(system, p: int, m: int):
    """First grid point of F_{p^m}^2 where every system member vanishes.

    Returns (x_index, y_index) or None.  Zero polynomials are ignored; an
    all-zero system vanishes everywhere, so (0, 0) comes back.
    """
    polys = [g for g in system if not g.is_zero()]
    if not polys:
        return (0, 0)
    dx = max(g.degx for g in polys)
    dy = max(g.degy for g in polys)
    idx_rows, digit_rows, q = _grid_tables(p, m, dx, dy)
    if p == 2:
        alive = None
        for g in polys:
            sel = [i * (dy + 1) + j for (i, j) in g.terms()]
            vals = np.bitwise_xor.reduce(idx_rows[sel], axis=0)
            zero = vals == 0
            alive = zero if alive is None else (alive & zero)
            if not alive.any():
                return None
        flat = int(np.flatnonzero(alive)[0])
        return flat // q, flat % q
    mat = _system_matrix(polys, dx, dy)
    vals = (mat @ digit_rows) % p           # (n_polys, grid*m)
    nz = vals.reshape(len(polys), q * q, m).any(axis=2)
    alive = ~nz.any(axis=0)
    hits = np.flatnonzero(alive)
    if hits.size == 0:
        return None
    flat = int(hits[0])
    return flat // q, flat % q


def scan_cost(p: int, m_max: int) -> int:
    """Total grid points visited by scanning m = 1..m_max."""
    return sum(p ** (2 * m) for m in range(1, m_max + 1))
