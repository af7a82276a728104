"""Closed-form predicted quantities, all in exact rational arithmetic.

Everything here is a consequence of two inputs: the rational point counts
of the surface over extension fields, and the per-point success
probability r = (p+1)/(p^2+p+1).  From the point counts a Moebius
inversion yields the closed-point census; the census drives truncated
Euler products converging to the exact zeta values, whose reciprocal at
s = 3 is the predicted smooth fraction.  The binomial law with parameters
(t, r), t the number of rational points, is the predicted conditional
point-count distribution, and the sieve cardinalities reproduce it as a
ratio of integer counts.

Floats appear only in report serialization; every predicate here is an
exact Fraction identity.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .field import is_prime
from .forms import P2, SEGRE, SurfaceModel

# truncated Euler products are exact rationals with tens of thousands of
# digits; lift the interpreter's int-to-str guard so they serialize
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(max(sys.get_int_max_str_digits(), 1_000_000))


def frac_str(x: Fraction) -> str:
    """Lossless 'num/den' rendering ('3' when the denominator is 1)."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def frac_json(x: Fraction) -> dict:
    return {"exact": frac_str(x), "float": float(x)}


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError("mobius is defined on positive integers")
    result = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            result = -result
        d += 1
    if n > 1:
        result = -result
    return result


def surface_point_count(surface: SurfaceModel, k: int) -> int:
    """|X(F_{p^k})|: p^2k + p^k + 1 for the plane, (p^k + 1)^2 for the quadric."""
    if k < 1:
        raise ValueError("extension degree must be >= 1")
    q = surface.p ** k
    if surface.kind == P2:
        return q * q + q + 1
    return (q + 1) ** 2


@dataclass(frozen=True)
class ClosedPointCensus:
    """Counts a_m of closed points of degree m, for 1 <= m <= horizon."""

    label: str
    p: int
    counts: tuple          # counts[m-1] = a_m
    point_counts: tuple    # point_counts[k-1] = |X(F_{p^k})|

    @property
    def horizon(self) -> int:
        return len(self.counts)

    def a(self, m: int) -> int:
        return self.counts[m - 1]

    def mobius_identity_holds(self) -> bool:
        """sum_{m | k} m * a_m == |X(F_{p^k})| for every k up to the horizon."""
        for k in range(1, self.horizon + 1):
            total = sum(m * self.counts[m - 1]
                        for m in range(1, k + 1) if k % m == 0)
            if total != self.point_counts[k - 1]:
                return False
        return True


def census_from_counts(label: str, p: int, point_counts, horizon: int) -> ClosedPointCensus:
    """Moebius inversion of |X(F_{p^k})| into closed-point counts."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    counts = []
    for m in range(1, horizon + 1):
        total = sum(mobius(m // e) * point_counts[e - 1]
                    for e in range(1, m + 1) if m % e == 0)
        if total % m:
            raise ArithmeticError(f"census inversion produced a non-integer a_{m}")
        a_m = total // m
        if a_m < 0:
            raise ArithmeticError(f"census inversion produced a negative a_{m}")
        counts.append(a_m)
    return ClosedPointCensus(label, p, tuple(counts), tuple(point_counts[:horizon]))


def closed_point_census(surface: SurfaceModel, horizon: int) -> ClosedPointCensus:
    pc = [surface_point_count(surface, k) for k in range(1, horizon + 1)]
    return census_from_counts(surface.kind, surface.p, pc, horizon)


def zeta_exact(surface: SurfaceModel, s: int) -> Fraction:
    """zeta_X(s) from the closed product formulas of the two surfaces."""
    if s < 3:
        raise ValueError("the surface zeta product only converges for s >= 3")
    p = surface.p
    f0 = 1 - Fraction(1, p ** s)
    f1 = 1 - Fraction(1, p ** (s - 1))
    f2 = 1 - Fraction(1, p ** (s - 2))
    if surface.kind == P2:
        return 1 / (f0 * f1 * f2)
    return 1 / (f0 * f1 * f1 * f2)


def smooth_probability(surface: SurfaceModel) -> Fraction:
    """Predicted density of forms cutting out a smooth curve: 1/zeta_X(3)."""
    return 1 / zeta_exact(surface, 3)


def zeta_truncated_table(surface: SurfaceModel, s: int, horizon: int,
                         minus_rational_points: bool = False) -> list:
    """Partial Euler products over closed points of degree <= r, r = 1..horizon.

    With minus_rational_points the product is over the open complement of
    the F_p-points (the degree-1 count drops by |X(F_p)|).
    """
    census = closed_point_census(surface, horizon)
    p = surface.p
    table = []
    acc = Fraction(1)
    for m in range(1, horizon + 1):
        a_m = census.a(m)
        if m == 1 and minus_rational_points:
            a_m -= surface_point_count(surface, 1)
        if a_m < 0:
            raise ArithmeticError("open complement census went negative")
        base = Fraction(p ** (s * m), p ** (s * m) - 1)
        acc *= base ** a_m
        table.append(acc)
    return table


def zeta_truncated(surface: SurfaceModel, s: int, horizon: int,
                   minus_rational_points: bool = False) -> Fraction:
    return zeta_truncated_table(surface, s, horizon, minus_rational_points)[-1]


def zeta_factorization_check(surface: SurfaceModel, s: int, horizon: int) -> bool:
    """Check zeta_X-partial == zeta_U-partial * (1 - p^-s)^-t at every horizon."""
    t = surface_point_count(surface, 1)
    lhs = zeta_truncated_table(surface, s, horizon)
    rhs = zeta_truncated_table(surface, s, horizon, minus_rational_points=True)
    degree_one = (1 - Fraction(1, surface.p ** s)) ** (-t)
    return all(l == r * degree_one for l, r in zip(lhs, rhs))


def success_probability(p: int) -> Fraction:
    """Per-point vanishing probability conditioned on smoothness."""
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    return Fraction(p + 1, p * p + p + 1)


def predicted_pmf(t: int, s: int, p: int) -> Fraction:
    """Binomial mass C(t, s) r^s (1-r)^(t-s) at the exact r for p."""
    if not 0 <= s <= t:
        raise ValueError(f"s = {s} outside 0..{t}")
    r = success_probability(p)
    return comb(t, s) * r ** s * (1 - r) ** (t - s)


def sieve_cardinalities(t: int, s: int, p: int):
    """(|T| summed over the size-s point sets, |H^0| = p^3t) as exact integers."""
    if not 0 <= s <= t:
        raise ValueError(f"s = {s} outside 0..{t}")
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    t_count = comb(t, s) * (p * p - 1) ** s * (p ** 3 - p * p) ** (t - s)
    return t_count, p ** (3 * t)


def predicted_mean_variance(surface: SurfaceModel):
    """(t*r, t*r*(1-r)) for t = |X(F_p)|."""
    t = surface_point_count(surface, 1)
    r = success_probability(surface.p)
    return t * r, t * r * (1 - r)


def ihara_lower_bound(p: int, l: int) -> Fraction:
    """(p-1)(l+1)/12, a lower bound for a modular curve's F_{p^2}-points."""
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    if not is_prime(l):
        raise ValueError(f"l = {l} is not prime")
    if l <= p:
        raise ValueError(f"need l > p, got l = {l}, p = {p}")
    return Fraction((p - 1) * (l + 1), 12)


def predictor_report(surface: SurfaceModel) -> dict:
    """The exact prediction block serialized for JSON output."""
    t = surface_point_count(surface, 1)
    r = success_probability(surface.p)
    mean, variance = predicted_mean_variance(surface)
    return {
        "p": surface.p,
        "surface": surface.kind,
        "t": t,
        "r": frac_json(r),
        "mean": frac_json(mean),
        "variance": frac_json(variance),
        "smooth_probability": frac_json(smooth_probability(surface)),
        "pmf": {str(s): frac_json(predicted_pmf(t, s, surface.p))
                for s in range(t + 1)},
    }
