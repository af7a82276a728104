"""Exact smoothness testing for curve sections of the two surfaces.

A hyperplane-section curve is singular exactly when the defining form and
all its ambient partial derivatives share a zero over the algebraic
closure.  Per affine chart this is a common-zero question for a bivariate
system, decided exactly by decide_common_zero:

  1. drop zero polynomials; an all-zero system has every point as a zero;
  2. a nonconstant system gcd is a positive-dimensional common locus;
  3. a nonzero constant member kills the system;
  4. a system univariate in one variable (gcd already known constant) has
     no common zero;
  5. otherwise eliminate: pick a pivot of minimal positive y-degree, take
     the gcd of its resultants against the other members (times the pivot's
     leading y-coefficient) as a candidate x-locus; an identically zero
     resultant triggers a shear retry (x -> x + lambda*y, lambda running
     through F_p and then F_{p^2}, in both variable orientations, at most
     2(p^2+1) attempts);
  6. factor the candidate; for each irreducible factor, pass to its root
     field and test whether the whole system has a common root in y there.

The chart systems always contain the dehomogenized form plus all ambient
partials: by the Euler relation the redundant partial vanishes whenever
the local ones do, so the system is correct in every characteristic.

Witness production is best effort; any witness returned has been
re-checked against the chart system it certifies.

A brute-force oracle (grid scanning over F_{p^m} for m up to a bound)
provides the independent cross-validation route; for the plane it is
complete once m_max reaches (d-1)^2, the Bezout bound on the degree of an
isolated singular point, provided the gcd pre-check has excluded
positive-dimensional singular loci.
"""

from __future__ import annotations

import random
import zlib
from dataclasses import dataclass
from typing import Optional

from .bipoly import (BiPoly, _normalize, bipoly_exact_div, bipoly_gcd,
                     resultant_y, system_gcd)
from .errors import EliminationDegenerateError, ResourceCapError
from .field import Field
from .forms import P2, SEGRE, BiForm, Form, SurfaceModel
from .gridscan import scan_common_zero, scan_cost
from .unipoly import UniPoly

SMOOTH = "smooth"
SINGULAR = "singular"
NOT_A_CURVE = "not_a_curve"

ZERO_FORM = "zero_form"
VANISHES_ON_SURFACE = "vanishes_on_surface"

_DEFAULT_SCAN_DEPTH = {2: 4, 3: 2}
_ORACLE_POINT_CAP = 1 << 21


@dataclass(frozen=True)
class Witness:
    """A certified singular point in chart coordinates over F_{p^m}."""

    field: Field
    x: int
    y: int

    @property
    def extension_degree(self) -> int:
        return self.field.k

    def to_json(self) -> dict:
        return {
            "extension_degree": self.field.k,
            "modulus": list(self.field.modulus),
            "coordinates": [list(self.field.coeffs_of(self.x)),
                            list(self.field.coeffs_of(self.y))],
        }


@dataclass(frozen=True)
class Verdict:
    """Classification of a surface section: smooth, singular, or no curve."""

    tag: str
    reason: Optional[str] = None
    chart: Optional[int] = None
    witness: Optional[Witness] = None

    @property
    def is_smooth(self) -> bool:
        return self.tag == SMOOTH

    @property
    def is_singular(self) -> bool:
        return self.tag == SINGULAR

    @property
    def is_curve(self) -> bool:
        return self.tag != NOT_A_CURVE

    def to_json(self) -> dict:
        out = {"tag": self.tag}
        if self.reason:
            out["reason"] = self.reason
        if self.chart is not None:
            out["chart"] = self.chart
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


@dataclass(frozen=True)
class CommonZeroResult:
    has_zero: bool
    witness: Optional[Witness] = None


# ---------------------------------------------------------------------------
# Chart systems
# ---------------------------------------------------------------------------

def chart_labels(surface: SurfaceModel):
    if surface.kind == P2:
        return ("x0=1", "x1=1", "x2=1")
    return ("u0=1,v0=1", "u0=1,v1=1", "u1=1,v0=1", "u1=1,v1=1")


def p2_chart_systems(form: Form):
    """Per chart: the form and all three partials, dehomogenized."""
    polys = [form] + form.partials()
    return [[g.dehomogenize(c) for g in polys] for c in range(3)]


def _biform_terms(b: BiForm):
    d = b.degree
    return {(i, j): c for i in range(d + 1) for j in range(d + 1)
            if (c := b.grid[i][j])}


def _bihomog_partials(b: BiForm):
    """The four partials of a bidegree-(d, d) form, as (du, dv, terms)."""
    p, d = b.p, b.degree
    base = _biform_terms(b)
    pu0, pu1, pv0, pv1 = {}, {}, {}, {}
    for (i, j), c in base.items():
        if (v := (d - i) * c % p):
            pu0[(i, j)] = v
        if (v := i * c % p):
            pu1[(i - 1, j)] = v
        if (v := (d - j) * c % p):
            pv0[(i, j)] = v
        if (v := j * c % p):
            pv1[(i, j - 1)] = v
    return [(d, d, base),
            (d - 1, d, pu0), (d - 1, d, pu1),
            (d, d - 1, pv0), (d, d - 1, pv1)]


def segre_chart_systems(b: BiForm):
    """Per bi-affine chart (u_a = 1, v_b = 1): form plus all four partials."""
    field = Field(b.p)
    polys = _bihomog_partials(b)
    systems = []
    for a in range(2):
        for bb in range(2):
            system = []
            for du, dv, terms in polys:
                chart_terms = {}
                for (i, j), c in terms.items():
                    xi = i if a == 0 else du - i
                    yj = j if bb == 0 else dv - j
                    key = (xi, yj)
                    chart_terms[key] = (chart_terms.get(key, 0) + c) % b.p
                system.append(BiPoly.from_terms(
                    field, {k: v for k, v in chart_terms.items() if v}))
            systems.append(system)
    return systems


def chart_systems(surface: SurfaceModel, section):
    if surface.kind == P2:
        return p2_chart_systems(section)
    return segre_chart_systems(section)


# ---------------------------------------------------------------------------
# Exact common-zero decision
# ---------------------------------------------------------------------------

_MAX_SPLIT_DEPTH = 64


def decide_common_zero(system, seed: int = 0) -> CommonZeroResult:
    """Decide whether the system has a common affine zero over the closure.

    Zero resultants during elimination are retried under the shear schedule
    (2(p^2+1) attempts across both variable orientations); the structural
    cases shears cannot reach -- a member that is a multiple of the pivot,
    or a genuinely shared factor -- are removed by dropping the multiple or
    by splitting the pivot along the shared factor, both of which preserve
    the common-zero set exactly.
    """
    if not system:
        raise ValueError("chart system must be nonempty")
    polys = [g for g in system if not g.is_zero()]
    base = (polys[0] if polys else system[0]).field
    if any(g.field != base for g in polys):
        raise ValueError("chart system mixes coefficient fields")
    rng = random.Random(seed)
    has_zero, witness = _decide(polys, base, rng, 0)
    if isinstance(witness, _WitnesslessHit):
        witness = None
    if witness is not None and not _witness_checks(witness, polys):
        witness = None
    return CommonZeroResult(has_zero, witness)


def _decide(polys, base, rng, depth):
    if depth > _MAX_SPLIT_DEPTH:
        raise EliminationDegenerateError("factor splitting recursed too deep")
    polys = [g for g in polys if not g.is_zero()]
    if not polys:
        return True, Witness(base, 0, 0)

    # proportional members carry identical zero sets; keep one of each
    seen = {}
    for g in polys:
        lead = g.lc_y().lc()
        key = tuple(sorted(g.mul_scalar(base.inv(lead)).terms().items()))
        seen.setdefault(key, g)
    polys = list(seen.values())

    g = system_gcd(polys)
    if g.total_degree() >= 1:
        return True, _point_on_locus(g, polys)

    if any(p_.is_constant() for p_ in polys):
        return False, None

    if all(p_.degy <= 0 for p_ in polys) or all(p_.degx <= 0 for p_ in polys):
        # univariate in a single variable with unit gcd
        return False, None

    budget = 2 * (base.p ** 2 + 1)
    attempts = 0
    degenerate_pair = None
    for swapped in (False, True):
        oriented = [g_.swap_xy() for g_ in polys] if swapped else polys
        for lam_field, lam in _shear_schedule(base):
            if attempts >= budget:
                break
            attempts += 1
            if lam_field == base:
                sheared = [g_.shear_x(lam) for g_ in oriented] if lam else oriented
            else:
                lifted = [g_.map_coeffs(lam_field) for g_ in oriented]
                sheared = [g_.shear_x(lam) for g_ in lifted]
            outcome = _eliminate(sheared, rng)
            if isinstance(outcome, _ZeroResultant):
                if not swapped and lam == 0:
                    degenerate_pair = (outcome.pivot, outcome.other)
                    # a member that is a multiple of the pivot is redundant
                    reduced = _drop_multiples(polys)
                    if len(reduced) < len(polys):
                        return _decide(reduced, base, rng, depth + 1)
                continue
            has_zero, witness = outcome
            if witness is not None:
                witness = _undo_transform(witness, lam_field, lam, swapped)
            return has_zero, witness

    # every shear frame hit a shared factor: split the pivot along it
    if degenerate_pair is None:
        # only sheared frames degenerated; recover the pair unsheared
        degenerate_pair = _find_degenerate_pair(polys)
    if degenerate_pair is None:
        raise EliminationDegenerateError(
            f"no usable elimination after {attempts} shear attempts")
    pivot, other = degenerate_pair
    shared = bipoly_gcd(pivot, other)
    if shared == _normalize(pivot):
        # the other member is a multiple of the pivot, hence redundant
        return _decide([g_ for g_ in polys if g_ is not other],
                       base, rng, depth + 1)
    rest = [g_ for g_ in polys if g_ is not pivot]
    has1, wit1 = _decide(rest + [shared], base, rng, depth + 1)
    if has1:
        return has1, wit1
    cofactor = bipoly_exact_div(pivot, shared)
    return _decide(rest + [cofactor], base, rng, depth + 1)


def _drop_multiples(polys):
    """Remove members that are exact scalar-times multiples of another."""
    keep = list(polys)
    changed = True
    while changed:
        changed = False
        for i, a in enumerate(keep):
            for j, b in enumerate(keep):
                if i == j:
                    continue
                if bipoly_gcd(a, b) == _normalize(a):
                    keep.pop(j)
                    changed = True
                    break
            if changed:
                break
    return keep


def _find_degenerate_pair(polys):
    pivot_candidates = [g for g in polys if g.degy >= 1]
    if not pivot_candidates:
        return None
    pivot = min(pivot_candidates, key=lambda g: (g.degy, g.degx))
    for g in polys:
        if g is pivot or g.degy == 0:
            continue
        if resultant_y(pivot, g).is_zero():
            return pivot, g
    return None


def _shear_schedule(base: Field):
    """lambda = 0, then the rest of F_p, then F_{p^2} minus F_p."""
    for lam in range(base.p):
        yield base, lam
    if base.k == 1:
        ext = Field(base.p, 2)
        for lam in range(base.p, ext.q):
            yield ext, lam
    else:
        for lam in range(base.p, base.q):
            yield base, lam


@dataclass
class _ZeroResultant:
    pivot: BiPoly
    other: BiPoly


def _eliminate(polys, rng):
    """One elimination pass; a _ZeroResultant signals a degenerate frame."""
    base = polys[0].field
    pivot_candidates = [g for g in polys if g.degy >= 1]
    if not pivot_candidates:
        # shearing cancelled every y-term; the frame is univariate in x
        acc = UniPoly.zero(base)
        for g in polys:
            acc = acc.gcd(g.ycoeffs[0])
            if acc.degree == 0:
                return False, None
        return True, _WITNESSLESS
    pivot = min(pivot_candidates, key=lambda g: (g.degy, g.degx))
    parts = []
    for g in polys:
        if g is pivot:
            continue
        if g.degy == 0:
            parts.append(g.ycoeffs[0])
        else:
            r = resultant_y(pivot, g)
            if r.is_zero():
                return _ZeroResultant(pivot, g)
            parts.append(r)
    candidate = UniPoly.zero(base)
    for part in parts:
        candidate = candidate.gcd(part)
        if candidate.degree == 0:
            break
    candidate = (candidate * pivot.lc_y()).monic()
    if candidate.degree == 0:
        return False, None
    factors = candidate.irreducible_factors(rng)
    factors.sort(key=lambda h: (h.degree, h.coeffs))
    for h in factors:
        hit = _check_root_field(polys, h, rng)
        if hit is not None:
            return True, hit
    return False, None


def _check_root_field(polys, h: UniPoly, rng):
    """Test the system for a common y-root above a root of irreducible h."""
    base = polys[0].field
    K, alpha, map_coeff = _root_field(base, h, rng)
    g = UniPoly.zero(K)
    evals = []
    for poly in polys:
        e = poly.eval_x(alpha, K, map_coeff)
        evals.append(e)
        g = g.gcd(e)
        if g.degree == 0 and not g.is_zero():
            return None
    if g.is_zero():
        # every member vanishes identically on the line x = alpha
        return Witness(K, alpha, 0)
    roots = g.roots(rng)
    if roots:
        return Witness(K, alpha, roots[0])
    # existence is certified but the y-coordinate lives in a further extension
    return _WITNESSLESS


class _WitnesslessHit:
    """Marker: a common zero exists but no coordinates were extracted."""


_WITNESSLESS = _WitnesslessHit()


def _root_field(base: Field, h: UniPoly, rng):
    """Field containing a root of irreducible h, the root, a coeff map."""
    m = h.degree
    if base.k == 1:
        if m == 1:
            alpha = base.neg(h.constant_coeff())
            return base, alpha, None
        K = Field(base.p, m, modulus=h.monic().coeffs, _trusted=True)
        return K, base.p, None  # the class of x is a root of h
    K = Field(base.p, base.k * m)
    beta = UniPoly(K, base.modulus).roots(rng)[0]
    pows = [1]
    for _ in range(base.k - 1):
        pows.append(K.mul(pows[-1], beta))

    def map_coeff(c, _pows=pows, _base=base, _K=K):
        acc = 0
        for digit, bp in zip(_base.coeffs_of(c), _pows):
            if digit:
                acc = _K.add(acc, _K.mul(digit, bp))
        return acc

    if m == 1:
        alpha = K.neg(map_coeff(h.monic().constant_coeff()))
        return K, alpha, map_coeff
    hK = h.monic().map_coeffs(K, map_coeff)
    alpha = hK.roots(rng)[0]
    return K, alpha, map_coeff


def _undo_transform(witness, lam_field, lam, swapped):
    """Map a witness of the sheared/swapped system back to chart coordinates."""
    if isinstance(witness, _WitnesslessHit):
        return None
    K = witness.field
    x, y = witness.x, witness.y
    if lam:
        if lam_field.k > 1 and K.k == 1:
            return None  # cannot express the shear inside the witness field
        if lam_field.k > 1 and lam_field != K:
            lam_in_K = _embed_element(lam_field, K, lam)
            if lam_in_K is None:
                return None
        else:
            lam_in_K = lam
        x = K.add(x, K.mul(lam_in_K, y))
    if swapped:
        x, y = y, x
    return Witness(K, x, y)


def _embed_element(src: Field, dst: Field, a: int):
    if dst.k % src.k != 0:
        return None
    roots = UniPoly(dst, src.modulus).roots()
    if not roots:
        return None
    beta = roots[0]
    acc = 0
    power = 1
    for digit in src.coeffs_of(a):
        if digit:
            acc = dst.add(acc, dst.mul(digit, power))
        power = dst.mul(power, beta)
    return acc


def _witness_checks(witness: Witness, polys) -> bool:
    base = polys[0].field
    if base.k != 1:
        return False  # only prime-base coefficients embed by identity
    K = witness.field
    return all(g.eval_x(witness.x, K).eval_at(witness.y) == 0 for g in polys)


def _point_on_locus(g: BiPoly, polys) -> Optional[Witness]:
    """Cheap search for a point on a positive-dimensional common locus."""
    base = g.field
    for m in (1, 2, 3):
        try:
            hit = scan_common_zero(polys, base.p, m) if base.k == 1 else None
        except ResourceCapError:
            break
        if hit is not None:
            K = Field(base.p, m) if m > 1 else base
            return Witness(K, hit[0], hit[1])
    return None


# ---------------------------------------------------------------------------
# Verdicts
# ---------------------------------------------------------------------------

def _section_of(surface: SurfaceModel, f):
    """Normalize the input to the section actually living on the surface."""
    if surface.kind == P2:
        if not isinstance(f, Form) or f.n_vars != 3:
            raise ValueError("plane sections are forms in three variables")
        if f.p != surface.p:
            raise ValueError("form characteristic does not match the surface")
        if f.is_zero():
            return None, Verdict(NOT_A_CURVE, reason=ZERO_FORM)
        return f, None
    if isinstance(f, Form):
        if f.n_vars != 4:
            raise ValueError("ambient forms for the Segre quadric live on P^3")
        if f.p != surface.p:
            raise ValueError("form characteristic does not match the surface")
        if f.is_zero():
            return None, Verdict(NOT_A_CURVE, reason=ZERO_FORM)
        b = f.segre_restrict()
        if b.is_zero():
            return None, Verdict(NOT_A_CURVE, reason=VANISHES_ON_SURFACE)
        return b, None
    if not isinstance(f, BiForm):
        raise ValueError("expected a Form or BiForm section")
    if f.p != surface.p:
        raise ValueError("section characteristic does not match the surface")
    if f.is_zero():
        return None, Verdict(NOT_A_CURVE, reason=ZERO_FORM)
    return f, None


def section_seed(section) -> int:
    """Deterministic seed from the section's coefficients."""
    if isinstance(section, Form):
        blob = f"form:{section.p}:{section.degree}:{section.coeffs}"
    else:
        blob = f"biform:{section.p}:{section.degree}:{section.grid}"
    return zlib.crc32(blob.encode())


def is_smooth(surface: SurfaceModel, f, *, use_scan: bool = True,
              scan_depth: Optional[int] = None) -> Verdict:
    """Exact verdict for the section cut out by f on the surface.

    use_scan enables a sound shortcut: small-field grid scans that catch
    most singular sections before any elimination runs.  Verdicts do not
    depend on it.
    """
    section, early = _section_of(surface, f)
    if early is not None:
        return early
    systems = chart_systems(surface, section)
    if use_scan:
        depth = scan_depth if scan_depth is not None else \
            _DEFAULT_SCAN_DEPTH.get(surface.p, 1)
        for m in range(1, depth + 1):
            for chart, system in enumerate(systems):
                hit = scan_common_zero(system, surface.p, m)
                if hit is not None:
                    K = Field(surface.p, m) if m > 1 else Field(surface.p)
                    return Verdict(SINGULAR, chart=chart,
                                   witness=Witness(K, hit[0], hit[1]))
    seed = section_seed(section)
    for chart, system in enumerate(systems):
        result = decide_common_zero(system, seed=seed + chart)
        if result.has_zero:
            return Verdict(SINGULAR, chart=chart, witness=result.witness)
    return Verdict(SMOOTH)


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------

def oracle_complete_depth(surface: SurfaceModel, d: int) -> int:
    """Scan depth that makes the oracle complete (plane: Bezout (d-1)^2)."""
    if surface.kind == P2:
        return max(1, (d - 1) ** 2)
    return max(1, 2 * d * d)


def brute_force_singular(surface: SurfaceModel, f, m_max: int,
                         point_cap: int = _ORACLE_POINT_CAP) -> Verdict:
    """Scan-based verdict, independent of the elimination engine.

    Complete whenever m_max >= oracle_complete_depth(surface, d) after the
    gcd pre-check has excluded positive-dimensional singular loci;
    otherwise an under-approximation of singularity.
    """
    if m_max < 1:
        raise ValueError("m_max must be at least 1")
    section, early = _section_of(surface, f)
    if early is not None:
        return early
    n_charts = 3 if surface.kind == P2 else 4
    if scan_cost(surface.p, m_max) * n_charts > point_cap:
        raise ResourceCapError(
            f"scanning to depth {m_max} exceeds the point cap {point_cap}")
    systems = chart_systems(surface, section)
    for chart, system in enumerate(systems):
        g = system_gcd([g_ for g_ in system if not g_.is_zero()])
        if g is None or g.total_degree() >= 1:
            return Verdict(SINGULAR, chart=chart)
    for m in range(1, m_max + 1):
        for chart, system in enumerate(systems):
            hit = scan_common_zero(system, surface.p, m)
            if hit is not None:
                K = Field(surface.p, m) if m > 1 else Field(surface.p)
                return Verdict(SINGULAR, chart=chart,
                               witness=Witness(K, hit[0], hit[1]))
    return Verdict(SMOOTH)
