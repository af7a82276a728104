"""Experiment runner and distribution statistics.

run_experiment drives a whole family: enumerate or sample forms, classify
each section (smooth / singular / not a curve), count rational points on
the smooth ones, and aggregate a conditional histogram together with its
exact empirical moments and the distance to the predicted binomial law.

Determinism contract: work is split into fixed-size chunks; in sample mode
each chunk owns an rng seeded from (master_seed, chunk_index) only.
Results are therefore bit-identical for any worker count, and workers can
be OS processes (the merge is associative count addition).

The pure coin-flip side lives here too: exact binomial pmf/cdf, total
variation distance, Gaussian interval mass, and the exact
Kolmogorov-Smirnov distance of the normalized binomial from the standard
Gaussian -- the quantitative form of the model's central limit mechanism.
"""

from __future__ import annotations

import hashlib
import math
import multiprocessing
import random
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import comb
from typing import Optional

from . import __version__
from .errors import EliminationDegenerateError, ResourceCapError
from .forms import (ENUMERATION_CAP, P2, SEGRE, SurfaceModel, biform_from_index,
                    form_from_index, sample_biform, sample_form, space_size,
                    surface_points)
from .predictors import (frac_json, frac_str, predicted_pmf, predictor_report,
                         success_probability, surface_point_count)
from .smoothness import (NOT_A_CURVE, SINGULAR, SMOOTH, brute_force_singular,
                         is_smooth, oracle_complete_depth)

CHUNK_SIZE = 2048

ENUMERATE = "enumerate"
SAMPLE = "sample"


# ---------------------------------------------------------------------------
# Binomial model and distances
# ---------------------------------------------------------------------------

class BinomialModel:
    """Binomial(n, r) with exact rational pmf and cdf."""

    def __init__(self, n: int, r: Fraction):
        if n < 1:
            raise ValueError("need at least one trial")
        r = Fraction(r)
        if not 0 <= r <= 1:
            raise ValueError("success probability outside [0, 1]")
        self.n = n
        self.r = r

    @property
    def mean(self) -> Fraction:
        return self.n * self.r

    @property
    def variance(self) -> Fraction:
        return self.n * self.r * (1 - self.r)

    def pmf(self, s: int) -> Fraction:
        if not 0 <= s <= self.n:
            raise ValueError(f"s = {s} outside 0..{self.n}")
        return comb(self.n, s) * self.r ** s * (1 - self.r) ** (self.n - s)

    def cdf(self, s: int) -> Fraction:
        if not 0 <= s <= self.n:
            raise ValueError(f"s = {s} outside 0..{self.n}")
        return sum(self.pmf(k) for k in range(s + 1))

    def pmf_table(self) -> dict:
        return {s: self.pmf(s) for s in range(self.n + 1)}


def tv_distance(h1: dict, h2: dict) -> Fraction:
    """Half the L1 distance of two distributions on a common support."""
    if set(h1) != set(h2):
        raise ValueError("total variation needs a common support")
    return sum(abs(Fraction(h1[s]) - Fraction(h2[s])) for s in h1) / 2


def normal_cdf(x: float) -> float:
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


def gaussian_interval(a: float, b: float) -> float:
    """Standard Gaussian mass of [a, b], good to well below 1e-10."""
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("interval endpoints must be finite")
    if a > b:
        raise ValueError("empty interval: a > b")
    return normal_cdf(b) - normal_cdf(a)


def ks_normalized_binomial(n: int, r: Fraction) -> float:
    """sup |F_normalized_binomial - Phi|, cdf exact, Phi via erf.

    The supremum over the real line of the distance between a step
    function and a continuous cdf is attained at the jump points, comparing
    both one-sided limits.
    """
    r = Fraction(r)
    a, b = r.numerator, r.denominator
    mean = float(n * r)
    sigma = math.sqrt(float(n * r * (1 - r)))
    term = (b - a) ** n          # C(n,0) a^0 (b-a)^n
    den = b ** n
    cum = 0
    worst = 0.0
    prev_cdf = 0.0
    for k in range(n + 1):
        cum += term
        x = (k - mean) / sigma
        phi = normal_cdf(x)
        cdf_here = float(Fraction(cum, den))
        worst = max(worst, abs(phi - prev_cdf), abs(cdf_here - phi))
        prev_cdf = cdf_here
        if k < n:
            term = term * (n - k) // (k + 1)
            term = term * a // (b - a)
    return worst


# ---------------------------------------------------------------------------
# Experiment configuration and results
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentConfig:
    p: int
    surface: str                     # "p2" | "segre"
    degree: int
    mode: str = SAMPLE               # "enumerate" | "sample"
    sample_count: int = 0
    master_seed: Optional[int] = None
    worker_count: int = 1
    enumeration_cap: int = ENUMERATION_CAP
    scan_depth: Optional[int] = None

    def __post_init__(self):
        if self.mode not in (ENUMERATE, SAMPLE):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.degree < 1:
            raise ValueError("degree must be >= 1")
        if self.worker_count < 1:
            raise ValueError("worker count must be >= 1")
        if self.mode == SAMPLE:
            if self.sample_count < 1:
                raise ValueError("sample mode needs sample_count >= 1")
            if self.master_seed is None:
                raise ValueError("sample mode needs a master seed")

    @property
    def surface_model(self) -> SurfaceModel:
        return SurfaceModel(self.surface, self.p)

    def family_size(self) -> int:
        if self.surface == P2:
            return space_size(self.p, 2, self.degree)
        return self.p ** ((self.degree + 1) ** 2)

    def to_json(self) -> dict:
        # worker_count is execution metadata, not part of the experiment
        # identity; it lands in the result's timing block instead
        return {
            "p": self.p, "surface": self.surface, "degree": self.degree,
            "mode": self.mode, "sample_count": self.sample_count,
            "master_seed": self.master_seed,
            "enumeration_cap": self.enumeration_cap,
            "scan_depth": self.scan_depth,
        }


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    n_total: int
    n_smooth: int
    n_singular: int
    n_not_a_curve: int
    histogram: dict                  # s -> count over smooth sections
    elapsed_seconds: float = 0.0

    def __post_init__(self):
        if self.n_smooth + self.n_singular + self.n_not_a_curve != self.n_total:
            raise ValueError("verdict counts do not add up")
        if sum(self.histogram.values()) != self.n_smooth:
            raise ValueError("histogram mass does not match the smooth count")

    # -- derived exact statistics -------------------------------------------

    @property
    def t(self) -> int:
        return surface_point_count(self.config.surface_model, 1)

    @property
    def n_curves(self) -> int:
        """Sections that cut out a curve at all (smooth or singular)."""
        return self.n_smooth + self.n_singular

    @property
    def smooth_fraction(self) -> Fraction:
        if self.n_curves == 0:
            raise ValueError("degenerate family: every section was NotACurve")
        return Fraction(self.n_smooth, self.n_curves)

    @property
    def mean(self) -> Fraction:
        if self.n_smooth == 0:
            raise ValueError("no smooth sections to average over")
        return Fraction(sum(s * c for s, c in self.histogram.items()), self.n_smooth)

    @property
    def variance(self) -> Fraction:
        m = self.mean
        sq = Fraction(sum(s * s * c for s, c in self.histogram.items()), self.n_smooth)
        return sq - m * m

    def conditional_distribution(self) -> dict:
        return {s: Fraction(self.histogram.get(s, 0), self.n_smooth)
                for s in range(self.t + 1)}

    @property
    def tv_to_predicted(self) -> Fraction:
        model = BinomialModel(self.t, success_probability(self.config.p))
        return tv_distance(self.conditional_distribution(), model.pmf_table())

    def smooth_fraction_stderr(self) -> float:
        f = float(self.smooth_fraction)
        return math.sqrt(f * (1 - f) / self.n_curves)

    # -- serialization ---------------------------------------------------------

    def to_json(self, include_timing: bool = True) -> dict:
        out = {
            "schema": "curvestats.experiment/1",
            "version": __version__,
            "config": self.config.to_json(),
            "counts": {
                "n_total": self.n_total,
                "n_smooth": self.n_smooth,
                "n_singular": self.n_singular,
                "n_not_a_curve": self.n_not_a_curve,
            },
            "histogram": {str(s): self.histogram.get(s, 0)
                          for s in range(self.t + 1)},
            "statistics": {
                "smooth_fraction": frac_json(self.smooth_fraction),
                "smooth_fraction_stderr": self.smooth_fraction_stderr(),
                "mean": frac_json(self.mean),
                "variance": frac_json(self.variance),
                "tv_to_predicted": frac_json(self.tv_to_predicted),
            },
            "predicted": predictor_report(self.config.surface_model),
        }
        if include_timing:
            out["timing"] = {"elapsed_seconds": self.elapsed_seconds,
                             "worker_count": self.config.worker_count}
        return out

    def histogram_csv(self) -> str:
        model = BinomialModel(self.t, success_probability(self.config.p))
        lines = ["s,count,empirical_prob,predicted_prob"]
        for s in range(self.t + 1):
            c = self.histogram.get(s, 0)
            emp = Fraction(c, self.n_smooth) if self.n_smooth else Fraction(0)
            lines.append(f"{s},{c},{frac_str(emp)},{frac_str(model.pmf(s))}")
        return "\n".join(lines) + "\n"


def normalized_interval_fraction(result: ExperimentResult, a: float, b: float) -> Fraction:
    """Fraction of smooth sections with (count - M)/sqrt(V) inside [a, b]."""
    variance = result.variance
    if variance == 0:
        raise ValueError("zero empirical variance: normalization undefined")
    mean = float(result.mean)
    sd = math.sqrt(float(variance))
    hits = sum(c for s, c in result.histogram.items()
               if a <= (s - mean) / sd <= b)
    return Fraction(hits, result.n_smooth)


# ---------------------------------------------------------------------------
# The runner
# ---------------------------------------------------------------------------

def _chunk_seed(master_seed: int, chunk_index: int) -> int:
    blob = f"{master_seed}:{chunk_index}".encode()
    return int.from_bytes(hashlib.sha256(blob).digest()[:8], "big")


def _classify(surface: SurfaceModel, section, scan_depth, degree):
    try:
        return is_smooth(surface, section, scan_depth=scan_depth)
    except EliminationDegenerateError:
        depth = oracle_complete_depth(surface, degree)
        return brute_force_singular(surface, section, depth)


def _run_chunk(args):
    cfg_json, chunk_index, start, count = args
    config = ExperimentConfig(**cfg_json)
    surface = config.surface_model
    points = surface_points(surface, 1)
    segre = surface.kind == SEGRE
    n_smooth = n_singular = n_nac = 0
    hist = {}
    if config.mode == SAMPLE:
        rng = random.Random(_chunk_seed(config.master_seed, chunk_index))
        draw = (lambda: sample_biform(config.p, config.degree, rng)) if segre \
            else (lambda: sample_form(config.p, 2, config.degree, rng))
        sections = (draw() for _ in range(count))
    else:
        if segre:
            sections = (biform_from_index(config.p, config.degree, i)
                        for i in range(start, start + count))
        else:
            sections = (form_from_index(config.p, 2, config.degree, i)
                        for i in range(start, start + count))
    for section in sections:
        verdict = _classify(surface, section, config.scan_depth, config.degree)
        if verdict.tag == SMOOTH:
            n_smooth += 1
            if segre:
                s = sum(1 for (u, v) in points if section.eval_at(u, v) == 0)
            else:
                s = sum(1 for pt in points if section.eval_at(pt) == 0)
            hist[s] = hist.get(s, 0) + 1
        elif verdict.tag == SINGULAR:
            n_singular += 1
        else:
            n_nac += 1
    return n_smooth, n_singular, n_nac, hist


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run the family and aggregate; deterministic for fixed (config, seed)."""
    t0 = time.time()
    if config.mode == ENUMERATE:
        total = config.family_size()
        if total > config.enumeration_cap:
            raise ResourceCapError(
                f"family has {total} sections, above the cap "
                f"{config.enumeration_cap}; rerun in sample mode")
    else:
        total = config.sample_count
    chunks = []
    start = 0
    index = 0
    while start < total:
        count = min(CHUNK_SIZE, total - start)
        chunks.append((config.to_json(), index, start, count))
        start += count
        index += 1
    if config.worker_count == 1 or len(chunks) == 1:
        partials = [_run_chunk(c) for c in chunks]
    else:
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(config.worker_count) as pool:
            partials = pool.map(_run_chunk, chunks)
    n_smooth = n_singular = n_nac = 0
    hist = {}
    for s_, g_, n_, h_ in partials:
        n_smooth += s_
        n_singular += g_
        n_nac += n_
        for k, v in h_.items():
            hist[k] = hist.get(k, 0) + v
    return ExperimentResult(config, total, n_smooth, n_singular, n_nac,
                            hist, elapsed_seconds=time.time() - t0)


def count_points(surface: SurfaceModel, section, k: int = 1) -> int:
    """|C(F_{p^k})| for the section's curve (k > 1 exposed for diagnostics)."""
    points = surface_points(surface, k)
    if surface.kind == SEGRE:
        return sum(1 for (u, v) in points if section.eval_at(u, v) == 0)
    return sum(1 for pt in points if section.eval_at(pt) == 0)
