"""Command-line front end.

Subcommands:

  predict  -- exact predictor report for a surface (binomial law, moments,
              smooth probability)
  run      -- run a family experiment and persist result JSON + histogram
              CSV + manifest
  clt      -- table of Kolmogorov-Smirnov distances of the normalized
              binomial from the standard Gaussian
  zeta     -- truncated zeta diagnostics against the exact value
  oracle   -- cross-validate the elimination engine against the
              brute-force scan

Flags can also come from a key=value config file (--config); explicit
flags win.  CURVESTATS_WORKERS sets the default worker count.  Exit codes:
0 success, 2 invalid input, 3 resource cap exceeded, 4 internal
elimination degeneracy.  Statistical disagreement never fails the
process; acceptance judgments live in the test suite.
"""

from __future__ import annotations

import argparse
import datetime
import json
import os
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import EliminationDegenerateError, ResourceCapError
from .forms import P2, SEGRE, sample_form
from .field import is_prime
from .harness import (ExperimentConfig, gaussian_interval, ks_normalized_binomial,
                      run_experiment)
from .predictors import (frac_json, frac_str, predictor_report, success_probability,
                         surface_point_count, zeta_exact, zeta_factorization_check,
                         zeta_truncated_table)
from .forms import SurfaceModel
from .smoothness import brute_force_singular, chart_systems, is_smooth, \
    oracle_complete_depth
from .gridscan import scan_cost

_ZETA_BIT_BUDGET = 4_000_000


def _surface(args) -> SurfaceModel:
    return SurfaceModel(args.surface, args.p)


def _read_config_file(path: str) -> dict:
    out = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"config line without '=': {line!r}")
        key, value = line.split("=", 1)
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _apply_config_defaults(args, spec: dict):
    """Fill argparse None slots from the config file; explicit flags win."""
    if not getattr(args, "config", None):
        file_values = {}
    else:
        file_values = _read_config_file(args.config)
    for key, (cast, default) in spec.items():
        if getattr(args, key, None) is not None:
            continue
        if key in file_values:
            raw = file_values[key]
            setattr(args, key, cast(raw))
        else:
            setattr(args, key, default)


def _default_workers() -> int:
    env = os.environ.get("CURVESTATS_WORKERS")
    if env:
        return int(env)
    return 1


def _manifest(args, config_json, outputs):
    now = datetime.datetime.now(datetime.timezone.utc).isoformat()
    return {
        "schema": "curvestats.manifest/1",
        "version": __version__,
        "command": sys.argv if args is None else getattr(args, "_argv", sys.argv),
        "config": config_json,
        "started": getattr(args, "_started", now),
        "finished": now,
        "outputs": outputs,
    }


def _emit_json(payload, out: Path = None):
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


# ---------------------------------------------------------------------------
# predict
# ---------------------------------------------------------------------------

def cmd_predict(args) -> int:
    _apply_config_defaults(args, {"p": (int, None), "surface": (str, P2)})
    if args.p is None:
        raise ValueError("missing --p")
    report = predictor_report(_surface(args))
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        report["manifest"] = "manifest.json"
        _emit_json(report, outdir / "predict.json")
        _emit_json(_manifest(args, report.get("config"), ["predict.json"]),
                   outdir / "manifest.json")
    else:
        _emit_json(report)
    return 0


# ---------------------------------------------------------------------------
# run
# ---------------------------------------------------------------------------

def cmd_run(args) -> int:
    _apply_config_defaults(args, {
        "p": (int, None), "surface": (str, P2), "degree": (int, None),
        "mode": (str, "sample"), "samples": (int, 0), "seed": (int, None),
        "workers": (int, _default_workers()), "scan_depth": (int, None),
    })
    if args.p is None or args.degree is None:
        raise ValueError("missing --p or --degree")
    config = ExperimentConfig(
        p=args.p, surface=args.surface, degree=args.degree, mode=args.mode,
        sample_count=args.samples, master_seed=args.seed,
        worker_count=args.workers, scan_depth=args.scan_depth)
    result = run_experiment(config)
    payload = result.to_json()
    summary = (f"{config.mode} {result.n_total} sections: "
               f"{result.n_smooth} smooth, {result.n_singular} singular, "
               f"{result.n_not_a_curve} not-a-curve; "
               f"smooth_fraction={float(result.smooth_fraction):.5f} "
               f"tv={float(result.tv_to_predicted):.5f}")
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        payload["manifest"] = "manifest.json"
        _emit_json(payload, outdir / "result.json")
        csv_text = "# manifest: manifest.json\n" + result.histogram_csv()
        (outdir / "histogram.csv").write_text(csv_text)
        _emit_json(_manifest(args, config.to_json(),
                             ["result.json", "histogram.csv"]),
                   outdir / "manifest.json")
        print(f"{summary} -> {outdir}")
    else:
        _emit_json(payload)
    return 0


# ---------------------------------------------------------------------------
# clt
# ---------------------------------------------------------------------------

def cmd_clt(args) -> int:
    _apply_config_defaults(args, {"p": (int, None), "n_list": (str, None)})
    if args.p is None or not args.n_list:
        raise ValueError("missing --p or --n-list")
    if not is_prime(args.p):
        raise ValueError(f"p = {args.p} is not prime")
    ns = [int(tok) for tok in str(args.n_list).split(",") if tok]
    if any(n < 1 for n in ns):
        raise ValueError("trial counts must be positive")
    r = success_probability(args.p)
    lines = ["n,ks_distance"]
    for n in ns:
        lines.append(f"{n},{ks_normalized_binomial(n, r):.10f}")
    text = "\n".join(lines) + "\n"
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "clt.csv").write_text("# manifest: manifest.json\n" + text)
        _emit_json(_manifest(args, {"p": args.p, "n_list": ns}, ["clt.csv"]),
                   outdir / "manifest.json")
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# zeta
# ---------------------------------------------------------------------------

def _zeta_bit_estimate(p: int, s: int, horizon: int) -> int:
    return int(s * (p.bit_length()) * sum(p ** (2 * m) for m in range(1, horizon + 1)))


def cmd_zeta(args) -> int:
    _apply_config_defaults(args, {
        "p": (int, None), "surface": (str, P2), "s": (int, 3),
        "horizon": (int, 6),
    })
    if args.p is None:
        raise ValueError("missing --p")
    if _zeta_bit_estimate(args.p, args.s, args.horizon) > _ZETA_BIT_BUDGET:
        raise ResourceCapError(
            f"horizon {args.horizon} at p = {args.p} exceeds the exact-"
            "arithmetic budget; lower the horizon")
    surface = _surface(args)
    table = zeta_truncated_table(surface, args.s, args.horizon)
    exact = zeta_exact(surface, args.s)
    check = zeta_factorization_check(surface, args.s, args.horizon)
    payload = {
        "p": args.p, "surface": args.surface, "s": args.s,
        "horizon": args.horizon,
        "exact": frac_json(exact),
        "partials": [{"horizon": i + 1, "value": frac_json(v),
                      "gap_float": float(exact - v)}
                     for i, v in enumerate(table)],
        "factorization_check": check,
    }
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        payload["manifest"] = "manifest.json"
        _emit_json(payload, outdir / "zeta.json")
        _emit_json(_manifest(args, {"p": args.p, "surface": args.surface,
                                    "s": args.s, "horizon": args.horizon},
                             ["zeta.json"]), outdir / "manifest.json")
    else:
        _emit_json(payload)
    return 0


# ---------------------------------------------------------------------------
# oracle
# ---------------------------------------------------------------------------

def cmd_oracle(args) -> int:
    _apply_config_defaults(args, {
        "p": (int, None), "degree": (int, None), "count": (int, 0),
        "seed": (int, 0), "exhaustive": (bool, False),
    })
    if args.p is None or args.degree is None:
        raise ValueError("missing --p or --degree")
    surface = SurfaceModel(P2, args.p)
    depth = oracle_complete_depth(surface, args.degree)
    if scan_cost(args.p, depth) * 3 > (1 << 21):
        raise ResourceCapError(
            f"completeness depth {depth} for degree {args.degree} exceeds "
            "the scan budget; the oracle refuses to report unsound agreement")
    if args.exhaustive:
        from .forms import enumerate_forms
        sections = list(enumerate_forms(args.p, 2, args.degree))
    else:
        if args.count < 1:
            raise ValueError("need --count >= 1 or --exhaustive")
        rng = random.Random(args.seed)
        sections = [sample_form(args.p, 2, args.degree, rng)
                    for _ in range(args.count)]
    agree = 0
    disagreements = []
    audited = passed = 0
    for f in sections:
        engine = is_smooth(surface, f, use_scan=False)
        oracle = brute_force_singular(surface, f, depth)
        if engine.tag == oracle.tag:
            agree += 1
        else:
            disagreements.append({"form": f.text(), "engine": engine.tag,
                                  "oracle": oracle.tag})
        for verdict in (engine, oracle):
            if verdict.witness is not None and verdict.chart is not None:
                audited += 1
                system = chart_systems(surface, f)[verdict.chart]
                w = verdict.witness
                ok = all(g.eval_x(w.x, w.field).eval_at(w.y) == 0
                         for g in system)
                passed += ok
    payload = {
        "p": args.p, "degree": args.degree, "n": len(sections),
        "agreements": agree, "disagreements": disagreements,
        "witness_audit": {"checked": audited, "passed": passed},
    }
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        payload["manifest"] = "manifest.json"
        _emit_json(payload, outdir / "oracle.json")
        _emit_json(_manifest(args, {"p": args.p, "degree": args.degree},
                             ["oracle.json"]), outdir / "manifest.json")
    else:
        _emit_json(payload)
    print(f"{agree}/{len(sections)} agree", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="curvestats",
        description="Point-count statistics of curve families over F_p")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="key=value config file; flags win")
        sp.add_argument("--out", help="output directory")

    sp = sub.add_parser("predict", help="exact predictor report")
    sp.add_argument("--p", type=int)
    sp.add_argument("--surface", choices=[P2, SEGRE], default=None)
    common(sp)
    sp.set_defaults(func=cmd_predict)

    sp = sub.add_parser("run", help="run a family experiment")
    sp.add_argument("--p", type=int)
    sp.add_argument("--surface", choices=[P2, SEGRE], default=None)
    sp.add_argument("--degree", type=int)
    sp.add_argument("--mode", choices=["enumerate", "sample"], default=None)
    sp.add_argument("--samples", type=int, default=None)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--workers", type=int, default=None)
    sp.add_argument("--scan-depth", dest="scan_depth", type=int, default=None)
    common(sp)
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("clt", help="normalized-binomial KS table")
    sp.add_argument("--p", type=int)
    sp.add_argument("--n-list", dest="n_list")
    common(sp)
    sp.set_defaults(func=cmd_clt)

    sp = sub.add_parser("zeta", help="truncated zeta diagnostics")
    sp.add_argument("--p", type=int)
    sp.add_argument("--surface", choices=[P2, SEGRE], default=None)
    sp.add_argument("--s", type=int, default=None)
    sp.add_argument("--horizon", type=int, default=None)
    common(sp)
    sp.set_defaults(func=cmd_zeta)

    sp = sub.add_parser("oracle", help="engine vs brute-force cross-validation")
    sp.add_argument("--p", type=int)
    sp.add_argument("--degree", type=int)
    sp.add_argument("--count", type=int, default=None)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--exhaustive", action="store_true", default=None)
    common(sp)
    sp.set_defaults(func=cmd_oracle)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args._argv = ["curvestats"] + list(argv if argv is not None else sys.argv[1:])
    args._started = datetime.datetime.now(datetime.timezone.utc).isoformat()
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return 3
    except EliminationDegenerateError as exc:
        print(f"internal degeneracy: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
