"""Command-line interface: ``spurious-ts {diagnose,simulate,correlate,select}``.

Exit status is 0 on success, 2 for unusable input and 3 when a
computation fails on valid input (rank deficiency, non-convergence).
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

from . import __version__
from .core import align, difference
from .diagnose import VerdictPolicy, diagnose, format_table
from .errors import InputError, NumericalError
from .io import read_series
from .montecarlo import McConfig, run_experiment, trend_target
from .select import auto_arima
from .stats import pearson, spearman

EXIT_INPUT = 2
EXIT_NUMERICAL = 3
SEED_ENV = "SPURIOUS_TS_SEED"
FAMILY_ALIASES = {"coin": "coin_flip", "walk": "gaussian_walk"}


def _clean(obj):
    # JSON has no NaN/Infinity
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def _dumps(obj) -> str:
    return json.dumps(_clean(obj), indent=2, sort_keys=True) + "\n"


def _write_text(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _named_file(spec: str):
    name, sep, path = spec.partition("=")
    if not sep or not name or not path:
        raise argparse.ArgumentTypeError(f"expected NAME=FILE, got {spec!r}")
    return name, path


def cmd_diagnose(args) -> int:
    outcome = read_series(args.outcome)
    predictor = read_series(args.predictor)
    covariates = [(name, read_series(path)) for name, path in args.covariate]
    name = args.name or os.path.splitext(os.path.basename(args.predictor))[0]
    policy = VerdictPolicy(args.level_alpha, args.change_alpha, args.dw_threshold)
    report = diagnose(outcome, predictor, covariates, predictor_name=name,
                      policy=policy, max_p=args.max_p, max_q=args.max_q,
                      run_arima=not args.no_arima)
    print(format_table([report]))
    if args.json:
        _write_text(args.json, _dumps(report.to_dict()))
    return 0


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw.strip() == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{SEED_ENV}={raw!r} is not an integer") from None


def cmd_simulate(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    if args.target == "trend":
        length = args.length if args.length is not None else 63
        target = trend_target(length, seed)
    else:
        target = read_series(args.target)
        length = args.length if args.length is not None else len(target)
    config = McConfig(family=FAMILY_ALIASES[args.family], n_series=args.n,
                      length=length, seed=seed, alpha=args.alpha)
    result = run_experiment(target, config, workers=args.workers)
    summary = result.to_dict(include_records=False)
    sys.stdout.write(_dumps(summary))
    if args.json:
        _write_text(args.json, _dumps(result.to_dict(include_records=True)))
    if args.hist:
        with open(args.hist, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["bin_low", "bin_high", "count_levels", "count_changes"])
            for low, high, cl, cc in result.histogram_rows():
                writer.writerow([f"{low:.2f}", f"{high:.2f}", cl, cc])
    return 0


def cmd_correlate(args) -> int:
    a = read_series(args.a)
    b = read_series(args.b)
    frame = align(a, [("b", b)])
    xa, xb = frame.outcome, frame.predictor("b")
    if args.diff:
        xa, xb = difference(xa, 1), difference(xb, 1)
    fn = pearson if args.method == "pearson" else spearman
    res = fn(xa, xb)
    scale = "changes" if args.diff else "levels"
    print(f"method={args.method} scale={scale} years={int(xa.times[0])}-{int(xa.times[-1])} "
          f"n={res.n} r={res.r:.6f} t={res.t_stat:.6f} p={res.p_value:.6g}")
    return 0


def cmd_select(args) -> int:
    outcome = read_series(args.outcome)
    predictor = read_series(args.predictor)
    name = args.name or os.path.splitext(os.path.basename(args.predictor))[0]
    frame = align(outcome, [(name, predictor)])
    trace = auto_arima(frame.outcome, [(name, frame.predictor(name))],
                       max_p=args.max_p, max_q=args.max_q)
    fit = trace.chosen_fit
    print(f"d = {trace.chosen.d} (KPSS on the outcome)")
    print(trace)
    print()
    print(f"chosen ARIMA{trace.chosen}  AICc={fit.aicc:.4f}  loglik={fit.loglik:.4f}  "
          f"sigma2={fit.sigma2:.6g}")
    for i, term in enumerate(fit.terms):
        print(f"  {term:<16}{fit.beta[i]: .6g}  se={fit.beta_se[i]:.4g}  "
              f"t={fit.beta_t[i]:.3f}  p={fit.beta_p[i]:.4f}")
    for i, v in enumerate(fit.phi):
        print(f"  {'ar' + str(i + 1):<16}{v: .6g}  se={fit.arma_se[i]:.4g}")
    for i, v in enumerate(fit.theta):
        print(f"  {'ma' + str(i + 1):<16}{v: .6g}  se={fit.arma_se[len(fit.phi) + i]:.4g}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spurious-ts",
        description="Spurious-regression diagnostics for annual time series.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("diagnose", help="run the full diagnostic battery")
    p.add_argument("--outcome", required=True, metavar="FILE")
    p.add_argument("--predictor", required=True, metavar="FILE")
    p.add_argument("--covariate", action="append", default=[], type=_named_file,
                   metavar="NAME=FILE")
    p.add_argument("--name", help="predictor label (default: file stem)")
    p.add_argument("--json", metavar="PATH", help="write the report as JSON ('-' for stdout)")
    p.add_argument("--level-alpha", type=float, default=0.01)
    p.add_argument("--change-alpha", type=float, default=0.05)
    p.add_argument("--dw-threshold", type=float, default=1.0)
    p.add_argument("--max-p", type=int, default=5)
    p.add_argument("--max-q", type=int, default=5)
    p.add_argument("--no-arima", action="store_true", help="skip order selection")
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("simulate", help="spurious-significance Monte Carlo")
    p.add_argument("--family", choices=sorted(FAMILY_ALIASES), default="walk")
    p.add_argument("--n", type=int, default=10_000)
    p.add_argument("--length", type=int, default=None)
    p.add_argument("--seed", type=int, default=None,
                   help=f"master seed (default: ${SEED_ENV} or 0)")
    p.add_argument("--target", default="trend", metavar="FILE|trend")
    p.add_argument("--alpha", type=float, default=0.01)
    p.add_argument("--hist", metavar="PATH", help="write P-value histogram CSV")
    p.add_argument("--json", metavar="PATH", help="write full result with per-series records")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("correlate", help="correlate two series on their common years")
    p.add_argument("--a", required=True, metavar="FILE")
    p.add_argument("--b", required=True, metavar="FILE")
    p.add_argument("--method", choices=["pearson", "spearman"], default="pearson")
    p.add_argument("--diff", action="store_true", help="correlate first differences")
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("select", help="stepwise ARIMA-error order selection")
    p.add_argument("--outcome", required=True, metavar="FILE")
    p.add_argument("--predictor", required=True, metavar="FILE")
    p.add_argument("--name", help="predictor label (default: file stem)")
    p.add_argument("--max-p", type=int, default=5)
    p.add_argument("--max-q", type=int, default=5)
    p.set_defaults(func=cmd_select)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (InputError, OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
