"""Command-line front end: fit a data file or run simulation scenarios.

Exit codes: 0 on success, 2 on input parse/IO errors, 3 on infeasible
configurations (bad method, bad scenario, k_max too large for the series,
and so on).  Diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

from .criteria import two_fold_curves, vfold_criterion
from .errors import CpcvError
from .folds import drop_to_even, make_fold_plan
from .pipeline import FitResult, MethodSpec, parse_method, run_estimator
from .segmentation import build_cost_table, segment_means
from .signal import ChangePointSet, PiecewiseSignal, Series, read_series_csv
from .simulate import (
    get_scenario,
    run_simulation,
    scenario_bump,
    scenario_overestimation,
    scenario_underestimation,
    write_report_csv,
)

_DETECT_CRITERION = {"copps": "cv2", "cv1": "cv1", "cvmod": "cvmod"}


def _mean_only_fit(series: Series, spec: MethodSpec) -> FitResult:
    # --kmax 0 pins K-hat to 0; the curve still reports the criterion there
    s = drop_to_even(series)
    if spec.kind == "cv1-vfold":
        plan = make_fold_plan(s.n, spec.folds)
        curve = vfold_criterion(s, plan, [0], loss="abs")
    else:
        crit = _DETECT_CRITERION[spec.kind]
        curve = two_fold_curves(s, 0, (crit,))[crit]
    cps = ChangePointSet(s.n, ())
    f_hat = PiecewiseSignal(cps, segment_means(build_cost_table(s), cps))
    return FitResult(k_hat=0, final_cps=cps, f_hat=f_hat, curve=curve)


def _curve_items(fit: FitResult):
    return sorted(fit.curve.values.items())


def _print_fit_text(fit: FitResult, spec: MethodSpec) -> None:
    print(f"method: {spec.label}")
    print(f"n: {fit.f_hat.n}")
    print(f"k_hat: {fit.k_hat}")
    taus = fit.final_cps.taus
    print("change_points:", " ".join(str(t) for t in taus) if taus else "(none)")
    bounds = fit.final_cps.boundaries
    for k in range(fit.k_hat + 1):
        level = " ".join(f"{x:.6g}" for x in fit.f_hat.levels[k])
        print(f"segment {k + 1}: ({bounds[k]}, {bounds[k + 1]}]  level {level}")
    print("criterion:")
    for l, v in _curve_items(fit):
        print(f"  L={l}  {v:.6g}")


def _print_fit_json(fit: FitResult, spec: MethodSpec) -> None:
    doc = {
        "method": spec.label,
        "n": fit.f_hat.n,
        "k_hat": fit.k_hat,
        "change_points": list(fit.final_cps.taus),
        "levels": fit.f_hat.levels.tolist(),
        "criterion": {str(l): (v if math.isfinite(v) else None) for l, v in _curve_items(fit)},
    }
    print(json.dumps(doc, allow_nan=False))


def _print_fit_csv(fit: FitResult, spec: MethodSpec) -> None:
    w = csv.writer(sys.stdout)
    w.writerow(["field", "index", "value"])
    w.writerow(["method", "", spec.label])
    w.writerow(["n", "", fit.f_hat.n])
    w.writerow(["k_hat", "", fit.k_hat])
    for j, t in enumerate(fit.final_cps.taus, 1):
        w.writerow(["change_point", j, t])
    for k, row in enumerate(fit.f_hat.levels):
        for j, x in enumerate(row, 1):
            idx = f"{k}:{j}" if fit.f_hat.d > 1 else str(k)
            w.writerow(["level", idx, f"{float(x)!r}"])
    for l, v in _curve_items(fit):
        w.writerow(["criterion", l, f"{v!r}"])


def cmd_detect(args) -> int:
    try:
        series = read_series_csv(args.input, header=args.header)
    except (OSError, ValueError) as exc:
        print(f"cpcv: cannot read {args.input}: {exc}", file=sys.stderr)
        return 2
    try:
        spec = parse_method(args.method, default_folds=args.folds)
        if spec.kind == "cv1-vfold":
            spec = MethodSpec("cv1-vfold", args.folds)
        if args.kmax < 0:
            raise CpcvError(f"--kmax must be non-negative, got {args.kmax}")
        if args.kmax == 0:
            fit = _mean_only_fit(series, spec)
        else:
            fit = run_estimator(series, spec, args.kmax)
    except CpcvError as exc:
        print(f"cpcv: {exc}", file=sys.stderr)
        return 3
    if args.out == "json":
        _print_fit_json(fit, spec)
    elif args.out == "csv":
        _print_fit_csv(fit, spec)
    else:
        _print_fit_text(fit, spec)
    return 0


def _resolve_scenario(args, seed: int):
    if args.scenario:
        return get_scenario(args.scenario, seed=seed)
    common = {"n": args.n, "sigma": args.sigma, "seed": seed}
    if args.family == "underestimation":
        kw = dict(common, delta1=args.delta1, lam=args.lam, factor=args.factor)
        return scenario_underestimation(**{k: v for k, v in kw.items() if v is not None})
    if args.family == "overestimation":
        kw = dict(common, delta1=args.delta1, shift_even=args.shift_even)
        return scenario_overestimation(**{k: v for k, v in kw.items() if v is not None})
    if args.family == "bump":
        kw = dict(common, lam=args.lam, delta=args.delta)
        return scenario_bump(**{k: v for k, v in kw.items() if v is not None})
    raise CpcvError("pass --scenario NAME or --family with its parameters")


def cmd_simulate(args) -> int:
    seed = args.seed
    env = os.environ.get("CPCV_SEED")
    if env is not None:
        try:
            seed = int(env)
        except ValueError:
            print(f"cpcv: CPCV_SEED must be an integer, got {env!r}", file=sys.stderr)
            return 2
    try:
        scenario = _resolve_scenario(args, seed)
        methods = [parse_method(tok) for tok in args.methods.split(",") if tok.strip()]
        reports = run_simulation(scenario, methods, args.reps, args.kmax, workers=args.workers)
    except CpcvError as exc:
        print(f"cpcv: {exc}", file=sys.stderr)
        return 3
    if args.out == "-":
        write_report_csv(reports, sys.stdout)
    else:
        try:
            with open(args.out, "w", newline="") as fh:
                write_report_csv(reports, fh)
        except OSError as exc:
            print(f"cpcv: cannot write {args.out}: {exc}", file=sys.stderr)
            return 2
    return 0


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cpcv",
        description="Change-point detection with cross-validated selection of the number of changes.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("detect", help="fit change points to a CSV series")
    d.add_argument("input", help="CSV file, one row per design point, d numeric columns")
    d.add_argument(
        "--method",
        choices=("copps", "cv1", "cvmod", "cv1-vfold"),
        default="cv1-vfold",
        help="selection criterion (default cv1-vfold)",
    )
    d.add_argument("--folds", type=int, default=5, help="fold count for cv1-vfold (default 5)")
    d.add_argument(
        "--kmax",
        type=int,
        default=10,
        help="largest candidate change count (default 10; long block-style signals want 15)",
    )
    d.add_argument("--header", action="store_true", help="skip one header line")
    d.add_argument("--out", choices=("text", "json", "csv"), default="text")
    d.set_defaults(func=cmd_detect)

    s = sub.add_parser("simulate", help="run a Monte-Carlo scenario, emit a report table")
    s.add_argument("--scenario", help="catalog name, e.g. blocks or underestimation-D3")
    s.add_argument(
        "--family",
        choices=("underestimation", "overestimation", "bump"),
        help="parameterized scenario family (alternative to --scenario)",
    )
    s.add_argument(
        "--methods",
        default="cv1-vfold",
        help="comma-separated: copps, cv1, cvmod, cv1-vfold or cv1-vfoldV",
    )
    s.add_argument("--reps", type=int, required=True, help="replication count M")
    s.add_argument("--seed", type=int, default=0, help="master seed (CPCV_SEED overrides)")
    s.add_argument("--kmax", type=int, default=10, help="criterion grid upper end (default 10)")
    s.add_argument("--workers", type=int, default=1, help="worker processes (default 1)")
    s.add_argument("--out", default="-", help="report CSV path, - for stdout")
    s.add_argument("--n", type=int, help="series length (family scenarios)")
    s.add_argument("--sigma", type=float, help="noise scale (family scenarios)")
    s.add_argument("--delta1", type=float, help="base jump size (underestimation/overestimation)")
    s.add_argument("--lam", type=int, help="gap or bump width (underestimation/bump)")
    s.add_argument("--factor", type=float, help="second-jump multiplier (underestimation)")
    s.add_argument("--delta", type=float, help="bump height (bump)")
    s.add_argument("--shift-even", action="store_true", help="move the change to n/2 + 1 (overestimation)")
    s.set_defaults(func=cmd_simulate)
    return p


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
