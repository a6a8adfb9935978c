#!/usr/bin/env python3
"""Run the Monte-Carlo study tables at desk scale and write one CSV each.

Groups:
  underestimation   two close jumps, second one D times larger (D = 2, 3, 5)
  overestimation    one faint jump at n/2 or n/2 + 1, sigma swept down to 1e-4
  long-signals      spike and blocks layouts (n = 2048), gaussian noise
  robustness        blocks layout under heavy tails, skew, heteroscedasticity,
                    and Poisson outliers
  bump              a short centered bump, width and height swept

Replication counts default to desk scale; pass --reps to change them.
Results are deterministic in --seed regardless of --workers.
"""

import argparse
import sys
import time
from pathlib import Path

from cpcv.simulate import get_scenario, run_simulation, write_report_csv

GROUPS = {
    "underestimation": (
        ["underestimation-D2", "underestimation-D3", "underestimation-D5"],
        ("copps", "cv1", "cvmod"),
        10,
    ),
    "overestimation": (
        [
            "overestimation-sigma1",
            "overestimation-sigma0.1",
            "overestimation-sigma0.01",
            "overestimation-sigma0.001",
            "overestimation-sigma0.0001",
            "overestimation-even-sigma0.0001",
        ],
        ("copps", "cv1"),
        10,
    ),
    "long-signals": (
        ["spike-odd", "spike-even", "blocks"],
        ("copps", "cv1-vfold5"),
        15,
    ),
    "robustness": (
        [
            "blocks-t5",
            "blocks-exp",
            "blocks-hetero-segments",
            "blocks-hetero-blocks32",
            "blocks-outliers-20",
            "blocks-outliers-30",
        ],
        ("cv1-vfold5",),
        15,
    ),
    "bump": (
        ["bump-l6-d2", "bump-l6-d3", "bump-l6-d4", "bump-l8-d2", "bump-l12-d2", "bump-l20-d2"],
        ("copps", "cv1"),
        10,
    ),
}


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--groups", default="all", help="comma-separated group names, or 'all'")
    p.add_argument("--reps", type=int, default=100, help="replications per scenario (default 100)")
    p.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    p.add_argument("--workers", type=int, default=1, help="worker processes (default 1)")
    p.add_argument("--kmax", type=int, help="override the per-group criterion grid upper end")
    p.add_argument("--out-dir", default="tables", help="output directory (default ./tables)")
    args = p.parse_args(argv)

    wanted = list(GROUPS) if args.groups == "all" else args.groups.split(",")
    unknown = [g for g in wanted if g not in GROUPS]
    if unknown:
        p.error(f"unknown groups {unknown}; available: {', '.join(GROUPS)}")

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for group in wanted:
        names, methods, kmax = GROUPS[group]
        kmax = args.kmax or kmax
        for name in names:
            t0 = time.perf_counter()
            scenario = get_scenario(name, seed=args.seed)
            reports = run_simulation(scenario, methods, args.reps, kmax, workers=args.workers)
            dest = out_dir / f"{name}.csv"
            with open(dest, "w", newline="") as fh:
                write_report_csv(reports, fh)
            took = time.perf_counter() - t0
            summary = "  ".join(
                f"{r.method} {r.pct_correct:.0f}% mise={r.mise_mean:.3g}" for r in reports
            )
            print(f"[{group}] {name}: {summary}  ({took:.1f}s) -> {dest}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
