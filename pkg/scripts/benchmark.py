#!/usr/bin/env python3
"""Time the solver and criterion stack on the long blocks layout."""

import argparse
import sys
import time

import numpy as np

from cpcv.criteria import two_fold_curves, vfold_criterion
from cpcv.folds import make_fold_plan
from cpcv.segmentation import build_cost_table, optimal_partition
from cpcv.signal import Series
from cpcv.simulate import generate, get_scenario


def timed(label, fn, repeats):
    best = min(_run_once(fn) for _ in range(repeats))
    print(f"{label:<42s} {best * 1e3:9.1f} ms")
    return best


def _run_once(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.strip())
    p.add_argument("--kmax", type=int, default=15)
    p.add_argument("--repeats", type=int, default=3, help="best-of count (default 3)")
    args = p.parse_args(argv)

    y = generate(get_scenario("blocks"), 0)
    print(f"series: n={y.n}, k_max={args.kmax}, best of {args.repeats}")

    timed("cost table (prefix sums)", lambda: build_cost_table(y), args.repeats)
    timed("optimal_partition, all L", lambda: optimal_partition(y, args.kmax), args.repeats)
    timed(
        "two-fold curves (cv2 + cv1 + cvmod)",
        lambda: two_fold_curves(y, args.kmax, ("cv2", "cv1", "cvmod")),
        args.repeats,
    )
    plan = make_fold_plan(y.n, 5)
    timed(
        "5-fold curve (abs loss)",
        lambda: vfold_criterion(y, plan, range(args.kmax + 1), loss="abs"),
        args.repeats,
    )

    rng = np.random.default_rng(0)
    small = Series(rng.standard_normal(202))
    timed("n=202: curves + refit equivalent", lambda: two_fold_curves(small, 10, ("cv2", "cv1")), args.repeats)
    return 0


if __name__ == "__main__":
    sys.exit(main())
