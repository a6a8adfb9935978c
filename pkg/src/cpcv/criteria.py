"""Cross-validation criteria for choosing the number of change points.

The two-fold criteria split a series of even length into the odd- and
even-indexed halves, fit each half by optimal partitioning with L change
points, and score each half's segment means against the other half:

* ``cv2``   squared Euclidean prediction error (the COPPS criterion);
* ``cv1``   Euclidean-norm (absolute, for d=1) prediction error, with
  held-out points assigned to training segments by their position on the
  full interleaved grid;
* ``cvmod`` squared error with one holdout point per fitted segment
  withheld (the last on the odd-fit pass, the first on the even-fit pass)
  and each segment sum rescaled by m/(m-1).

``vfold_criterion`` generalizes to V interleaved folds and to arbitrary
fitting procedures; with V=2, ABS loss and the default fitter it
reproduces ``cv1`` exactly.  Criterion values at infeasible candidates are
+inf, never an error, so selection can proceed over the rest of the grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .errors import (
    AllInfeasible,
    BadGrid,
    BadParams,
    InconsistentScales,
    LInfeasible,
    OddLength,
)
from .folds import FoldPlan, remap_changepoints
from .segmentation import build_cost_table, optimal_partition, segment_means
from .signal import ChangePointSet, Series

__all__ = [
    "CriterionCurve",
    "FoldFit",
    "cv2",
    "cv1",
    "cvmod",
    "two_fold_curves",
    "vfold_criterion",
    "select_k",
    "TWO_FOLD_METHODS",
]

TWO_FOLD_METHODS = ("cv2", "cv1", "cvmod")


@dataclass(frozen=True, eq=False)
class CriterionCurve:
    """Criterion values over a grid of candidates; treat as read-only.

    ``values`` maps each candidate change-point count (or tuning value) to
    its criterion value, with +inf marking infeasible candidates.
    """

    method: str
    values: dict
    k_max: int | None = None


@dataclass(frozen=True, eq=False)
class FoldFit:
    """One fold's fit at one tuning value.

    ``cps`` holds the change points remapped to the full grid; ``levels``
    the training segment means (or whatever levels the fitter returned).
    """

    fold: int
    psi: object
    cps: ChangePointSet
    levels: np.ndarray


def _split_halves(series: Series) -> tuple[Series, Series]:
    if series.n % 2:
        raise OddLength(f"two-fold criteria need even length, got n={series.n}")
    return Series(series.data[0::2]), Series(series.data[1::2])


def _sq_pass(holdout: np.ndarray, bounds, means) -> float:
    total = 0.0
    for l in range(len(bounds) - 1):
        r = holdout[bounds[l] : bounds[l + 1]] - means[l]
        total += float((r * r).sum())
    return total


def _abs_pass(holdout: np.ndarray, bounds, means) -> float:
    total = 0.0
    for l in range(len(bounds) - 1):
        r = holdout[bounds[l] : bounds[l + 1]] - means[l]
        total += float(np.sqrt((r * r).sum(axis=1)).sum())
    return total


def _mod_pass(holdout: np.ndarray, bounds, means, drop_first: bool) -> float:
    # One holdout point per segment is withheld; m/(m-1) compensates.
    total = 0.0
    for l in range(len(bounds) - 1):
        a, b = bounds[l], bounds[l + 1]
        rows = holdout[a + 1 : b] if drop_first else holdout[a : b - 1]
        r = rows - means[l]
        total += (b - a) / (b - a - 1.0) * float((r * r).sum())
    return total


def _pair_value(method, odd_data, even_data, odd_cps, odd_means, even_cps, even_means):
    # First the odd-fit pass scoring the even half, then the mirrored pass.
    if method == "cv2":
        return _sq_pass(even_data, odd_cps.boundaries, odd_means) + _sq_pass(
            odd_data, even_cps.boundaries, even_means
        )
    if method == "cv1":
        # Holdout points keep their place on the interleaved grid: an even
        # point landing exactly on an odd-fit cut belongs to the segment on
        # its right, so interior bounds shift down one slot on this pass.
        shifted = (0, *(t - 1 for t in odd_cps.taus), odd_cps.n)
        return _abs_pass(even_data, shifted, odd_means) + _abs_pass(
            odd_data, even_cps.boundaries, even_means
        )
    if method == "cvmod":
        if min(odd_cps.segment_lengths().min(), even_cps.segment_lengths().min()) < 2:
            return math.inf
        return _mod_pass(even_data, odd_cps.boundaries, odd_means, drop_first=False) + _mod_pass(
            odd_data, even_cps.boundaries, even_means, drop_first=True
        )
    raise BadParams(f"unknown two-fold criterion {method!r}")


def two_fold_curves(series: Series, k_max: int, methods: Iterable[str] = ("cv2",)) -> dict:
    """Curves over L = 0..k_max for several two-fold criteria at once.

    The half-series fits are shared across criteria, which is what makes
    simulation sweeps over multiple methods affordable.
    """
    methods = tuple(methods)
    for m in methods:
        if m not in TWO_FOLD_METHODS:
            raise BadParams(f"unknown two-fold criterion {m!r}")
    if series.n % 2:
        raise OddLength(f"two-fold criteria need even length, got n={series.n}")
    half = series.n // 2
    k_max = int(k_max)
    if not 0 <= k_max < half:
        raise LInfeasible(
            f"candidate counts must stay below n/2 = {half}, got k_max={k_max}"
        )
    odd, even = _split_halves(series)
    odd_fit = optimal_partition(odd, k_max)
    even_fit = optimal_partition(even, k_max)
    odd_table = build_cost_table(odd)
    even_table = build_cost_table(even)
    odd_means = [segment_means(odd_table, c) for c in odd_fit.change_points]
    even_means = [segment_means(even_table, c) for c in even_fit.change_points]

    curves = {}
    for m in methods:
        vals = {
            l: _pair_value(
                m,
                odd.data,
                even.data,
                odd_fit.change_points[l],
                odd_means[l],
                even_fit.change_points[l],
                even_means[l],
            )
            for l in range(k_max + 1)
        }
        curves[m] = CriterionCurve(m, vals, k_max)
    return curves


def _two_fold_value(series: Series, l: int, method: str) -> float:
    return two_fold_curves(series, l, (method,))[method].values[int(l)]


def cv2(series: Series, l: int) -> float:
    """Squared-error two-fold criterion at L = l change points."""
    return _two_fold_value(series, l, "cv2")


def cv1(series: Series, l: int) -> float:
    """Absolute-error (Euclidean-norm) two-fold criterion at L = l.

    Matches ``vfold_criterion`` with two folds and ABS loss: each held-out
    point is scored against the training segment that covers its position
    on the full interleaved grid.
    """
    return _two_fold_value(series, l, "cv1")


def cvmod(series: Series, l: int) -> float:
    """Modified squared-error two-fold criterion at L = l.

    +inf when either half's fitted segmentation has a segment shorter
    than 2, the point at which the correction is undefined.
    """
    return _two_fold_value(series, l, "cvmod")


def _fold_pass(hold: np.ndarray, fold: np.ndarray, fit: FoldFit, loss: str) -> float:
    bounds = fit.cps.boundaries
    total = 0.0
    for k in range(len(bounds) - 1):
        hi = int(np.searchsorted(fold, bounds[k + 1], side="right"))
        if loss == "abs":
            lo = int(np.searchsorted(fold, bounds[k], side="right"))
            r = hold[lo:hi] - fit.levels[k]
            total += float(np.sqrt((r * r).sum(axis=1)).sum())
        else:
            # skip any holdout index equal to tau_k + 1
            lo = int(np.searchsorted(fold, bounds[k] + 1, side="right"))
            m = bounds[k + 1] - bounds[k]
            r = hold[lo:hi] - fit.levels[k]
            total += m / (m - 1.0) * float((r * r).sum())
    return total


def vfold_criterion(
    series: Series,
    plan: FoldPlan,
    psi_grid: Iterable,
    fitter: Callable | None = None,
    loss: str = "abs",
) -> CriterionCurve:
    """Generalized V-fold criterion over a grid of tuning values.

    For each psi and fold, fit on the complement via
    ``fitter(train_series, psi) -> (taus, levels)`` (default: optimal
    partitioning with psi change points and training segment means), remap
    the change points to the full grid, and score each held-out point
    against its training segment level.  ABS sums Euclidean error norms;
    MODSQ sums squared errors skipping the first holdout index after every
    training change point, rescaled by m/(m-1), and requires every fitted
    segment to span at least 2(V-1) grid points, yielding +inf otherwise.
    """
    if loss not in ("abs", "modsq"):
        raise BadParams(f"loss must be 'abs' or 'modsq', got {loss!r}")
    if plan.n != series.n:
        raise InconsistentScales(f"plan covers n={plan.n} but series has n={series.n}")
    psis = list(psi_grid)
    if not psis:
        raise BadGrid("empty grid of tuning values")
    if len(set(psis)) != len(psis):
        raise BadGrid("duplicate tuning values in grid")
    if fitter is None:
        for p in psis:
            if int(p) != p or p < 0:
                raise BadGrid(f"default fitter needs non-negative integer counts, got {p!r}")
        psis = [int(p) for p in psis]

    data = series.data
    n = series.n
    min_len = 2 * (plan.n_folds - 1)

    fits: list[dict] = []
    for v, comp in enumerate(plan.complements):
        train = Series(data[comp - 1])
        per_psi: dict = {}
        if fitter is None:
            table = build_cost_table(train)
            cap = train.n - 1
            feasible = [p for p in psis if p <= cap]
            if feasible:
                res = optimal_partition(train, max(feasible))
            for p in feasible:
                rcps = res.change_points[p]
                per_psi[p] = FoldFit(
                    fold=v + 1,
                    psi=p,
                    cps=remap_changepoints(rcps, comp, n),
                    levels=segment_means(table, rcps),
                )
        else:
            for p in psis:
                taus, levels = fitter(train, p)
                rcps = ChangePointSet(train.n, tuple(taus))
                lv = np.asarray(levels, dtype=float)
                if lv.ndim == 1:
                    lv = lv[:, None]
                if lv.shape != (rcps.count + 1, series.d):
                    raise BadParams(
                        f"fitter returned levels of shape {lv.shape}, "
                        f"expected {(rcps.count + 1, series.d)}"
                    )
                per_psi[p] = FoldFit(
                    fold=v + 1, psi=p, cps=remap_changepoints(rcps, comp, n), levels=lv
                )
        fits.append(per_psi)

    holds = [data[f - 1] for f in plan.folds]
    values = {}
    for p in psis:
        total = 0.0
        for v in range(plan.n_folds):
            fit = fits[v].get(p)
            if fit is None:
                total = math.inf
                break
            if loss == "modsq" and fit.cps.segment_lengths().min() < min_len:
                total = math.inf
                break
            total += _fold_pass(holds[v], plan.folds[v], fit, loss)
        values[p] = total

    ints = all(isinstance(p, (int, np.integer)) for p in psis)
    return CriterionCurve(
        method="cv1-vfold" if loss == "abs" else "cvmod-vfold",
        values=values,
        k_max=max(psis) if ints else None,
    )


def select_k(curve: CriterionCurve):
    """Argmin over the curve, ties toward the smallest candidate."""
    best_psi = None
    best = math.inf
    for psi in sorted(curve.values):
        val = curve.values[psi]
        if val < best:
            best_psi, best = psi, val
    if best_psi is None:
        raise AllInfeasible(f"no finite value on the {curve.method} curve")
    return best_psi
