"""End-to-end estimation: criterion curve, selected order, full-sample refit."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .criteria import CriterionCurve, select_k, two_fold_curves, vfold_criterion
from .errors import BadParams, LengthMismatch, SeriesTooShort
from .folds import drop_to_even, make_fold_plan
from .segmentation import build_cost_table, optimal_partition, segment_means
from .signal import ChangePointSet, PiecewiseSignal, Series, mean_matrix

__all__ = [
    "MethodSpec",
    "FitResult",
    "parse_method",
    "run_estimator",
    "evaluate_methods",
    "mise",
    "METHOD_KINDS",
]

METHOD_KINDS = ("copps", "cv1", "cvmod", "cv1-vfold")

# criterion behind each two-fold method name
_CRITERION_FOR = {"copps": "cv2", "cv1": "cv1", "cvmod": "cvmod"}


@dataclass(frozen=True)
class MethodSpec:
    """An estimation method: criterion kind plus fold count where relevant."""

    kind: str
    folds: int = 2

    def __post_init__(self):
        if self.kind not in METHOD_KINDS:
            raise BadParams(f"unknown method {self.kind!r}, expected one of {METHOD_KINDS}")
        if self.kind == "cv1-vfold" and self.folds < 2:
            raise BadParams(f"v-fold methods need at least 2 folds, got {self.folds}")

    @property
    def label(self) -> str:
        return f"cv1-vfold{self.folds}" if self.kind == "cv1-vfold" else self.kind


def parse_method(method, default_folds: int = 5) -> MethodSpec:
    """Normalize a method token.

    Accepts a MethodSpec, or one of "copps", "cv1", "cvmod", "cv1-vfold"
    (5 folds unless ``default_folds`` says otherwise), or "cv1-vfoldV"
    with an explicit fold count such as "cv1-vfold10".
    """
    if isinstance(method, MethodSpec):
        return method
    token = str(method).strip().lower()
    m = re.fullmatch(r"cv1-vfold(\d*)", token)
    if m:
        return MethodSpec("cv1-vfold", int(m.group(1)) if m.group(1) else default_folds)
    return MethodSpec(token)


@dataclass(frozen=True, eq=False)
class FitResult:
    """Selected model order, its change points, and the fitted step function.

    ``f_hat`` carries full-sample segment means on the (evened) grid the
    estimator actually used; ``curve`` is the criterion that chose k_hat.
    """

    k_hat: int
    final_cps: ChangePointSet
    f_hat: PiecewiseSignal
    curve: CriterionCurve


def evaluate_methods(series: Series, methods, k_max: int) -> list[FitResult]:
    """Fit several methods on one series, sharing work between them.

    All two-fold methods reuse one pair of half-series fits, v-fold
    methods with equal fold counts reuse one set of training fits, and the
    final refit runs a single dynamic program at the largest selected
    order.  Output order matches ``methods``.
    """
    specs = [parse_method(m) for m in methods]
    if not specs:
        raise BadParams("no methods given")
    k_max = int(k_max)
    if k_max < 1:
        raise BadParams(f"k_max must be at least 1, got {k_max}")
    s = drop_to_even(series)
    if s.n < 2 * (k_max + 1):
        raise SeriesTooShort(f"need n >= {2 * (k_max + 1)} for k_max={k_max}, got n={s.n}")

    wanted = tuple(dict.fromkeys(_CRITERION_FOR[sp.kind] for sp in specs if sp.kind in _CRITERION_FOR))
    shared = two_fold_curves(s, k_max, wanted) if wanted else {}
    vfold_cache: dict[int, CriterionCurve] = {}
    curves = []
    for sp in specs:
        if sp.kind in _CRITERION_FOR:
            curves.append(shared[_CRITERION_FOR[sp.kind]])
        else:
            if sp.folds not in vfold_cache:
                plan = make_fold_plan(s.n, sp.folds)
                vfold_cache[sp.folds] = vfold_criterion(s, plan, range(k_max + 1), loss="abs")
            curves.append(vfold_cache[sp.folds])

    k_hats = [int(select_k(c)) for c in curves]
    refit = optimal_partition(s, max(k_hats))
    table = build_cost_table(s)
    out = []
    for curve, k in zip(curves, k_hats):
        cps = refit.change_points[k]
        f_hat = PiecewiseSignal(cps, segment_means(table, cps))
        out.append(FitResult(k_hat=k, final_cps=cps, f_hat=f_hat, curve=curve))
    return out


def run_estimator(series: Series, method, k_max: int) -> FitResult:
    """Criterion curve over L = 0..k_max, argmin, then full-sample refit.

    The series is reduced to even length first so the odd/even split is
    well defined; k_max must satisfy n >= 2(k_max + 1) on the reduced
    grid.  With K-hat = 0 the fit is the global mean.
    """
    return evaluate_methods(series, [method], k_max)[0]


def mise(f_hat: PiecewiseSignal, f_true: PiecewiseSignal) -> float:
    """Integrated squared difference of two step functions on (0, 1].

    Both are constant on the cells ((i-1)/n, i/n], so the integral reduces
    to the average squared level gap over the grid, computed exactly.
    """
    if f_hat.n != f_true.n or f_hat.d != f_true.d:
        raise LengthMismatch(
            f"signals must share a grid, got (n={f_hat.n}, d={f_hat.d}) "
            f"vs (n={f_true.n}, d={f_true.d})"
        )
    diff = mean_matrix(f_hat) - mean_matrix(f_true)
    return float((diff * diff).sum() / f_hat.n)
