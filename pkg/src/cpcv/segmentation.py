"""Least-squares segmentation with a fixed number of change points.

The solver is the classic change-point-count dynamic program over prefix
sums: exact, O(L_max * n^2) time, O(L_max * n) working memory.  Penalized
or pruned variants are out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import LMaxTooLarge, TooLargeForOracle
from .signal import ChangePointSet, Series

__all__ = [
    "SegmentCostTable",
    "SegmentationResult",
    "build_cost_table",
    "segment_means",
    "optimal_partition",
    "brute_force_partition",
]

# a cost within this relative distance below zero is rounding noise
_NEG_TOL = 1e-9
# column-block width of the DP sweep; caps working memory at O(n * _BLOCK)
_BLOCK = 256


def _clamp_tiny_negative(val, scale):
    # Sum-of-squares minus squared-mean cancels catastrophically on
    # near-constant slices; snap those tiny negatives back to zero.
    tiny = (val < 0.0) & (val >= -_NEG_TOL * scale)
    return np.where(tiny, 0.0, val)


@dataclass(frozen=True, eq=False)
class SegmentCostTable:
    """Prefix sums supporting O(d) residual-sum-of-squares queries.

    ``prefix_sum[j]`` is the sum of the first j observations (row 0 zero),
    ``prefix_sumsq[j]`` the matching sum of squared Euclidean norms.  Both
    are accumulated in extended precision and rounded back to float64.
    """

    n: int
    d: int
    prefix_sum: np.ndarray
    prefix_sumsq: np.ndarray

    def cost(self, a, b):
        """RSS of the best constant fit on the slice (a, b], 0 <= a < b <= n.

        Accepts scalars or broadcastable integer arrays.
        """
        a = np.asarray(a, dtype=np.intp)
        b = np.asarray(b, dtype=np.intp)
        m = (b - a).astype(float)
        diff = self.prefix_sum[b] - self.prefix_sum[a]
        normsq = np.einsum("...j,...j->...", diff, diff)
        ss = self.prefix_sumsq[b] - self.prefix_sumsq[a]
        val = _clamp_tiny_negative(ss - normsq / m, ss)
        return float(val) if val.ndim == 0 else val


@dataclass(frozen=True, eq=False)
class SegmentationResult:
    """Optimal segmentations for every change-point count L = 0..l_max.

    ``change_points[L]`` minimizes the residual sum of squares over all
    placements of exactly L interior change points; ``costs[L]`` is that
    minimal value.
    """

    change_points: tuple[ChangePointSet, ...]
    costs: np.ndarray

    @property
    def l_max(self) -> int:
        return len(self.change_points) - 1


def build_cost_table(series: Series) -> SegmentCostTable:
    """Accumulate prefix sums of the observations and their squared norms."""
    y = series.data
    n, d = y.shape
    wide = y.astype(np.longdouble)
    ps = np.zeros((n + 1, d))
    ps[1:] = np.cumsum(wide, axis=0).astype(float)
    pss = np.zeros(n + 1)
    pss[1:] = np.cumsum((wide * wide).sum(axis=1)).astype(float)
    ps.setflags(write=False)
    pss.setflags(write=False)
    return SegmentCostTable(n=n, d=d, prefix_sum=ps, prefix_sumsq=pss)


def segment_means(table: SegmentCostTable, cps: ChangePointSet) -> np.ndarray:
    """Mean vector of every segment defined by ``cps``, shape (K+1, d)."""
    b = np.asarray(cps.boundaries)
    sums = table.prefix_sum[b[1:]] - table.prefix_sum[b[:-1]]
    return sums / np.diff(b)[:, None]


def optimal_partition(series: Series, l_max: int) -> SegmentationResult:
    """Exact least-squares segmentations for every L = 0..l_max in one sweep.

    Ties are broken toward the lexicographically smallest change-point
    vector.  A right-to-left backtrack fixes the last change point first,
    so the recursion runs over the reversed series and prefers the largest
    minimizing split; mirrored back, that is exactly the smallest vector.
    """
    n = series.n
    l_max = int(l_max)
    if not 0 <= l_max < n:
        raise LMaxTooLarge(f"l_max must lie in [0, n), got {l_max} with n={n}")

    table = build_cost_table(Series(series.data[::-1]))
    ps, pss = table.prefix_sum, table.prefix_sumsq

    best = np.full((l_max + 1, n + 1), np.inf)
    ptr = np.zeros((l_max + 1, n + 1), dtype=np.intp)
    best[0, 1:] = table.cost(0, np.arange(1, n + 1))

    if l_max > 0:
        for t0 in range(1, n + 1, _BLOCK):
            t1 = min(t0 + _BLOCK, n + 1)
            ts = np.arange(t0, t1)
            # split candidates in decreasing order, so the first argmin
            # occurrence is the largest minimizing split
            cand = np.arange(t1 - 2, -1, -1)
            m = ts[None, :] - cand[:, None]
            short = m <= 0
            mf = np.where(short, 1, m).astype(float)
            normsq = np.zeros((cand.size, ts.size))
            for j in range(table.d):
                dj = ps[ts, j][None, :] - ps[cand, j][:, None]
                normsq += dj * dj
            scale = pss[ts][None, :] - pss[cand][:, None]
            cb = _clamp_tiny_negative(scale - normsq / mf, scale)
            cb[short] = np.inf
            cols = np.arange(ts.size)
            for lev in range(1, l_max + 1):
                tot = best[lev - 1, cand][:, None] + cb
                pick = np.argmin(tot, axis=0)
                best[lev, t0:t1] = tot[pick, cols]
                ptr[lev, t0:t1] = cand[pick]

    sets = []
    for lev in range(l_max + 1):
        t = n
        mirrored = []
        for q in range(lev, 0, -1):
            t = int(ptr[q, t])
            mirrored.append(t)
        sets.append(ChangePointSet(n, tuple(sorted(n - x for x in mirrored))))
    return SegmentationResult(tuple(sets), best[:, n].copy())


def brute_force_partition(series: Series, n_changes: int) -> tuple[ChangePointSet, float]:
    """Exhaustive reference search over all change-point placements.

    Costs use independent two-pass segment arithmetic rather than the
    prefix table, and the first strict improvement in lexicographic
    enumeration order wins, matching optimal_partition's tie-break.
    """
    n = series.n
    if n > 20:
        raise TooLargeForOracle(f"exhaustive search is limited to n <= 20, got n={n}")
    n_changes = int(n_changes)
    if not 0 <= n_changes < n:
        raise LMaxTooLarge(f"cannot place {n_changes} change points in n={n}")
    y = series.data
    best_taus = None
    best_cost = np.inf
    for taus in combinations(range(1, n), n_changes):
        bounds = (0, *taus, n)
        c = 0.0
        for a, b in zip(bounds[:-1], bounds[1:]):
            seg = y[a:b]
            c += float(((seg - seg.mean(axis=0)) ** 2).sum())
        if c < best_cost:
            best_taus, best_cost = taus, c
    return ChangePointSet(n, best_taus), float(best_cost)
