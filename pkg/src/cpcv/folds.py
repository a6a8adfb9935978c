"""Deterministic interleaved folds of the design grid.

Fold v of V holds every V-th index starting at v, so the time structure of
the series survives the split; shuffled folds are deliberately unsupported.
With V=2 the folds are exactly the odd- and even-indexed subsamples.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadFoldCount, InconsistentScales
from .signal import ChangePointSet, Series

__all__ = ["FoldPlan", "make_fold_plan", "remap_changepoints", "drop_to_even"]


@dataclass(frozen=True, eq=False)
class FoldPlan:
    """Holdout folds and their training complements, all 1-based and sorted.

    ``folds[v]`` is F_{v+1} = {v+1, v+1+V, v+1+2V, ...} and
    ``complements[v]`` the remaining indices in original order.
    """

    n: int
    n_folds: int
    folds: tuple[np.ndarray, ...]
    complements: tuple[np.ndarray, ...]


def make_fold_plan(n: int, n_folds: int) -> FoldPlan:
    n = int(n)
    n_folds = int(n_folds)
    if not 2 <= n_folds <= n // 2:
        raise BadFoldCount(f"fold count must lie in [2, n/2], got V={n_folds} with n={n}")
    grid = np.arange(1, n + 1)
    folds = []
    complements = []
    for v in range(n_folds):
        mask = (grid - 1) % n_folds == v
        f = grid[mask]
        c = grid[~mask]
        f.setflags(write=False)
        c.setflags(write=False)
        folds.append(f)
        complements.append(c)
    return FoldPlan(n, n_folds, tuple(folds), tuple(complements))


def remap_changepoints(train_cps: ChangePointSet, complement: np.ndarray, n: int) -> ChangePointSet:
    """Lift change points fitted on a training subsample back to the full grid.

    A change point at reduced position t becomes ``complement[t]`` (1-based
    lookup).  ``n`` is the full-grid length; it cannot be recovered from the
    complement because the final grid index may well sit in the holdout.
    """
    complement = np.asarray(complement)
    if train_cps.n != complement.size:
        raise InconsistentScales(
            f"change points live on a grid of {train_cps.n} points but the "
            f"complement holds {complement.size} indices"
        )
    taus = tuple(int(complement[t - 1]) for t in train_cps.taus)
    return ChangePointSet(int(n), taus)


def drop_to_even(series: Series) -> Series:
    """The series unchanged if n is even, else without its last design point."""
    if series.n % 2 == 0:
        return series
    return Series(series.data[:-1])
