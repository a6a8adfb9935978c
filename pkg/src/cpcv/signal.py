"""Piecewise-constant mean signals observed on a 1-based design grid.

A signal with change points 0 < tau_1 < ... < tau_K < n takes the value
``levels[k]`` at every index i with tau_k < i <= tau_{k+1}, where tau_0 = 0
and tau_{K+1} = n.  All public interfaces use this 1-based convention;
0-based row offsets stay internal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    AdjacentLevelsEqual,
    BadChangePoints,
    BadParams,
    IndexOutOfRange,
)

__all__ = [
    "ChangePointSet",
    "PiecewiseSignal",
    "Series",
    "make_signal",
    "evaluate_mean",
    "mean_matrix",
    "read_series_csv",
]


@dataclass(frozen=True)
class ChangePointSet:
    """Interior change-point locations on a grid of length ``n``.

    ``taus`` must be strictly increasing integers in the open interval
    (0, n).  An empty tuple means a single segment covering the whole grid.
    """

    n: int
    taus: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "taus", tuple(int(t) for t in self.taus))
        if self.n < 1:
            raise BadChangePoints(f"series length must be positive, got n={self.n}")
        prev = 0
        for t in self.taus:
            if not prev < t < self.n:
                raise BadChangePoints(
                    f"change points must satisfy 0 < tau_1 < ... < tau_L < n, "
                    f"got {self.taus} with n={self.n}"
                )
            prev = t

    @property
    def count(self) -> int:
        return len(self.taus)

    @property
    def boundaries(self) -> tuple[int, ...]:
        """(0, tau_1, ..., tau_L, n); segment l spans (boundaries[l], boundaries[l+1]]."""
        return (0, *self.taus, self.n)

    def segment_lengths(self) -> np.ndarray:
        return np.diff(np.asarray(self.boundaries))


@dataclass(frozen=True, eq=False)
class PiecewiseSignal:
    """A step function: change points plus one level vector per segment.

    ``levels`` has shape (K+1, d).  Construct via :func:`make_signal` to get
    the adjacent-level check; direct construction skips it (fitted means may
    legitimately tie).
    """

    cps: ChangePointSet
    levels: np.ndarray

    def __post_init__(self):
        lv = np.array(self.levels, dtype=float)
        if lv.ndim == 1:
            lv = lv[:, None]
        if lv.ndim != 2 or lv.shape[0] != self.cps.count + 1:
            raise BadChangePoints(
                f"need {self.cps.count + 1} level vectors for "
                f"{self.cps.count} change points, got shape {lv.shape}"
            )
        lv.setflags(write=False)
        object.__setattr__(self, "levels", lv)

    @property
    def n(self) -> int:
        return self.cps.n

    @property
    def d(self) -> int:
        return self.levels.shape[1]


@dataclass(frozen=True, eq=False)
class Series:
    """Observations on the design grid; row i-1 holds Y_i in R^d.

    The data matrix is copied and frozen at construction, so instances are
    immutable and safe to share.
    """

    data: np.ndarray

    def __post_init__(self):
        a = np.array(self.data, dtype=float)
        if a.ndim == 1:
            a = a[:, None]
        if a.ndim != 2:
            raise BadParams(f"observations must form an n x d matrix, got ndim={a.ndim}")
        if a.shape[0] < 2:
            raise BadParams(f"need at least two observations, got n={a.shape[0]}")
        if a.shape[1] < 1:
            raise BadParams("need at least one coordinate per observation")
        if not np.all(np.isfinite(a)):
            raise BadParams("observations must be finite")
        a.setflags(write=False)
        object.__setattr__(self, "data", a)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def d(self) -> int:
        return self.data.shape[1]


def make_signal(cps: ChangePointSet, levels: Sequence | np.ndarray) -> PiecewiseSignal:
    """Build a validated signal, rejecting levels that do not change at a tau."""
    sig = PiecewiseSignal(cps, np.asarray(levels, dtype=float))
    lv = sig.levels
    for k in range(1, lv.shape[0]):
        if np.array_equal(lv[k], lv[k - 1]):
            raise AdjacentLevelsEqual(
                f"levels {k - 1} and {k} are equal ({lv[k]}); drop tau_{k} instead"
            )
    return sig


def evaluate_mean(signal: PiecewiseSignal, i: int) -> np.ndarray:
    """Mean vector at design index i (1-based): levels[k] for tau_k < i <= tau_{k+1}."""
    i = int(i)
    if not 1 <= i <= signal.n:
        raise IndexOutOfRange(f"index {i} outside 1..{signal.n}")
    k = int(np.searchsorted(np.asarray(signal.cps.taus), i, side="left"))
    return signal.levels[k]


def mean_matrix(signal: PiecewiseSignal) -> np.ndarray:
    """The full (n, d) mean matrix, one row per design point."""
    return np.repeat(signal.levels, signal.cps.segment_lengths(), axis=0)


def read_series_csv(path, header: bool = False) -> Series:
    """Load a series from CSV: one row per design point, d numeric columns."""
    data = np.loadtxt(path, delimiter=",", skiprows=1 if header else 0, ndmin=2)
    return Series(data)
