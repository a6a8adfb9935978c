"""Monte-Carlo scenarios and the replication harness.

A Scenario bundles a true piecewise-constant signal with a noise model and
a master seed.  Each replication r derives an independent RNG stream from
(seed, r), so results are bit-identical whether replications run serially
or across worker processes.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from functools import partial

import numpy as np

from .errors import BadParams
from .pipeline import evaluate_methods, mise, parse_method
from .signal import ChangePointSet, PiecewiseSignal, Series, make_signal, mean_matrix

__all__ = [
    "NoiseModel",
    "Scenario",
    "SimulationReport",
    "NOISE_KINDS",
    "blocks_signal",
    "spike_signal",
    "scenario_underestimation",
    "scenario_overestimation",
    "scenario_bump",
    "scenario_catalog",
    "get_scenario",
    "with_seed",
    "generate",
    "replication_seed",
    "run_simulation",
    "write_report_csv",
]

NOISE_KINDS = (
    "gaussian",
    "student-t5",
    "centered-exp",
    "hetero-segments",
    "hetero-blocks32",
    "gaussian-poisson-outliers",
)

_HETERO_BLOCK = 32


@dataclass(frozen=True)
class NoiseModel:
    """Additive noise specification.

    kind "gaussian": iid N(0, sigma^2).
    kind "student-t5": iid t with 5 df, rescaled to standard deviation sigma.
    kind "centered-exp": iid sigma * (Exp(1) - 1), mean zero, sd sigma.
    kind "hetero-segments": N(0, s_k^2) with one s_k ~ U[low, high] drawn
        per true segment, fresh each replication.
    kind "hetero-blocks32": as above but one draw per block of 32
        consecutive points (the last block may be shorter).
    kind "gaussian-poisson-outliers": N(0, sigma^2) plus a Poisson(rate)
        shift added to ``outlier_count`` distinct positions drawn uniformly
        without replacement; univariate series only.
    """

    kind: str
    sigma: float = 1.0
    low: float = 3.0
    high: float = 11.0
    outlier_rate: float = 0.0
    outlier_count: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise BadParams(f"unknown noise kind {self.kind!r}, expected one of {NOISE_KINDS}")
        if not (math.isfinite(self.sigma) and self.sigma >= 0):
            raise BadParams(f"sigma must be finite and non-negative, got {self.sigma}")
        if not (math.isfinite(self.low) and math.isfinite(self.high) and 0 <= self.low <= self.high):
            raise BadParams(f"need 0 <= low <= high, got [{self.low}, {self.high}]")
        if not (math.isfinite(self.outlier_rate) and self.outlier_rate >= 0):
            raise BadParams(f"outlier rate must be finite and non-negative, got {self.outlier_rate}")
        if self.outlier_count < 0:
            raise BadParams(f"outlier count must be non-negative, got {self.outlier_count}")
        if self.seed < 0:
            raise BadParams(f"seed must be non-negative, got {self.seed}")


@dataclass(frozen=True)
class Scenario:
    """A named (signal, noise) pair to replicate."""

    name: str
    signal: PiecewiseSignal
    noise: NoiseModel

    @property
    def true_k(self) -> int:
        return self.signal.cps.count


def with_seed(scenario: Scenario, seed: int) -> Scenario:
    """The same scenario with a different master seed."""
    return replace(scenario, noise=replace(scenario.noise, seed=seed))


# Long test signals.  The spike layout places one change at the odd index
# 883; its shifted twin moves that change to 884 so it falls on the even
# half of the two-fold split.
_SPIKE_TAUS = (204, 470, 778, 878, 883, 894, 984, 1414, 1638, 1680, 1740)
_SPIKE_LEVELS = (-2.32, 15.98, 5.0, 20.0, 0.0, 70.0, 0.0, -15.0, -7.32, 8.42, -2.93, 4.76)
_BLOCKS_TAUS = (205, 267, 308, 472, 512, 820, 902, 1332, 1557, 1598, 1659)
_BLOCKS_LEVELS = (0.0, 14.64, -3.66, 7.32, -7.32, 10.98, -4.39, 3.29, 19.03, 7.68, 15.37, 0.0)


def blocks_signal(n: int = 2048) -> PiecewiseSignal:
    """Eleven-change step signal with segments of widely varying length."""
    return make_signal(ChangePointSet(n, _BLOCKS_TAUS), [[x] for x in _BLOCKS_LEVELS])


def spike_signal(n: int = 2048, shift_even: bool = False) -> PiecewiseSignal:
    """Step signal with a tall narrow spike (levels 0, 70, 0 over 11 points).

    The spike's left change sits at 883; with ``shift_even`` it moves to
    884, changing which half-sample sees the short segment.
    """
    taus = tuple(884 if t == 883 and shift_even else t for t in _SPIKE_TAUS)
    return make_signal(ChangePointSet(n, taus), [[x] for x in _SPIKE_LEVELS])


def scenario_underestimation(
    n: int = 202,
    delta1: float = 10.0,
    sigma: float = 1.0,
    lam: int = 5,
    factor: float = 3.0,
    seed: int = 0,
) -> Scenario:
    """Two nearby changes, the second ``factor`` times larger.

    Levels are (delta1, 0, factor*delta1) with changes at n/2 - lam and
    n/2.  Requires n even with n/2 odd and odd lam < n/4, which puts the
    small change at an even index and the large one at an odd index.
    """
    n, lam = int(n), int(lam)
    if n < 8 or n % 2 or (n // 2) % 2 == 0:
        raise BadParams(f"need even n >= 8 with n/2 odd, got n={n}")
    if lam % 2 == 0 or not 0 < lam < n / 4:
        raise BadParams(f"need odd lam in (0, n/4), got lam={lam}")
    if delta1 == 0 or not math.isfinite(delta1):
        raise BadParams(f"delta1 must be finite and nonzero, got {delta1}")
    if not (math.isfinite(factor) and factor > 0):
        raise BadParams(f"factor must be finite and positive, got {factor}")
    cps = ChangePointSet(n, (n // 2 - lam, n // 2))
    signal = make_signal(cps, [[delta1], [0.0], [factor * delta1]])
    return Scenario(f"underestimation-D{factor:g}", signal, NoiseModel("gaussian", sigma=sigma, seed=seed))


def scenario_overestimation(
    n: int = 202,
    delta1: float = 1.0,
    sigma: float = 1.0,
    shift_even: bool = False,
    seed: int = 0,
) -> Scenario:
    """One change of size ``delta1`` at n/2, or at n/2 + 1 with ``shift_even``."""
    n = int(n)
    if n < 4 or n % 2:
        raise BadParams(f"need even n >= 4, got n={n}")
    if delta1 == 0 or not math.isfinite(delta1):
        raise BadParams(f"delta1 must be finite and nonzero, got {delta1}")
    tau = n // 2 + (1 if shift_even else 0)
    signal = make_signal(ChangePointSet(n, (tau,)), [[0.0], [delta1]])
    name = "overestimation-" + ("even-" if shift_even else "") + f"sigma{sigma:g}"
    return Scenario(name, signal, NoiseModel("gaussian", sigma=sigma, seed=seed))


def scenario_bump(
    lam: int = 6,
    delta: float = 2.0,
    n: int = 200,
    sigma: float = 1.0,
    seed: int = 0,
) -> Scenario:
    """A centered bump of width ``lam`` and height ``delta`` on a flat signal."""
    n, lam = int(n), int(lam)
    if n < 4 or n % 2:
        raise BadParams(f"need even n >= 4, got n={n}")
    if lam % 2 or not 0 < lam < n / 2:
        raise BadParams(f"need even lam in (0, n/2), got lam={lam}")
    if delta == 0 or not math.isfinite(delta):
        raise BadParams(f"delta must be finite and nonzero, got {delta}")
    cps = ChangePointSet(n, ((n - lam) // 2, (n + lam) // 2))
    signal = make_signal(cps, [[0.0], [delta], [0.0]])
    return Scenario(f"bump-l{lam}-d{delta:g}", signal, NoiseModel("gaussian", sigma=sigma, seed=seed))


def scenario_catalog(seed: int = 0) -> list[Scenario]:
    """Every named study scenario with its exact parameters."""
    spike = spike_signal()
    spike_even = spike_signal(shift_even=True)
    blocks = blocks_signal()
    out = [
        Scenario("spike-odd", spike, NoiseModel("gaussian", sigma=7.0, seed=seed)),
        Scenario("spike-even", spike_even, NoiseModel("gaussian", sigma=7.0, seed=seed)),
        Scenario("blocks", blocks, NoiseModel("gaussian", sigma=7.0, seed=seed)),
        Scenario("blocks-t5", blocks, NoiseModel("student-t5", sigma=7.0, seed=seed)),
        Scenario("blocks-exp", blocks, NoiseModel("centered-exp", sigma=7.0, seed=seed)),
        Scenario("blocks-hetero-segments", blocks, NoiseModel("hetero-segments", seed=seed)),
        Scenario("blocks-hetero-blocks32", blocks, NoiseModel("hetero-blocks32", seed=seed)),
        Scenario(
            "blocks-outliers-20",
            blocks,
            NoiseModel("gaussian-poisson-outliers", sigma=7.0, outlier_rate=20.0, seed=seed),
        ),
        Scenario(
            "blocks-outliers-30",
            blocks,
            NoiseModel("gaussian-poisson-outliers", sigma=7.0, outlier_rate=30.0, seed=seed),
        ),
    ]
    for factor in (2.0, 3.0, 5.0):
        out.append(scenario_underestimation(factor=factor, seed=seed))
    for sigma in (1.0, 0.1, 0.01, 0.001, 0.0001):
        out.append(scenario_overestimation(sigma=sigma, seed=seed))
    out.append(scenario_overestimation(sigma=0.0001, shift_even=True, seed=seed))
    for lam, delta in ((6, 2.0), (6, 3.0), (6, 4.0), (8, 2.0), (12, 2.0), (20, 2.0)):
        out.append(scenario_bump(lam=lam, delta=delta, seed=seed))
    return out


def get_scenario(name: str, seed: int = 0) -> Scenario:
    """Look up a catalog scenario by name."""
    for sc in scenario_catalog(seed):
        if sc.name == name:
            return sc
    known = ", ".join(sc.name for sc in scenario_catalog(seed))
    raise BadParams(f"unknown scenario {name!r}; known: {known}")


def _rep_rng(seed: int, replication: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(replication,)))


def replication_seed(seed: int, replication: int) -> int:
    """The derived 64-bit stream fingerprint for one replication."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(int(replication),))
    return int(ss.generate_state(1, np.uint64)[0])


def _draw_noise(noise: NoiseModel, signal: PiecewiseSignal, rng: np.random.Generator) -> np.ndarray:
    n, d = signal.n, signal.d
    kind, sg = noise.kind, noise.sigma
    if kind == "gaussian":
        return rng.normal(0.0, sg, size=(n, d))
    if kind == "student-t5":
        # t with 5 df has sd sqrt(5/3); rescale to sd sigma
        return rng.standard_t(5, size=(n, d)) * (sg / math.sqrt(5.0 / 3.0))
    if kind == "centered-exp":
        # Exp(1) - 1 has mean 0 and unit sd
        return sg * (rng.exponential(1.0, size=(n, d)) - 1.0)
    if kind == "hetero-segments":
        # scales are drawn before the normals so both streams stay aligned
        sds = rng.uniform(noise.low, noise.high, size=signal.cps.count + 1)
        z = rng.standard_normal((n, d))
        return np.repeat(sds, signal.cps.segment_lengths())[:, None] * z
    if kind == "hetero-blocks32":
        n_blocks = -(-n // _HETERO_BLOCK)
        sds = rng.uniform(noise.low, noise.high, size=n_blocks)
        z = rng.standard_normal((n, d))
        return np.repeat(sds, _HETERO_BLOCK)[:n, None] * z
    if kind == "gaussian-poisson-outliers":
        if d != 1:
            raise BadParams("outlier contamination is defined for univariate series only")
        if noise.outlier_count > n:
            raise BadParams(f"cannot place {noise.outlier_count} outliers in {n} points")
        eps = rng.normal(0.0, sg, size=(n, d))
        idx = rng.choice(n, size=noise.outlier_count, replace=False)
        eps[idx, 0] += rng.poisson(noise.outlier_rate, size=noise.outlier_count)
        return eps
    raise BadParams(f"unknown noise kind {kind!r}")


def generate(scenario: Scenario, replication: int) -> Series:
    """Draw one replication of the scenario, deterministic in its index."""
    replication = int(replication)
    if replication < 0:
        raise BadParams(f"replication index must be non-negative, got {replication}")
    rng = _rep_rng(scenario.noise.seed, replication)
    mu = mean_matrix(scenario.signal)
    return Series(mu + _draw_noise(scenario.noise, scenario.signal, rng))


@dataclass(frozen=True)
class SimulationReport:
    """Aggregated order classification and risk for one method."""

    method: str
    m_reps: int
    under: int
    correct: int
    over: int
    mise_mean: float
    rep_seeds: tuple[int, ...]

    @property
    def pct_under(self) -> float:
        return 100.0 * self.under / self.m_reps

    @property
    def pct_correct(self) -> float:
        return 100.0 * self.correct / self.m_reps

    @property
    def pct_over(self) -> float:
        return 100.0 * self.over / self.m_reps


def _one_replication(replication, scenario, specs, k_max):
    y = generate(scenario, replication)
    fits = evaluate_methods(y, specs, k_max)
    return [(fit.k_hat, mise(fit.f_hat, scenario.signal)) for fit in fits]


def run_simulation(scenario: Scenario, methods, m_reps: int, k_max: int, workers: int = 1) -> list[SimulationReport]:
    """M replications of every method on one scenario.

    Results do not depend on ``workers``: each replication owns an RNG
    stream derived from (scenario seed, replication index), and reports
    aggregate in replication order.  The scenario length must be even so
    the fitted and true signals share a grid.
    """
    m_reps = int(m_reps)
    if m_reps < 1:
        raise BadParams(f"need at least one replication, got M={m_reps}")
    if scenario.signal.n % 2:
        raise BadParams("scenario length must be even so fits and truth share a grid")
    specs = [parse_method(m) for m in methods]
    if not specs:
        raise BadParams("no methods given")

    task = partial(_one_replication, scenario=scenario, specs=specs, k_max=k_max)
    if workers > 1:
        chunk = max(1, m_reps // (8 * workers))
        with ProcessPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(task, range(m_reps), chunksize=chunk))
    else:
        rows = [task(r) for r in range(m_reps)]

    true_k = scenario.true_k
    seeds = tuple(replication_seed(scenario.noise.seed, r) for r in range(m_reps))
    reports = []
    for j, sp in enumerate(specs):
        k_hats = [row[j][0] for row in rows]
        under = sum(1 for k in k_hats if k < true_k)
        over = sum(1 for k in k_hats if k > true_k)
        mise_mean = float(np.mean([row[j][1] for row in rows]))
        reports.append(
            SimulationReport(
                method=sp.label,
                m_reps=m_reps,
                under=under,
                correct=m_reps - under - over,
                over=over,
                mise_mean=mise_mean,
                rep_seeds=seeds,
            )
        )
    return reports


def write_report_csv(reports, fh) -> None:
    """Write reports as CSV: method, M, pct_under, pct_correct, pct_over, mise."""
    w = csv.writer(fh)
    w.writerow(["method", "M", "pct_under", "pct_correct", "pct_over", "mise"])
    for r in reports:
        w.writerow(
            [
                r.method,
                r.m_reps,
                f"{r.pct_under:.2f}",
                f"{r.pct_correct:.2f}",
                f"{r.pct_over:.2f}",
                f"{r.mise_mean:.4g}",
            ]
        )
