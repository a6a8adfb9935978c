"""Cost-table arithmetic and the exact segmentation solver."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cpcv.errors import LMaxTooLarge, TooLargeForOracle
from cpcv.segmentation import (
    brute_force_partition,
    build_cost_table,
    optimal_partition,
    segment_means,
)
from cpcv.signal import ChangePointSet, Series


def _two_pass_rss(rows):
    seg = np.asarray(rows, dtype=float)
    if seg.ndim == 1:
        seg = seg[:, None]
    return float(((seg - seg.mean(axis=0)) ** 2).sum())


def test_cost_small_example():
    table = build_cost_table(Series([1.0, 2.0, 3.0]))
    assert table.cost(0, 3) == pytest.approx(2.0)
    assert table.cost(0, 1) == pytest.approx(0.0)
    assert table.cost(1, 3) == pytest.approx(0.5)


def test_cost_constant_slices_are_zero():
    table = build_cost_table(Series([4.0] * 9))
    for a in range(9):
        for b in range(a + 1, 10):
            assert table.cost(a, b) == 0.0


def test_cost_matches_two_pass_rss():
    rng = np.random.default_rng(5)
    y = rng.standard_normal(50)
    table = build_cost_table(Series(y))
    full = table.cost(0, 50)
    assert full == pytest.approx(_two_pass_rss(y), rel=1e-9)
    for a, b in ((0, 7), (3, 31), (20, 50)):
        assert table.cost(a, b) == pytest.approx(_two_pass_rss(y[a:b]), rel=1e-9)


def test_cost_broadcasts_like_scalar_calls():
    rng = np.random.default_rng(6)
    table = build_cost_table(Series(rng.standard_normal((30, 2))))
    a = np.array([0, 3, 11])
    b = np.array([5, 20, 30])
    vec = table.cost(a, b)
    assert vec.shape == (3,)
    for j in range(3):
        assert vec[j] == table.cost(int(a[j]), int(b[j]))


def test_cost_never_negative_under_cancellation():
    # large offset makes the sum-of-squares formula cancel catastrophically
    rng = np.random.default_rng(7)
    y = 1e8 + 1e-4 * rng.standard_normal(64)
    table = build_cost_table(Series(y))
    for a in range(0, 60, 7):
        for b in range(a + 1, 65, 5):
            assert table.cost(a, b) >= 0.0


def test_segment_means_match_two_pass():
    rng = np.random.default_rng(8)
    y = rng.standard_normal((20, 2))
    table = build_cost_table(Series(y))
    cps = ChangePointSet(20, (4, 11))
    means = segment_means(table, cps)
    for k, (a, b) in enumerate(((0, 4), (4, 11), (11, 20))):
        assert means[k] == pytest.approx(y[a:b].mean(axis=0), rel=1e-12)


def test_optimal_partition_recovers_clean_step():
    res = optimal_partition(Series([0.0, 0.0, 0.0, 5.0, 5.0, 5.0]), 1)
    assert res.change_points[1].taus == (3,)
    assert res.costs[1] == pytest.approx(0.0, abs=1e-12)


def test_optimal_partition_constant_series():
    res = optimal_partition(Series([1.0, 1.0, 1.0, 1.0]), 0)
    assert res.change_points[0].taus == ()
    assert res.costs[0] == pytest.approx(0.0, abs=1e-12)


def test_optimal_partition_matches_exhaustive_on_uniforms():
    rng = np.random.default_rng(9)
    s = Series(rng.uniform(size=10))
    res = optimal_partition(s, 2)
    taus, cost = brute_force_partition(s, 2)
    assert res.change_points[2].taus == taus.taus
    assert res.costs[2] == pytest.approx(cost, rel=1e-9)


def test_tie_break_prefers_lexicographically_smallest():
    # every zero-cost placement of the spare cut ties; the smallest wins
    res = optimal_partition(Series([0.0, 0.0, 0.0, 5.0, 5.0, 5.0]), 2)
    assert res.change_points[2].taus == (1, 3)
    bf_taus, bf_cost = brute_force_partition(Series([0.0, 0.0, 0.0, 5.0, 5.0, 5.0]), 2)
    assert bf_taus.taus == (1, 3)
    assert bf_cost == pytest.approx(0.0, abs=1e-12)

    const = Series([2.0] * 7)
    res = optimal_partition(const, 3)
    assert res.change_points[3].taus == (1, 2, 3)
    assert brute_force_partition(const, 3)[0].taus == (1, 2, 3)


def test_brute_force_small_step():
    taus, cost = brute_force_partition(Series([0.0, 0.0, 5.0, 5.0]), 1)
    assert taus.taus == (2,)
    assert cost == pytest.approx(0.0, abs=1e-12)


def test_brute_force_guards():
    with pytest.raises(TooLargeForOracle):
        brute_force_partition(Series(np.zeros(21)), 1)
    with pytest.raises(LMaxTooLarge):
        brute_force_partition(Series(np.zeros(6)), 6)
    with pytest.raises(LMaxTooLarge):
        brute_force_partition(Series(np.zeros(6)), -1)


def test_optimal_partition_guards():
    with pytest.raises(LMaxTooLarge):
        optimal_partition(Series(np.zeros(6)), 6)
    with pytest.raises(LMaxTooLarge):
        optimal_partition(Series(np.zeros(6)), -1)


@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 12), l_max=st.integers(0, 3))
def test_dp_matches_exhaustive(seed, n, l_max):
    l_max = min(l_max, n - 1)
    rng = np.random.default_rng(seed)
    s = Series(rng.standard_normal(n))
    res = optimal_partition(s, l_max)
    for l in range(l_max + 1):
        taus, cost = brute_force_partition(s, l)
        assert res.change_points[l].taus == taus.taus
        assert res.costs[l] == pytest.approx(cost, rel=1e-9, abs=1e-12)


@given(seed=st.integers(0, 2**32 - 1), n=st.integers(4, 11))
@settings(max_examples=30)
def test_dp_matches_exhaustive_multivariate(seed, n):
    rng = np.random.default_rng(seed)
    s = Series(rng.standard_normal((n, 2)))
    res = optimal_partition(s, 2)
    for l in range(3):
        taus, cost = brute_force_partition(s, l)
        assert res.change_points[l].taus == taus.taus
        assert res.costs[l] == pytest.approx(cost, rel=1e-9, abs=1e-12)


@given(seed=st.integers(0, 2**32 - 1), n=st.integers(6, 40))
def test_costs_non_increasing_and_counts_exact(seed, n):
    rng = np.random.default_rng(seed)
    l_max = min(6, n - 1)
    res = optimal_partition(Series(rng.standard_normal(n)), l_max)
    assert res.l_max == l_max
    for l in range(l_max + 1):
        assert res.change_points[l].count == l
    assert np.all(np.diff(res.costs) <= 1e-12)


@given(
    seed=st.integers(0, 2**32 - 1),
    scale=st.sampled_from([0.25, 0.5, 2.0, 3.7, 8.0]),
    shift=st.sampled_from([-12.0, -1.5, 0.0, 2.25, 40.0]),
)
def test_argmin_unchanged_by_affine_recoding(seed, scale, shift):
    rng = np.random.default_rng(seed)
    y = rng.standard_normal(24)
    base = optimal_partition(Series(y), 4)
    moved = optimal_partition(Series(scale * y + shift), 4)
    for l in range(5):
        assert base.change_points[l].taus == moved.change_points[l].taus


@given(seed=st.integers(0, 2**32 - 1), k=st.integers(0, 4))
def test_exact_recovery_at_zero_noise(seed, k):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(max(k + 1, 2), 30))
    taus = tuple(sorted(rng.choice(np.arange(1, n), size=k, replace=False).tolist()))
    bounds = (0, *taus, n)
    levels = []
    prev = None
    for _ in range(k + 1):
        x = float(rng.uniform(-5, 5))
        if prev is not None and abs(x - prev) < 0.5:
            x = prev + 1.0
        levels.append(x)
        prev = x
    mu = np.repeat(levels, np.diff(bounds))
    res = optimal_partition(Series(mu), k)
    assert res.change_points[k].taus == taus
    assert res.costs[k] == pytest.approx(0.0, abs=1e-9)
