"""Acceptance gate: exact-solver equivalence, reference-criterion agreement,
deterministic selection anchors, and desk-scale Monte-Carlo rate bands.

The rate bands are pinned to master seed 0.  They were chosen once, before
this file was frozen, by running the studies at the stated replication
counts; the margins absorb Monte-Carlo error at those counts, not at
larger ones.
"""

import math
import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cpcv.criteria import select_k, two_fold_curves, vfold_criterion
from cpcv.folds import make_fold_plan
from cpcv.segmentation import brute_force_partition, optimal_partition
from cpcv.signal import ChangePointSet, Series, make_signal, mean_matrix
from cpcv.simulate import (
    get_scenario,
    run_simulation,
    scenario_overestimation,
    scenario_underestimation,
)

from oracles import criterion_direct


def noisy_series(seed, n, d=1, steps=0):
    rng = np.random.default_rng(seed)
    data = rng.standard_normal((n, d))
    for _ in range(steps):
        t = int(rng.integers(1, n))
        data[t:] += rng.normal(scale=3.0)
    return Series(data)


def example_series():
    # n=22 with two close changes: levels 1, 0, 10 around positions 6 and 11
    cps = ChangePointSet(22, (6, 11))
    return Series(mean_matrix(make_signal(cps, [[1.0], [0.0], [10.0]])))


# 1 ----------------------------------------------------------------------


def test_dynamic_program_matches_exhaustive_search():
    start = time.perf_counter()
    rng = np.random.default_rng(20240817)
    for _ in range(200):
        n = int(rng.integers(2, 13))
        y = Series(rng.standard_normal(n))
        l_max = min(3, n - 1)
        exact = optimal_partition(y, l_max)
        for l in range(l_max + 1):
            ref_cps, ref_cost = brute_force_partition(y, l)
            assert exact.change_points[l].taus == ref_cps.taus
            assert exact.costs[l] == pytest.approx(ref_cost, rel=1e-9, abs=1e-9)
    assert time.perf_counter() - start < 5.0


# 2 ----------------------------------------------------------------------


def test_two_fold_criteria_match_reference_implementation():
    start = time.perf_counter()
    rng = np.random.default_rng(7)
    for _ in range(100):
        half = int(rng.integers(2, 31))
        steps = int(rng.integers(0, 3))
        s = noisy_series(int(rng.integers(0, 2**31)), 2 * half, steps=steps)
        k_max = min(5, half - 1)
        curves = two_fold_curves(s, k_max, ("cv2", "cv1", "cvmod"))
        for l in range(k_max + 1):
            for method in ("cv2", "cv1", "cvmod"):
                fast = curves[method].values[l]
                slow = criterion_direct(s, l, method)
                if math.isinf(slow):
                    assert fast == slow
                else:
                    assert fast == pytest.approx(slow, rel=1e-9, abs=1e-9)
    assert time.perf_counter() - start < 10.0


# 3 ----------------------------------------------------------------------


def test_two_fold_specialization_of_vfold():
    rng = np.random.default_rng(99)
    for _ in range(50):
        half = int(rng.integers(3, 25))
        s = noisy_series(int(rng.integers(0, 2**31)), 2 * half, steps=int(rng.integers(0, 3)))
        k_max = min(4, half - 1)
        curve = two_fold_curves(s, k_max, ("cv1",))["cv1"]
        plan = make_fold_plan(s.n, 2)
        vf = vfold_criterion(s, plan, range(k_max + 1), loss="abs")
        for l in range(k_max + 1):
            assert vf.values[l] == curve.values[l]


# 4 ----------------------------------------------------------------------


def test_noiseless_example_selections_disagree():
    s = example_series()
    curves = two_fold_curves(s, 4, ("cv2", "cv1", "cvmod"))
    assert select_k(curves["cv2"]) == 1
    assert select_k(curves["cv1"]) == 2
    assert select_k(curves["cvmod"]) == 2


# 5 ----------------------------------------------------------------------


def test_close_changes_underestimation_rates():
    start = time.perf_counter()
    sc = scenario_underestimation(factor=3.0, seed=0)
    reports = {r.method: r for r in run_simulation(sc, ("copps", "cv1"), 1000, 10)}
    assert time.perf_counter() - start < 180.0
    assert reports["copps"].under / 1000 > 0.80
    assert reports["cv1"].correct / 1000 > 0.75


# 6 ----------------------------------------------------------------------


def test_boundary_parity_overestimation_rates():
    methods = ("copps", "cv1")
    at_odd = {
        r.method: r
        for r in run_simulation(scenario_overestimation(sigma=1e-4, seed=0), methods, 500, 10)
    }
    at_even = {
        r.method: r
        for r in run_simulation(
            scenario_overestimation(sigma=1e-4, shift_even=True, seed=0), methods, 500, 10
        )
    }
    assert at_odd["copps"].over / 500 > 0.50
    assert at_even["copps"].over / 500 < 0.20
    assert at_odd["cv1"].over / 500 < 0.25
    assert at_even["cv1"].over / 500 < 0.25


# 7 ----------------------------------------------------------------------


def test_long_signal_parity_sensitivity():
    methods = ("copps", "cv1-vfold5")
    odd = {r.method: r for r in run_simulation(get_scenario("spike-odd"), methods, 300, 15)}
    even = {r.method: r for r in run_simulation(get_scenario("spike-even"), methods, 300, 15)}
    assert odd["copps"].under / 300 - even["copps"].under / 300 >= 0.30
    assert odd["cv1-vfold5"].correct / 300 > 0.65
    assert even["cv1-vfold5"].correct / 300 > 0.65


# 8 ----------------------------------------------------------------------


def test_blocks_signal_risk_band():
    (rep,) = run_simulation(get_scenario("blocks"), ("cv1-vfold5",), 500, 15)
    assert 0.85 <= rep.mise_mean <= 1.25
    assert 0.68 <= rep.correct / 500 <= 0.85


# 9 ----------------------------------------------------------------------


def test_heavy_tails_do_not_inflate_selection():
    (rep,) = run_simulation(get_scenario("blocks-t5"), ("cv1-vfold5",), 300, 15)
    assert rep.over / 300 < 0.40


# 10 ---------------------------------------------------------------------


@given(
    seed=st.integers(0, 2**32 - 1),
    shift=st.sampled_from([-40.0, -3.5, 0.25, 12.0, 96.0]),
)
@settings(max_examples=40)
def test_criterion_curves_are_location_invariant(seed, shift):
    s = noisy_series(seed, 24, steps=2)
    moved = Series(s.data + shift)
    base = two_fold_curves(s, 3, ("cv2", "cv1", "cvmod"))
    other = two_fold_curves(moved, 3, ("cv2", "cv1", "cvmod"))
    for method in ("cv2", "cv1", "cvmod"):
        for l in range(4):
            a, b = base[method].values[l], other[method].values[l]
            if math.isinf(a) or math.isinf(b):
                assert a == b
            else:
                assert b == pytest.approx(a, rel=1e-12, abs=1e-12)
        assert select_k(base[method]) == select_k(other[method])


@given(seed=st.integers(0, 2**32 - 1), a=st.sampled_from([0.5, 2.0, 8.0]))
@settings(max_examples=40)
def test_dyadic_rescaling_commutes_exactly(seed, a):
    # powers of two round-trip through every arithmetic step unchanged,
    # so homogeneity of the criteria holds with no tolerance at all
    s = noisy_series(seed, 24, steps=1)
    scaled = Series(a * s.data)
    base = two_fold_curves(s, 3, ("cv2", "cv1", "cvmod"))
    other = two_fold_curves(scaled, 3, ("cv2", "cv1", "cvmod"))
    for l in range(4):
        assert other["cv1"].values[l] == a * base["cv1"].values[l]
        assert other["cv2"].values[l] == a * a * base["cv2"].values[l]
        assert other["cvmod"].values[l] == a * a * base["cvmod"].values[l]


@given(seed=st.integers(0, 2**32 - 1), a=st.sampled_from([0.3, 1.0, 5.9, 77.0]))
@settings(max_examples=40)
def test_selection_is_scale_invariant(seed, a):
    s = noisy_series(seed, 26, steps=2)
    scaled = Series(a * s.data)
    for method in ("cv2", "cv1", "cvmod"):
        assert select_k(two_fold_curves(s, 4, (method,))[method]) == select_k(
            two_fold_curves(scaled, 4, (method,))[method]
        )


@given(n=st.integers(4, 80), v=st.integers(2, 40))
@settings(max_examples=60)
def test_folds_partition_the_design_points(n, v):
    if v > n // 2:
        v = 2
    plan = make_fold_plan(n, v)
    seen = np.concatenate(plan.folds)
    assert sorted(seen) == list(range(1, n + 1))
    sizes = [f.size for f in plan.folds]
    assert max(sizes) - min(sizes) <= 1


@given(seed=st.integers(0, 200), m=st.integers(1, 4))
@settings(max_examples=10, deadline=None)
def test_classification_fractions_partition_replications(seed, m):
    sc = scenario_underestimation(factor=2.0, sigma=2.0, seed=seed)
    (rep,) = run_simulation(sc, ("cv1",), m, 6)
    assert rep.under + rep.correct + rep.over == m
    assert rep.pct_under + rep.pct_correct + rep.pct_over == pytest.approx(100.0)
