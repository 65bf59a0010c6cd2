"""Budget allocation, correct-selection bounds, and the stall rule."""

import math
from statistics import NormalDist

import numpy as np
import pytest

from arasim.ocba import (
    AllocationPlan,
    SampleStats,
    StopState,
    allocate,
    allocate_arrays,
    apcs,
    apcs_x,
    merge_moment_arrays,
)

PHI = NormalDist().cdf


def stats_from(count: int, mean: float, std_error: float) -> SampleStats:
    """Build a SampleStats whose mean/SE match the given summary exactly."""
    s = SampleStats()
    s.merge_batch(count, mean, std_error**2 * count * (count - 1))
    return s


# -------------------------------------------------------------- sample stats


def test_update_constant_values():
    s = SampleStats()
    for _ in range(3):
        s.update(1.0)
    assert (s.count, s.mean, s.variance) == (3, 1.0, 0.0)


def test_update_two_values_unbiased_variance():
    s = SampleStats()
    s.update(0.0)
    s.update(2.0)
    assert s.mean == 1.0
    assert s.variance == 2.0
    assert s.std_error() == pytest.approx(1.0)


def test_variance_needs_two_samples():
    s = SampleStats()
    with pytest.raises(ValueError):
        _ = s.variance
    s.update(5.0)
    with pytest.raises(ValueError):
        _ = s.variance


def test_running_moments_match_batch_on_large_offset_stream():
    # 10^6 draws of a large constant plus tiny noise: the naive
    # sum-of-squares recurrence loses all precision here, Welford must not.
    rng = np.random.default_rng(8)
    values = 12345.6789 + 1e-6 * rng.standard_normal(1_000_000)
    s = SampleStats()
    for chunk in np.split(values, 100):
        s.merge_batch(len(chunk), float(chunk.mean()), float(chunk.var() * len(chunk)))
    assert abs(s.mean - values.mean()) < 1e-9
    assert s.variance == pytest.approx(values.var(ddof=1), rel=1e-9)
    # element-wise route on a slice agrees with the batch fold
    t = SampleStats()
    for v in values[:5000]:
        t.update(float(v))
    assert t.mean == pytest.approx(values[:5000].mean(), abs=1e-9)
    assert t.variance == pytest.approx(values[:5000].var(ddof=1), rel=1e-6)


def test_merge_batch_equals_sequential_updates():
    rng = np.random.default_rng(17)
    a, b = rng.normal(size=40), rng.normal(size=25)
    merged = SampleStats()
    merged.merge_batch(len(a), float(a.mean()), float(a.var() * len(a)))
    merged.merge_batch(len(b), float(b.mean()), float(b.var() * len(b)))
    seq = SampleStats()
    for v in np.concatenate([a, b]):
        seq.update(float(v))
    assert merged.count == seq.count == 65
    assert merged.mean == pytest.approx(seq.mean, abs=1e-12)
    assert merged.variance == pytest.approx(seq.variance, rel=1e-12)
    # empty batch is a no-op
    before = (merged.count, merged.mean, merged.variance)
    merged.merge_batch(0, 99.0, 99.0)
    assert (merged.count, merged.mean, merged.variance) == before


def test_merge_moment_arrays_matches_scalar_folds():
    rng = np.random.default_rng(23)
    counts = np.array([10, 3, 0], dtype=np.int64)
    means = rng.normal(size=3)
    m2s = rng.uniform(0.5, 2.0, 3)
    b_counts = np.array([4, 0, 6], dtype=np.int64)
    b_means = rng.normal(size=3)
    b_m2s = rng.uniform(0.5, 2.0, 3)
    scalars = []
    for i in range(3):
        s = SampleStats(count=int(counts[i]), mean=float(means[i]), _m2=float(m2s[i]))
        s.merge_batch(int(b_counts[i]), float(b_means[i]), float(b_m2s[i]))
        scalars.append(s)
    merge_moment_arrays(counts, means, m2s, b_counts, b_means, b_m2s)
    for i, s in enumerate(scalars):
        assert counts[i] == s.count
        assert means[i] == pytest.approx(s.mean, abs=1e-14)
        assert m2s[i] == pytest.approx(s._m2, abs=1e-14)


# ---------------------------------------------------------------- allocation


def test_allocate_worked_example():
    """Five designs, hand-derived allocation.

    Maximizing means (-1,-2,-3,-4,-5), sigmas (1,1,3,3,2), budget 50.
    Ratios against design 1 (the runner-up): (sigma_i/gap_i)^2 gives
    (1, 2.25, 1, 0.25); N_b = 1*sqrt(1 + 0.5625 + 0.1111... + 0.015625)
    = 1.2997062; scale 50/5.7997062 = 8.6211216.
    """
    counts, raw, best = allocate_arrays(
        np.array([-1.0, -2.0, -3.0, -4.0, -5.0]),
        np.array([1.0, 1.0, 3.0, 3.0, 2.0]),
        50,
    )
    assert best == 0
    np.testing.assert_allclose(
        raw, [11.20497, 8.62112, 19.39753, 8.62112, 2.15528], atol=5e-5
    )
    assert raw.sum() == pytest.approx(50.0)
    np.testing.assert_array_equal(counts, [12, 9, 20, 9, 3])
    assert counts.sum() >= 50


def test_allocate_ratio_unit_sigma():
    # sigma all 1, gaps 1 and 2 to the best: rival ratio is (1/1)^2/(1/2)^2 = 4
    _, raw, best = allocate_arrays(np.array([1.0, 0.0, -1.0]), np.ones(3), 100)
    assert best == 0
    assert raw[1] / raw[2] == pytest.approx(4.0, abs=1e-9)


def test_allocate_symmetry_of_identical_rivals():
    _, raw, _ = allocate_arrays(
        np.array([2.0, 1.0, 1.0]), np.array([0.7, 0.4, 0.4]), 37
    )
    assert raw[1] == pytest.approx(raw[2], abs=1e-12)


def test_allocate_zero_sigma_gets_minimum():
    counts, raw, best = allocate_arrays(
        np.array([3.0, 2.0, 1.0]), np.array([1.0, 0.0, 1.0]), 60
    )
    assert best == 0
    assert np.all(np.isfinite(raw))
    assert counts[1] == 1  # flattened by the 1e-4 sigma floor
    assert counts.min() >= 1


def test_allocate_tie_for_best_is_lexicographic():
    _, _, best = allocate_arrays(np.array([5.0, 5.0, 1.0]), np.ones(3), 30)
    assert best == 0


def test_allocate_wrapper_and_preconditions():
    stats = [stats_from(10, m, 0.2) for m in (0.3, 0.1, -0.2)]
    plan = allocate(stats, 90)
    assert isinstance(plan, AllocationPlan)
    assert plan.best == 0
    assert plan.total() >= 90
    assert plan.raw.sum() == pytest.approx(90.0)
    with pytest.raises(ValueError):
        allocate(stats[:1], 90)
    with pytest.raises(ValueError):
        allocate([SampleStats(count=1, mean=0.0), stats[0]], 90)
    with pytest.raises(ValueError):
        allocate(stats, 0)


def test_allocate_ratio_property_randomized():
    """Pre-rounding solution satisfies the defining ratios to 1e-9.

    1000 random instances, vectorized over a single verification pass:
    for non-best i, j: raw_i/raw_j == (sigma_i/gap_i)^2 / (sigma_j/gap_j)^2
    and raw_b == sigma_b * sqrt(sum raw_i^2 / sigma_i^2).
    """
    rng = np.random.default_rng(1234)
    worst = 0.0
    for _ in range(1000):
        k = int(rng.integers(2, 9))
        means = rng.normal(size=k)
        means[int(rng.integers(k))] += 2.0  # keep a clear best most of the time
        sigmas = rng.uniform(0.05, 3.0, k)
        budget = int(rng.integers(10, 5000))
        counts, raw, best = allocate_arrays(means, sigmas, budget)
        assert raw.sum() == pytest.approx(budget, rel=1e-12)
        assert counts.min() >= 1 and counts.sum() >= budget
        gaps = np.maximum(means[best] - means, 1e-12)
        weights = (sigmas / gaps) ** 2
        rivals = np.arange(k) != best
        expect = weights[rivals]
        got = raw[rivals]
        # all pairwise ratios at once: normalized vectors must coincide
        worst = max(worst, float(np.abs(got / got.sum() - expect / expect.sum()).max()))
        n_b = sigmas[best] * math.sqrt(float((got**2 / sigmas[rivals] ** 2).sum()))
        worst = max(worst, abs(raw[best] - n_b) / max(n_b, 1.0))
    assert worst < 1e-9


def test_allocate_shift_invariance():
    rng = np.random.default_rng(77)
    means = rng.normal(size=6)
    sigmas = rng.uniform(0.1, 2.0, 6)
    _, raw_a, best_a = allocate_arrays(means, sigmas, 400)
    _, raw_b, best_b = allocate_arrays(means + 17.5, sigmas, 400)
    assert best_a == best_b
    np.testing.assert_allclose(raw_a, raw_b, rtol=1e-9)


# -------------------------------------------------------------------- bounds


def test_apcs_tied_rival_is_half():
    stats = [stats_from(20, 0.5, 0.1), stats_from(20, 0.5, 0.1)]
    assert apcs(stats) == pytest.approx(0.5)


def test_apcs_two_design_closed_form():
    # term = Phi((mu_i - mu_b)/sqrt(se_b^2 + se_i^2)); means .0660/.0630,
    # SEs .0036/.0049 put the subtracted mass near 31.1%
    stats = [stats_from(1000, 0.0660, 0.0036), stats_from(1000, 0.0630, 0.0049)]
    term = PHI(-0.0030 / math.sqrt(0.0036**2 + 0.0049**2))
    assert 1.0 - apcs(stats) == pytest.approx(term, abs=1e-12)
    assert abs(term - 0.3112) <= 0.0025


def test_apcs_can_go_negative_with_many_indistinct_rivals():
    stats = [stats_from(5, 0.001 * i, 0.5) for i in range(8)]
    assert apcs(stats) < 0.0


def test_apcs_requires_two_samples_each():
    with pytest.raises(ValueError):
        apcs([])
    with pytest.raises(ValueError):
        apcs([SampleStats(count=1, mean=0.0), stats_from(5, 0.0, 1.0)])


def test_apcs_lower_bounds_true_pcs():
    """Monte Carlo oracle: three normal designs with known parameters.

    apcs evaluated at the true parameters must sit below the simulated
    probability that design b's sample mean beats every rival's.
    """
    rng = np.random.default_rng(314159)
    mu = np.array([0.00, -0.25, -0.40])
    sigma = np.array([1.0, 1.2, 0.8])
    n = np.array([40, 25, 25])
    reps = 100_000
    sample_means = rng.normal(mu, sigma / np.sqrt(n), size=(reps, 3))
    pcs = float((sample_means.argmax(axis=1) == 0).mean())
    se = math.sqrt(pcs * (1.0 - pcs) / reps)
    stats = [
        stats_from(int(n[i]), float(mu[i]), float(sigma[i] / math.sqrt(n[i])))
        for i in range(3)
    ]
    assert apcs(stats) <= pcs + 3 * se


def test_apcs_x_full_cutoff_equals_apcs():
    stats = [stats_from(30, m, 0.05) for m in (0.9, 0.4, 0.1)]
    assert apcs_x(stats, 1.0) == pytest.approx(apcs(stats), abs=1e-12)


def test_apcs_x_excludes_good_enough_rivals():
    # normalized means: best 1.0, middle 0.95, worst 0.0
    stats = [stats_from(30, 1.0, 0.3), stats_from(30, 0.95, 0.3), stats_from(30, 0.0, 0.3)]
    full = apcs_x(stats, 1.0)
    relaxed = apcs_x(stats, 0.95)  # middle design's ratio hits the cutoff
    dropped = PHI((0.95 - 1.0) / math.sqrt(2 * 0.3**2))  # SEs are 0.3 by construction
    assert relaxed == pytest.approx(full + dropped, abs=1e-12)
    assert relaxed > full


def test_apcs_x_monotone_as_cutoff_drops():
    rng = np.random.default_rng(99)
    stats = [
        stats_from(25, float(m), float(s))
        for m, s in zip(rng.normal(size=7), rng.uniform(0.05, 0.4, 7))
    ]
    values = [apcs_x(stats, x) for x in (1.0, 0.99, 0.9, 0.7, 0.5, 0.25, 0.05)]
    assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))


def test_apcs_x_flat_field_is_one():
    stats = [stats_from(10, 0.4, 0.1), stats_from(10, 0.4, 0.1), stats_from(10, 0.4, 0.1)]
    assert apcs_x(stats, 0.5) == 1.0


def test_apcs_x_argument_errors():
    stats = [stats_from(10, 0.5, 0.1), stats_from(10, 0.2, 0.1)]
    for bad in (0.0, -0.3, 1.0001):
        with pytest.raises(ValueError):
            apcs_x(stats, bad)
    with pytest.raises(ValueError):
        apcs_x(stats[:1], 0.9)


# ----------------------------------------------------------------- stall rule


def test_stop_flat_history_stops_at_five():
    state = StopState()
    means = np.array([0.3, 0.1, -0.2])
    weights = np.array([5, 3, 2])
    for t in range(1, 6):
        state.record(means, weights)
        assert state.should_stop() is (t >= 5)


def test_stop_three_iterations_never_fires():
    state = StopState()
    for _ in range(3):
        state.record(np.array([1.0, 0.0]), np.array([1, 1]))
    assert state.iterations == 3
    assert not state.should_stop()


def test_stop_full_spread_swing_blocks():
    """A design holding weight .5 that moved by the whole spread vs t-2
    gives q = .5, far above the .05 tolerance."""
    state = StopState()
    swing = [
        np.array([0.0, 1.0]),
        np.array([0.0, 1.0]),
        np.array([1.0, 1.0]),  # t-2 snapshot, design 0 displaced by the spread
        np.array([0.0, 1.0]),
        np.array([0.0, 1.0]),
    ]
    for means in swing:
        state.record(means, np.array([1, 1]))
    assert state.shift(5, 3) == pytest.approx(0.5)
    assert state.shift(5, 4) == 0.0
    assert not state.should_stop()


def test_stop_small_drift_within_tolerance_fires():
    state = StopState()
    base = np.array([0.0, 1.0, 2.0])
    rng = np.random.default_rng(6)
    for _ in range(5):
        state.record(base + rng.uniform(-0.01, 0.01, 3), np.array([1, 2, 3]))
    # every |delta| <= .02 against spread ~2 -> q <= .01 < .05
    assert state.should_stop()


def test_stop_zero_spread_counts_as_stalled():
    state = StopState()
    for _ in range(5):
        state.record(np.array([1.5, 1.5]), np.array([1, 1]))
    assert state.shift(5, 4) == 0.0
    assert state.should_stop()


def test_stop_weights_normalized_and_validated():
    state = StopState()
    state.record(np.array([0.0, 1.0]), np.array([3, 1]))
    assert state._weights[0].sum() == pytest.approx(1.0)
    with pytest.raises(ValueError):
        state.record(np.array([0.0, 1.0]), np.array([0, 0]))
