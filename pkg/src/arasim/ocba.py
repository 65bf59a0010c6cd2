"""Optimal computing budget allocation for best-mean selection.

Given running sample statistics for k competing designs, `allocate` splits
the next batch of simulation replications to maximise the approximate
probability of correctly selecting the best (highest-mean) design:

    N_i / N_j = (sigma_i / (mu_b - mu_i))^2 / (sigma_j / (mu_b - mu_j))^2
    N_b = sigma_b * sqrt( sum_{i != b} N_i^2 / sigma_i^2 )

`apcs` evaluates the Bonferroni-style lower bound on the probability of
correct selection, and `apcs_x` the variant that only counts rivals whose
normalised mean exceeds a cutoff x.  `StopState` implements a stall
criterion on the allocation trajectory: stop once the weighted mean shift
relative to the current mean spread stays within 5% of four consecutive
lookbacks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from statistics import NormalDist

import numpy as np

__all__ = [
    "SampleStats",
    "AllocationPlan",
    "allocate",
    "allocate_arrays",
    "merge_moment_arrays",
    "apcs",
    "apcs_x",
    "StopState",
]

_SIGMA_FLOOR = 1e-4   # stands in for a zero sample deviation
_GAP_FLOOR = 1e-12    # stands in for a zero mean gap to the best
_PHI = NormalDist().cdf


@dataclass
class SampleStats:
    """Running mean/variance accumulator (Welford update)."""

    count: int = 0
    mean: float = 0.0
    _m2: float = 0.0

    def update(self, value: float) -> None:
        self.count += 1
        delta = value - self.mean
        self.mean += delta / self.count
        self._m2 += delta * (value - self.mean)

    def merge_batch(self, count: int, mean: float, m2: float) -> None:
        """Fold in a pre-reduced batch (parallel moment combination)."""
        if count == 0:
            return
        total = self.count + count
        delta = mean - self.mean
        self._m2 += m2 + delta * delta * (self.count * count / total)
        self.mean += delta * count / total
        self.count = total

    @property
    def variance(self) -> float:
        """Unbiased sample variance; defined only once count >= 2."""
        if self.count < 2:
            raise ValueError(f"variance undefined for count={self.count}")
        return self._m2 / (self.count - 1)

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)

    def std_error(self) -> float:
        """Standard error of the mean, sqrt(variance / count)."""
        return math.sqrt(self.variance / self.count)


@dataclass(frozen=True)
class AllocationPlan:
    """Integer replication counts plus the pre-rounding real solution."""

    counts: np.ndarray   # int, one per design, each >= 1
    raw: np.ndarray      # pre-rounding reals summing to the budget
    best: int            # ordinal of the incumbent best design

    def total(self) -> int:
        return int(self.counts.sum())


def allocate_arrays(
    means: np.ndarray, sigmas: np.ndarray, budget: int
) -> tuple[np.ndarray, np.ndarray, int]:
    """Array core of :func:`allocate`: (counts, raw, best ordinal)."""
    k = means.size
    if k < 2:
        raise ValueError(f"need at least 2 designs, got {k}")
    if budget < 1:
        raise ValueError(f"budget must be positive, got {budget}")
    sigmas = np.where(sigmas > 0.0, sigmas, _SIGMA_FLOOR)
    best = int(np.argmax(means))  # first max wins ties (ordinal = lexicographic)
    gaps = means[best] - means
    gaps = np.where(gaps > 0.0, gaps, _GAP_FLOOR)
    weights = (sigmas / gaps) ** 2
    weights[best] = 0.0
    weights[best] = sigmas[best] * math.sqrt(float((weights**2 / sigmas**2).sum()))
    raw = weights * (budget / weights.sum())
    counts = np.maximum(np.ceil(raw - 1e-12).astype(np.int64), 1)
    return counts, raw, best


def allocate(stats: list[SampleStats], budget: int) -> AllocationPlan:
    """Split `budget` replications across designs per the OCBA ratios.

    The real-valued solution is scaled to sum to `budget`, then each count
    is rounded up, so every design receives at least one replication and
    the integer total may exceed the budget.
    """
    if any(s.count < 2 for s in stats):
        raise ValueError("every design needs at least 2 samples before allocation")
    means = np.array([s.mean for s in stats])
    sigmas = np.array([s.std for s in stats])
    counts, raw, best = allocate_arrays(means, sigmas, budget)
    return AllocationPlan(counts=counts, raw=raw, best=best)


def merge_moment_arrays(
    counts: np.ndarray,
    means: np.ndarray,
    m2s: np.ndarray,
    b_counts: np.ndarray,
    b_means: np.ndarray,
    b_m2s: np.ndarray,
) -> None:
    """Fold per-design batch moments into running (counts, means, m2s) in place."""
    totals = counts + b_counts
    active = b_counts > 0
    delta = np.where(active, b_means - means, 0.0)
    weight = np.where(active, counts * b_counts / np.maximum(totals, 1), 0.0)
    m2s += np.where(active, b_m2s, 0.0) + delta * delta * weight
    means += delta * np.where(active, b_counts / np.maximum(totals, 1), 0.0)
    counts += b_counts


def _pairwise_z(stats: list[SampleStats], best: int, i: int) -> float:
    se2 = stats[best].variance / stats[best].count + stats[i].variance / stats[i].count
    diff = stats[i].mean - stats[best].mean
    if se2 == 0.0:
        return 0.0 if diff == 0.0 else -math.inf
    return diff / math.sqrt(se2)


def apcs(stats: list[SampleStats]) -> float:
    """Lower bound on P(correct selection): 1 - sum_{i != b} Phi(z_ib).

    z_ib = (mean_i - mean_b) / sqrt(var_b/N_b + var_i/N_i).  The bound can
    be negative when rivals are statistically indistinguishable from the
    incumbent best.
    """
    if not stats:
        raise ValueError("need at least one design")
    if any(s.count < 2 for s in stats):
        raise ValueError("every design needs at least 2 samples")
    means = np.array([s.mean for s in stats])
    best = int(np.argmax(means))
    return 1.0 - sum(_PHI(_pairwise_z(stats, best, i)) for i in range(len(stats)) if i != best)


def apcs_x(stats: list[SampleStats], x: float) -> float:
    """PCS bound counting only rivals with normalised mean below x.

    Normalised mean of design i is (mean_i - mean_w) / (mean_b - mean_w),
    with b the best and w the worst design; rivals at or above x are
    treated as good-enough selections and excluded.  A flat field
    (mean_b == mean_w) leaves nothing to exclude against and returns 1.
    """
    if not 0.0 < x <= 1.0:
        raise ValueError(f"cutoff x must lie in (0, 1], got {x}")
    if len(stats) < 2:
        raise ValueError(f"need at least 2 designs, got {len(stats)}")
    if any(s.count < 2 for s in stats):
        raise ValueError("every design needs at least 2 samples")
    means = np.array([s.mean for s in stats])
    best = int(np.argmax(means))
    worst = int(np.argmin(means))
    spread = means[best] - means[worst]
    if spread == 0.0:
        return 1.0
    total = 0.0
    for i in range(len(stats)):
        if i == best:
            continue
        if (means[i] - means[worst]) / spread < x:
            total += _PHI(_pairwise_z(stats, best, i))
    return 1.0 - total


@dataclass
class StopState:
    """Stall detector over per-iteration mean snapshots.

    After each allocation iteration, record the per-design means and the
    fraction of the iteration's replications each design received.  The
    shift between iterations t and t' is

        q(t, t') = sum_i w_{t,i} * |mean_{t,i} - mean_{t',i}| / spread_t

    with spread_t = max_i mean_{t,i} - min_i mean_{t,i} (q = 0 when the
    spread is zero).  `should_stop` is true once at least 5 snapshots
    exist and q(t, t') <= tol for the four preceding snapshots t'.
    """

    tol: float = 0.05
    lookback: int = 4
    _means: list = field(default_factory=list)
    _weights: list = field(default_factory=list)

    def record(self, means: np.ndarray, weights: np.ndarray) -> None:
        w = np.asarray(weights, dtype=np.float64)
        total = w.sum()
        if total <= 0.0:
            raise ValueError("iteration weights must have positive total")
        self._means.append(np.asarray(means, dtype=np.float64).copy())
        self._weights.append(w / total)

    @property
    def iterations(self) -> int:
        return len(self._means)

    def shift(self, t: int, t_prev: int) -> float:
        """q between snapshot ordinals t and t_prev (1-based)."""
        means_t = self._means[t - 1]
        spread = float(means_t.max() - means_t.min())
        if spread == 0.0:
            return 0.0
        diff = np.abs(means_t - self._means[t_prev - 1])
        return float((self._weights[t - 1] * diff).sum() / spread)

    def should_stop(self) -> bool:
        t = self.iterations
        if t < self.lookback + 1:
            return False
        return all(self.shift(t, t - k) <= self.tol for k in range(1, self.lookback + 1))
