"""Nested greedy local search baseline.

A benchmark alternative to the budget-allocated trial solver: repeatedly
hill-climb from a uniformly random defender allocation, estimating each
visited allocation's utility by forward simulation (trait draw, adversary
resolved by its own nested greedy search, success draw, defender score).
Every visit draws a fresh batch of samples and the latest batch replaces
the stored estimate for that allocation — estimates are never pooled
across visits, so each strategy's reported statistics reflect exactly
samples_per_eval draws.  Restarts stop when Laplace's law of succession
puts the probability of discovering a new local optimum below a threshold.

The point of the baseline is comparative: at sample sizes matching the
trial solver's accuracy it is far slower, and its correct-selection bound
(apcs) is typically meaningless (strongly negative).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import blotto as bl
from .adversary import ResponseTables, response_tables
from .blotto import SPAN, ModelParams
from .ocba import SampleStats, apcs, apcs_x
from .rng import substream
from .strategies import SpaceIndex, neighbors

__all__ = [
    "GreedyConfig",
    "GreedyResult",
    "laplace_stop",
    "greedy_search",
]

APCS_X_LEVELS = (0.99, 0.98, 0.97, 0.96, 0.95)

InnerResponse = Callable[[ModelParams, tuple, np.ndarray, np.random.Generator], object]


@dataclass(frozen=True)
class GreedyConfig:
    """Sampling and stopping knobs for the greedy baseline."""

    samples_per_eval: int = 100
    nested_samples: int = 100
    inner_restarts: int = 3
    max_restarts: int = 1000
    stop_threshold: float = 0.05

    def __post_init__(self) -> None:
        if self.samples_per_eval < 2:
            raise ValueError(
                f"samples_per_eval must be at least 2, got {self.samples_per_eval}"
            )
        for name in ("nested_samples", "inner_restarts", "max_restarts"):
            value = getattr(self, name)
            if value < 1:
                raise ValueError(f"{name} must be positive, got {value}")
        if not 0.0 < self.stop_threshold < 1.0:
            raise ValueError(
                f"stop_threshold must lie in (0, 1), got {self.stop_threshold}"
            )


@dataclass(frozen=True)
class GreedyResult:
    """Search outcome: best allocation, optima found, and visit statistics."""

    best: tuple
    local_optima: frozenset
    restarts: int
    evaluations: int          # total evaluation batches drawn over all restarts
    stats: dict               # allocation -> SampleStats of its latest evaluation
    apcs: float
    apcs_x: dict              # cutoff -> bound, cutoffs APCS_X_LEVELS


def laplace_stop(new_optima_found: int, restarts: int, threshold: float) -> bool:
    """Law-of-succession stop: P(next restart finds a new optimum) < threshold.

    The probability is estimated as (new_optima_found + 1) / (restarts + 2),
    counting restarts whose hill-climb ended on a previously unseen optimum.
    """
    if restarts < 0:
        raise ValueError(f"restarts must be non-negative, got {restarts}")
    if not 0 <= new_optima_found <= restarts:
        raise ValueError(
            f"new_optima_found must lie in [0, restarts], got {new_optima_found}"
        )
    return (new_optima_found + 1) / (restarts + 2) < threshold


def _inner_greedy(
    params: ModelParams,
    tables: ResponseTables,
    r: np.ndarray,
    space: SpaceIndex,
    cfg: GreedyConfig,
    rng: np.random.Generator,
) -> int:
    """Adversary-side greedy: hill-climb sample means of the attack utility."""
    n = params.n

    def evaluate(a_ord: int) -> float:
        s = tables.floor[a_ord] + SPAN * rng.random((cfg.nested_samples, n))
        return float(bl.utility_attacker(params, s, r).mean())

    best_ord = -1
    best_value = -np.inf
    for _ in range(cfg.inner_restarts):
        incumbent = int(rng.integers(len(space)))
        value = evaluate(incumbent)
        improved = True
        while improved:
            improved = False
            for move in neighbors(space.strategies[incumbent]):
                move_ord = space.ordinal(move)
                move_value = evaluate(move_ord)
                if move_value > value:
                    incumbent, value = move_ord, move_value
                    improved = True
                    break
        if value > best_value:
            best_ord, best_value = incumbent, value
    return best_ord


def greedy_search(
    params: ModelParams,
    cfg: GreedyConfig,
    seed: int,
    space: SpaceIndex | None = None,
    inner_response: InnerResponse | None = None,
    threads: int = 1,
) -> GreedyResult:
    """Random-restart first-improvement hill-climb over defender allocations.

    Each evaluation draws cfg.samples_per_eval forward-simulation samples;
    the climb moves to the first neighbor (lexicographic scan) whose fresh
    estimate strictly beats the incumbent's, so ties are non-improving.
    Re-visiting an allocation draws fresh samples and the latest batch
    replaces the stored estimate (estimates are not pooled across visits);
    the best local optimum is judged by these latest sample means.
    Restart k draws everything from substream(seed, k), making the result
    independent of execution order; with threads > 1 restarts run in waves
    but are folded in restart order, truncated at the stopping point, so
    the outcome matches the single-threaded run.  Stops when laplace_stop
    fires, when every allocation is a known local optimum, or at
    cfg.max_restarts.
    """
    if space is None:
        space = SpaceIndex.build(params.n)
    tables = [response_tables(params, d, space) for d in space]
    n = params.n

    def evaluate(d_ord: int, rng: np.random.Generator) -> tuple[float, float]:
        """Sample mean of the defender utility plus the centered second moment."""
        values = np.empty(cfg.samples_per_eval)
        for i in range(cfg.samples_per_eval):
            r = bl.sample_traits(params, rng)
            if inner_response is None:
                a_ord = _inner_greedy(params, tables[d_ord], r, space, cfg, rng)
            else:
                resp = inner_response(params, space.strategies[d_ord], r, rng)
                a_ord = space.ordinal(getattr(resp, "strategy", resp))
            s = tables[d_ord].floor[a_ord] + SPAN * rng.random(n)
            values[i] = bl.utility_defender(params, s)
        mean = float(values.mean())
        m2 = float(((values - mean) ** 2).sum())
        return mean, m2

    def run_restart(index: int) -> tuple[int, list[tuple[int, float, float]]]:
        """One hill-climb; returns (optimum ordinal, per-evaluation moments)."""
        rng = substream(seed, index)
        visits: list[tuple[int, float, float]] = []
        incumbent = int(rng.integers(len(space)))
        value, m2 = evaluate(incumbent, rng)
        visits.append((incumbent, value, m2))
        improved = True
        while improved:
            improved = False
            for move in neighbors(space.strategies[incumbent]):
                move_ord = space.ordinal(move)
                move_value, m2 = evaluate(move_ord, rng)
                visits.append((move_ord, move_value, m2))
                if move_value > value:
                    incumbent, value = move_ord, move_value
                    improved = True
                    break
        return incumbent, visits

    stats: dict[int, SampleStats] = {}
    optima: list[int] = []
    restarts = 0
    evaluations = 0
    new_found = 0
    stopped = False
    next_index = 1
    wave = max(1, threads)
    while not stopped and restarts < cfg.max_restarts:
        indices = list(range(next_index, next_index + min(wave, cfg.max_restarts - restarts)))
        next_index = indices[-1] + 1
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(run_restart, indices))
        else:
            results = [run_restart(i) for i in indices]
        for optimum, visits in results:
            for d_ord, mean, m2 in visits:
                fresh = SampleStats()
                fresh.merge_batch(cfg.samples_per_eval, mean, m2)
                stats[d_ord] = fresh
                evaluations += 1
            restarts += 1
            if optimum not in optima:
                optima.append(optimum)
                new_found += 1
            if (
                laplace_stop(new_found, restarts, cfg.stop_threshold)
                or len(optima) == len(space)
            ):
                stopped = True
                break

    best_ord = min(optima, key=lambda o: (-stats[o].mean, o))
    visited = sorted(stats)
    visited_stats = [stats[o] for o in visited]
    if len(visited_stats) >= 2:
        bound = apcs(visited_stats)
        bound_x = {x: apcs_x(visited_stats, x) for x in APCS_X_LEVELS}
    else:
        bound = 1.0
        bound_x = {x: 1.0 for x in APCS_X_LEVELS}
    return GreedyResult(
        best=space.strategies[best_ord],
        local_optima=frozenset(space.strategies[o] for o in optima),
        restarts=restarts,
        evaluations=evaluations,
        stats={space.strategies[o]: stats[o] for o in visited},
        apcs=bound,
        apcs_x=bound_x,
    )
