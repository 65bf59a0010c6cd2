"""Defender-side sequential game solver.

The defender's expected utility for allocation d is estimated by forward
simulation of the sequential game: draw the adversary's trait vector r,
solve the adversary's decision problem for its best response a*(d, r),
then draw the realised success measure and score the defender's utility.
A budget-allocation loop (outer OCBA) steers replications across defender
allocations; one complete loop is a *trial* and names a winner.

Trials repeat, winners are tallied with near-equivalent strategies merged
into classes, and the run stops when the selection gate certifies the
leading class at the configured confidence.  `solve_exact_partial_analytic`
and `solve_exact_fully_numeric` rank the full strategy space by replacing
both the inner argmax and the success-measure average with closed-form or
quadrature evaluation, leaving only trait sampling stochastic; they serve
as references for the simulation path.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Mapping, Sequence

import numpy as np

from . import blotto as bl
from .adversary import (
    NestedBudget,
    ResponseTables,
    _ocba_argmax,
    best_response_exact_batch,
    response_tables,
    response_tables_numeric,
)
from .blotto import SPAN, ModelParams
from .ocba import SampleStats, StopState, allocate_arrays, apcs, apcs_x
from .rng import substream
from .strategies import SpaceIndex
from .trials import GateParams, wilson_gate

__all__ = [
    "SolverBudget",
    "TrialRecord",
    "TrialTally",
    "SolveResult",
    "run_trial",
    "merge_equivalents",
    "run_algorithm1",
    "solve_exact_partial_analytic",
    "solve_exact_fully_numeric",
    "GateParams",
    "wilson_gate",
]

APCS_X_LEVELS = (0.99, 0.98, 0.97, 0.96, 0.95)

InnerResponse = Callable[[ModelParams, tuple, np.ndarray, np.random.Generator], object]


@dataclass(frozen=True)
class SolverBudget:
    """Replication budgets for the trial loop and its nested solves."""

    n_init: int
    per_iteration: int
    nested: NestedBudget
    n_r: int = 1000
    n_s: int = 10
    max_iterations: int = 20

    def __post_init__(self) -> None:
        if self.n_init < 2:
            raise ValueError(f"initial replications must be >= 2, got {self.n_init}")
        if self.per_iteration < 1:
            raise ValueError(f"per-iteration budget must be >= 1, got {self.per_iteration}")
        if self.n_r < 1:
            raise ValueError(f"trait sample count must be >= 1, got {self.n_r}")
        if self.n_s < 1:
            raise ValueError(f"quadrature node count must be >= 1, got {self.n_s}")
        if self.max_iterations < 1:
            raise ValueError(f"iteration cap must be >= 1, got {self.max_iterations}")

    @classmethod
    def paper(cls, n: int) -> "SolverBudget":
        """Full-scale budgets: 2^n initial, 5^n per iteration, 10^n trait draws."""
        return cls(
            n_init=2**n,
            per_iteration=5**n,
            nested=NestedBudget.default(n),
            n_r=10**n,
            n_s=10,
        )

    @classmethod
    def desk(cls, n: int) -> "SolverBudget":
        """Paper budgets with the trait draw count capped at 1000."""
        return replace(cls.paper(n), n_r=min(10**n, 1000))


@dataclass(frozen=True)
class TrialRecord:
    """Outcome of one trial: the winner and per-strategy statistics."""

    winner: tuple
    winner_ordinal: int
    stats: tuple  # of SampleStats, parallel to the strategy space
    iterations: int
    retained: dict  # allocation -> list of raw defender utility samples

    @property
    def means(self) -> np.ndarray:
        return np.array([s.mean for s in self.stats])


def _prepare_tables(
    params: ModelParams, space: SpaceIndex, tables: Sequence[ResponseTables] | None
) -> list[ResponseTables]:
    if tables is not None:
        return list(tables)
    return [response_tables(params, d, space) for d in space]


def run_trial(
    params: ModelParams,
    budget: SolverBudget,
    seed: int,
    trial_index: int = 0,
    space: SpaceIndex | None = None,
    tables: Sequence[ResponseTables] | None = None,
    inner_response: InnerResponse | None = None,
    threads: int = 1,
    retain_for: Sequence[tuple] | None = None,
) -> TrialRecord:
    """One budget-allocated selection pass over the defender's space.

    Every replication of strategy d draws from its own substream keyed by
    (trial_index, strategy ordinal, iteration, draw index), so the result
    is identical whatever the execution order or thread count.
    """
    if space is None:
        space = SpaceIndex.build(params.n)
    tables = _prepare_tables(params, space, tables)
    k = len(space)
    n = params.n
    retain_ordinals = {space.ordinal(a) for a in retain_for} if retain_for else set()
    retained: dict[int, list[float]] = {o: [] for o in retain_ordinals}

    counts = np.zeros(k, dtype=np.int64)
    means = np.zeros(k)
    m2s = np.zeros(k)

    def one_sample(d_ord: int, iteration: int, draw: int) -> float:
        rng = substream(seed, trial_index, d_ord, iteration, draw)
        r = bl.sample_traits(params, rng)
        if inner_response is None:
            a_ord, _ = _ocba_argmax(params, tables[d_ord], r, budget.nested, rng)
        else:
            resp = inner_response(params, space.strategies[d_ord], r, rng)
            a_ord = space.ordinal(getattr(resp, "strategy", resp))
        s = tables[d_ord].floor[a_ord] + SPAN * rng.random(n)
        return float(bl.utility_defender(params, s))

    def strategy_task(d_ord: int, iteration: int, quota: int) -> list[float]:
        return [one_sample(d_ord, iteration, i) for i in range(quota)]

    plan = np.full(k, budget.n_init, dtype=np.int64)
    stop = StopState()
    iteration = 0
    while True:
        iteration += 1
        quotas = [int(q) for q in plan]
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                batches = list(
                    pool.map(strategy_task, range(k), [iteration] * k, quotas)
                )
        else:
            batches = [strategy_task(d_ord, iteration, quotas[d_ord]) for d_ord in range(k)]
        for d_ord, values in enumerate(batches):
            for value in values:
                counts[d_ord] += 1
                delta = value - means[d_ord]
                means[d_ord] += delta / counts[d_ord]
                m2s[d_ord] += delta * (value - means[d_ord])
            if d_ord in retain_ordinals:
                retained[d_ord].extend(values)
        stop.record(means, plan)
        if k == 1 or iteration >= budget.max_iterations or stop.should_stop():
            break
        sigmas = np.sqrt(m2s / (counts - 1))
        plan, _, _ = allocate_arrays(means, sigmas, budget.per_iteration)

    winner_ord = int(np.argmax(means))
    stats = tuple(
        SampleStats(count=int(counts[i]), mean=float(means[i]), _m2=float(m2s[i]))
        for i in range(k)
    )
    return TrialRecord(
        winner=space.strategies[winner_ord],
        winner_ordinal=winner_ord,
        stats=stats,
        iterations=iteration,
        retained={space.strategies[o]: vals for o, vals in retained.items()},
    )


@dataclass(frozen=True)
class TrialTally:
    """Winner bookkeeping across trials.

    `classes` partitions the strategies that have won at least once;
    near-equivalent winners share a class whose pooled wins are credited
    to its most frequent member (ties to the lexicographically smaller).
    """

    trials: int = 0
    wins: Mapping[int, int] = field(default_factory=dict)  # ordinal -> count
    classes: tuple = ()          # of tuples of ordinals
    representatives: tuple = ()  # one ordinal per class

    def record_win(self, ordinal: int) -> "TrialTally":
        wins = dict(self.wins)
        wins[ordinal] = wins.get(ordinal, 0) + 1
        return replace(self, trials=self.trials + 1, wins=wins)

    def class_credit(self, index: int) -> int:
        return sum(self.wins.get(o, 0) for o in self.classes[index])


def merge_equivalents(
    tally: TrialTally, means: np.ndarray, threshold: float = 0.99
) -> TrialTally:
    """Recompute winner classes from the latest per-strategy means.

    Strategies whose normalised mean (mean - worst) / (best - worst)
    reaches `threshold` are mutually near-equivalent and form one class;
    every other past winner stands alone.  Classes are rebuilt from
    scratch each trial so membership tracks the current estimates instead
    of accumulating history.
    """
    if not 0.0 < threshold <= 1.0:
        raise ValueError(f"threshold must lie in (0, 1], got {threshold}")
    means = np.asarray(means, dtype=np.float64)
    spread = float(means.max() - means.min())
    if spread == 0.0:
        near = set(range(means.size))
    else:
        low = float(means.min())
        near = {o for o in range(means.size) if (means[o] - low) / spread >= threshold}
    winners = sorted(tally.wins)
    merged = tuple(o for o in winners if o in near)
    classes = ([merged] if merged else []) + [(o,) for o in winners if o not in near]
    classes.sort(key=lambda c: c[0])
    reps = tuple(
        min(cls, key=lambda o: (-tally.wins.get(o, 0), o)) for cls in classes
    )
    return replace(tally, classes=tuple(classes), representatives=reps)


@dataclass(frozen=True)
class SolveResult:
    """Outcome of a gated multi-trial solver run."""

    chosen: tuple
    trials: int
    stats: tuple                 # final trial's SampleStats per strategy
    apcs: float
    apcs_x: dict                 # cutoff -> bound, cutoffs APCS_X_LEVELS
    wins: dict                   # allocation -> win count
    classes: tuple               # of tuples of allocations
    wall_time: float
    seed: int
    gate_failures: int           # trials not credited to the chosen class
    total_samples: int = 0       # defender samples drawn over all trials
    retained: dict = field(default_factory=dict)  # allocation -> raw samples


def run_algorithm1(
    params: ModelParams,
    budget: SolverBudget,
    gate: GateParams = GateParams(),
    seed: int = 0,
    space: SpaceIndex | None = None,
    inner_response: InnerResponse | None = None,
    threads: int = 1,
    retain_for: Sequence[tuple] | None = None,
    equivalence_threshold: float = 0.99,
    max_trials: int | None = None,
) -> SolveResult:
    """Repeat trials until the selection gate passes for the leading class.

    After each trial the winner tally is re-merged against the trial's
    final means, the leading class (greatest pooled wins, ties to the
    lexicographically smallest representative) is gated with f = trials
    not credited to it, and its representative is returned on success.
    """
    started = time.perf_counter()
    if space is None:
        space = SpaceIndex.build(params.n)
    tables = _prepare_tables(params, space, None)
    tally = TrialTally()
    retained_all: dict[tuple, list[float]] = {}
    trial_index = 0
    total_samples = 0
    while True:
        trial_index += 1
        if max_trials is not None and trial_index > max_trials:
            raise RuntimeError(f"gate did not pass within {max_trials} trials")
        record = run_trial(
            params,
            budget,
            seed,
            trial_index=trial_index,
            space=space,
            tables=tables,
            inner_response=inner_response,
            threads=threads,
            retain_for=retain_for,
        )
        for alloc, values in record.retained.items():
            retained_all.setdefault(alloc, []).extend(values)
        total_samples += sum(s.count for s in record.stats)
        tally = tally.record_win(record.winner_ordinal)
        tally = merge_equivalents(tally, record.means, equivalence_threshold)
        credits = [tally.class_credit(i) for i in range(len(tally.classes))]
        lead = min(
            range(len(tally.classes)),
            key=lambda i: (-credits[i], tally.representatives[i]),
        )
        failures = tally.trials - credits[lead]
        if wilson_gate(tally.trials, failures, gate):
            chosen_ord = tally.representatives[lead]
            break
    stats = list(record.stats)
    return SolveResult(
        chosen=space.strategies[chosen_ord],
        trials=tally.trials,
        stats=record.stats,
        apcs=apcs(stats),
        apcs_x={x: apcs_x(stats, x) for x in APCS_X_LEVELS},
        wins={space.strategies[o]: c for o, c in sorted(tally.wins.items())},
        classes=tuple(
            tuple(space.strategies[o] for o in cls) for cls in tally.classes
        ),
        wall_time=time.perf_counter() - started,
        seed=seed,
        gate_failures=failures,
        total_samples=total_samples,
        retained=retained_all,
    )


def solve_exact_partial_analytic(
    params: ModelParams,
    n_r: int,
    rng: np.random.Generator,
    space: SpaceIndex | None = None,
) -> list[tuple[tuple, float]]:
    """Rank all defender allocations with only trait sampling stochastic.

    For each d, draws n_r trait vectors, resolves the adversary's argmax
    exactly from the closed-form tables, and averages the closed-form
    defender value of each response.  Returns (allocation, estimate) pairs
    sorted by descending estimate, ties lexicographic.
    """
    if n_r < 1:
        raise ValueError(f"trait sample count must be >= 1, got {n_r}")
    if space is None:
        space = SpaceIndex.build(params.n)
    ranked = []
    for d in space:
        tables = response_tables(params, d, space)
        traits = bl.sample_traits_batch(params, rng, n_r)
        responses = best_response_exact_batch(tables, traits)
        ranked.append((d, float(tables.def_value[responses].mean())))
    ranked.sort(key=lambda item: (-item[1], space.ordinal(item[0])))
    return ranked


def solve_exact_fully_numeric(
    params: ModelParams,
    n_r: int,
    n_s: int,
    rng: np.random.Generator,
    space: SpaceIndex | None = None,
) -> list[tuple[tuple, float]]:
    """As :func:`solve_exact_partial_analytic`, with quadrature in place of
    closed forms for both the adversary's argmax and the defender value."""
    if n_r < 1:
        raise ValueError(f"trait sample count must be >= 1, got {n_r}")
    if space is None:
        space = SpaceIndex.build(params.n)
    ranked = []
    for d in space:
        tables = response_tables_numeric(params, d, space, n_s)
        traits = bl.sample_traits_batch(params, rng, n_r)
        responses = best_response_exact_batch(tables, traits)
        ranked.append((d, float(tables.def_value[responses].mean())))
    ranked.sort(key=lambda item: (-item[1], space.ordinal(item[0])))
    return ranked
