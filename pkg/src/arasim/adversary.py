"""Attacker best response for a fixed defender allocation.

Given defender allocation d and a realised trait vector r, the attacker
maximises expected utility over the same strategy space.  Expected utility
is linear in r with per-target coefficients that depend only on (d_i, a_i),
so a (candidates x targets) coefficient table turns exact best response
into one matrix product, batched over many trait draws at once.

`best_response_ocba` instead solves the same argmax by simulation: it
samples the success measure per candidate and steers replications with the
budget-allocation engine, stopping on iteration cap or mean stall.  This is
the inner solver the sequential game simulation nests inside every
defender-strategy replication.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import blotto as bl
from .blotto import SPAN, ModelParams
from .ocba import StopState, allocate_arrays, merge_moment_arrays
from .strategies import SpaceIndex

__all__ = [
    "ResponseTables",
    "response_tables",
    "response_tables_numeric",
    "NestedBudget",
    "BestResponse",
    "best_response_exact",
    "best_response_exact_batch",
    "best_response_ocba",
]


@dataclass(frozen=True)
class NestedBudget:
    """Replication budget for one inner best-response solve."""

    n_init: int
    per_iteration: int
    max_iterations: int = 20

    def __post_init__(self) -> None:
        if self.n_init < 2:
            raise ValueError(f"initial replications must be >= 2, got {self.n_init}")
        if self.per_iteration < 1:
            raise ValueError(f"per-iteration budget must be >= 1, got {self.per_iteration}")
        if self.max_iterations < 1:
            raise ValueError(f"iteration cap must be >= 1, got {self.max_iterations}")

    @classmethod
    def default(cls, n: int) -> "NestedBudget":
        return cls(n_init=2**n, per_iteration=5**n)


@dataclass(frozen=True)
class ResponseTables:
    """Per-candidate tables for one defender allocation d.

    floor[j, i]      success-measure floor h_i(d_i, a_i) for candidate j
    att_coeff[j, i]  coefficient of r_i in E_S[u_A(S, r) | d, a_j]
    def_value[j]     E_S[u_D(S) | d, a_j]
    """

    floor: np.ndarray
    att_coeff: np.ndarray
    def_value: np.ndarray

    def attacker_values(self, traits: np.ndarray) -> np.ndarray:
        """Expected attacker utility per candidate; traits (..., n) -> (..., k)."""
        return np.asarray(traits, dtype=np.float64) @ self.att_coeff.T


def _gather(grid: np.ndarray, space: SpaceIndex) -> np.ndarray:
    """(n, 11) per-target table -> (k, n) per-candidate matrix."""
    return grid[np.arange(grid.shape[0])[None, :], space.tenths]


def response_tables(params: ModelParams, d, space: SpaceIndex) -> ResponseTables:
    """Closed-form tables: kernel averages over S done analytically."""
    grid = bl.floor_grid(params, d)
    bracket = 1.0 + params.kernel_weight[:, None] * np.exp(-bl.RATE * grid)
    floor = _gather(grid, space)
    att_coeff = _gather(bracket, space) / params.n
    def_value = -(_gather(bracket * params.v_arr[:, None], space).sum(axis=1)) / params.n
    return ResponseTables(floor=floor, att_coeff=att_coeff, def_value=def_value)


def response_tables_numeric(
    params: ModelParams, d, space: SpaceIndex, n_s: int
) -> ResponseTables:
    """Quadrature tables: kernel averages over S by n_s-node midpoint rule."""
    if n_s < 1:
        raise ValueError(f"need at least one quadrature node, got {n_s}")
    grid = bl.floor_grid(params, d)
    step = SPAN / n_s
    mids = grid[:, :, None] + (np.arange(n_s) + 0.5) * step          # (n, 11, n_s)
    kern = np.exp(-bl.RATE * (mids - params.c_h_arr[:, None, None] - SPAN / 2.0))
    bracket = 1.0 - kern.mean(axis=2)                                 # (n, 11)
    floor = _gather(grid, space)
    att_coeff = _gather(bracket, space) / params.n
    def_value = -(_gather(bracket * params.v_arr[:, None], space).sum(axis=1)) / params.n
    return ResponseTables(floor=floor, att_coeff=att_coeff, def_value=def_value)


@dataclass(frozen=True)
class BestResponse:
    strategy: tuple
    ordinal: int
    value: float
    method: str


def best_response_exact_batch(tables: ResponseTables, traits: np.ndarray) -> np.ndarray:
    """Argmax candidate ordinals for a (m, n) block of trait draws.

    Ties resolve to the lexicographically smallest candidate (ordinal
    order is lexicographic).
    """
    values = tables.attacker_values(traits)
    return np.argmax(values, axis=-1)


def best_response_exact(
    params: ModelParams,
    d,
    r: np.ndarray,
    space: SpaceIndex | None = None,
    tables: ResponseTables | None = None,
) -> BestResponse:
    """Exact attacker argmax for one trait draw, by closed-form enumeration."""
    if space is None:
        space = SpaceIndex.build(params.n)
    if tables is None:
        tables = response_tables(params, d, space)
    values = tables.attacker_values(np.asarray(r, dtype=np.float64))
    ordinal = int(np.argmax(values))
    return BestResponse(
        strategy=space.strategies[ordinal],
        ordinal=ordinal,
        value=float(values[ordinal]),
        method="exact",
    )


def _ocba_argmax(
    params: ModelParams,
    tables: ResponseTables,
    r: np.ndarray,
    budget: NestedBudget,
    rng: np.random.Generator,
) -> tuple[int, float]:
    """Simulation best response: (winning ordinal, its sample mean)."""
    k = tables.floor.shape[0]
    n = params.n
    r = np.asarray(r, dtype=np.float64)
    counts = np.zeros(k, dtype=np.int64)
    means = np.zeros(k)
    m2s = np.zeros(k)
    plan = np.full(k, budget.n_init, dtype=np.int64)
    stop = StopState()
    for iteration in range(1, budget.max_iterations + 1):
        total = int(plan.sum())
        s = np.repeat(tables.floor, plan, axis=0) + SPAN * rng.random((total, n))
        values = bl.utility_attacker(params, s, r)
        offsets = np.concatenate(([0], np.cumsum(plan)[:-1]))
        sums = np.add.reduceat(values, offsets)
        b_means = sums / plan
        centered = values - np.repeat(b_means, plan)
        b_m2s = np.add.reduceat(centered * centered, offsets)
        merge_moment_arrays(counts, means, m2s, plan, b_means, b_m2s)
        stop.record(means, plan)
        if k == 1 or stop.should_stop():
            break
        if iteration < budget.max_iterations:
            sigmas = np.sqrt(m2s / (counts - 1))
            plan, _, _ = allocate_arrays(means, sigmas, budget.per_iteration)
    winner = int(np.argmax(means))
    return winner, float(means[winner])


def best_response_ocba(
    params: ModelParams,
    d,
    r: np.ndarray,
    budget: NestedBudget,
    rng: np.random.Generator,
    space: SpaceIndex | None = None,
    tables: ResponseTables | None = None,
) -> BestResponse:
    """Attacker argmax estimated by nested budget-allocated simulation."""
    if space is None:
        space = SpaceIndex.build(params.n)
    if tables is None:
        tables = response_tables(params, d, space)
    ordinal, value = _ocba_argmax(params, tables, r, budget, rng)
    return BestResponse(
        strategy=space.strategies[ordinal], ordinal=ordinal, value=value, method="ocba"
    )
