"""Two-player resource-allocation battle model.

Each of n targets receives defender effort d_i and attacker effort a_i
(tenths of a unit budget).  Effort moves the floor of a per-target success
measure S_i, uniform on [h_i, h_i + 0.1]:

    h_i(d_i, a_i) = -(2/4.6) * (ln(c_a_i*a_i + 1) - ln(c_d_i*d_i + 1)) + c_h_i

with effectiveness coefficients in (-1, 0], so h_i rises with attacker
effort and falls with defender effort.  c_h_i is the no-effort baseline.
Utilities are exponential in the success measure and additive over targets:

    defender  u_D(s)    = (1/n) * sum_i v_i * (exp(-4.6*(s_i - c_h_i - .05)) - 1)
    attacker  u_A(s, r) = (1/n) * sum_i r_i * (1 - exp(-4.6*(s_i - c_h_i - .05)))

where v_i is the defender's value weight and r_i the attacker's, the latter
uncertain to the defender and modelled by independent triangular traits.

Expected utilities over S have closed forms (the uniform average of the
exponential kernel), and `expected_numeric` recomputes them by midpoint
quadrature as an independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .strategies import validate_allocation

__all__ = [
    "RATE",
    "SPAN",
    "TriangularDist",
    "ModelParams",
    "outcome_floor",
    "sample_success",
    "sample_traits",
    "sample_traits_batch",
    "utility_defender",
    "utility_attacker",
    "closed_index_attacker",
    "closed_index_defender",
    "expected_attacker_closed",
    "expected_defender_closed",
    "expected_numeric",
]

RATE = 4.6     # exponential decay rate of the utility kernel
SPAN = 0.1     # width of the uniform success-measure interval
_SLOPE = 2.0 / RATE
_FLOOR_MAX = 1.0 - SPAN  # keeps S_i inside [0, 1]


@dataclass(frozen=True)
class TriangularDist:
    """Triangular distribution on [low, high] with mode `mode`.

    low == high is allowed and degenerates to a point mass.
    """

    low: float
    mode: float
    high: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.low <= self.mode <= self.high):
            raise ValueError(f"need 0 <= low <= mode <= high, got {self}")

    def mean(self) -> float:
        return (self.low + self.mode + self.high) / 3.0

    def sample(self, q) -> np.ndarray | float:
        """Inverse CDF at quantile(s) q in [0, 1]."""
        q = np.asarray(q, dtype=np.float64)
        if np.any(q < 0.0) or np.any(q > 1.0):
            raise ValueError("quantiles must lie in [0, 1]")
        l, m, u = self.low, self.mode, self.high
        if u == l:
            return np.full_like(q, l)[()]
        pivot = (m - l) / (u - l)
        lower = l + np.sqrt(np.clip(q, 0.0, None) * (u - l) * (m - l))
        upper = u - np.sqrt(np.clip(1.0 - q, 0.0, None) * (u - l) * (u - m))
        return np.where(q <= pivot, lower, upper)[()]


def _as_float_tuple(values: Iterable[float], name: str) -> tuple:
    out = tuple(float(x) for x in values)
    if not all(math.isfinite(x) for x in out):
        raise ValueError(f"{name} must be finite, got {out}")
    return out


@dataclass(frozen=True)
class ModelParams:
    """Per-target model parameters; all tuples share length n.

    Construction verifies the success-measure floor stays inside
    [0, 1 - SPAN] at the effort extremes (it is monotone in each effort,
    so the extremes bound it everywhere).
    """

    c_h: tuple
    c_a: tuple
    c_d: tuple
    v: tuple
    traits: tuple  # of TriangularDist

    def __post_init__(self) -> None:
        object.__setattr__(self, "c_h", _as_float_tuple(self.c_h, "c_h"))
        object.__setattr__(self, "c_a", _as_float_tuple(self.c_a, "c_a"))
        object.__setattr__(self, "c_d", _as_float_tuple(self.c_d, "c_d"))
        object.__setattr__(self, "v", _as_float_tuple(self.v, "v"))
        object.__setattr__(self, "traits", tuple(self.traits))
        n = len(self.c_h)
        if n < 1:
            raise ValueError("need at least one target")
        for name in ("c_a", "c_d", "v", "traits"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} has length {len(getattr(self, name))}, expected {n}")
        for trait in self.traits:
            if not isinstance(trait, TriangularDist):
                raise ValueError(f"traits must be TriangularDist, got {trait!r}")
        for name in ("c_a", "c_d"):
            for c in getattr(self, name):
                if not -1.0 < c <= 0.0:
                    raise ValueError(f"{name} coefficients must lie in (-1, 0], got {c}")
        if any(x <= 0.0 for x in self.v):
            raise ValueError(f"value weights must be positive, got {self.v}")
        eps = 1e-12
        for i in range(n):
            # monotone: max floor at d=0, a=1; min floor at d=1, a=0
            hi = -_SLOPE * math.log(self.c_a[i] + 1.0) + self.c_h[i]
            lo = _SLOPE * math.log(self.c_d[i] + 1.0) + self.c_h[i]
            if lo < -eps or hi > _FLOOR_MAX + eps:
                raise ValueError(
                    f"target {i}: success-measure floor range [{lo:.6f}, {hi:.6f}] "
                    f"leaves [0, {_FLOOR_MAX}]"
                )

    @property
    def n(self) -> int:
        return len(self.c_h)

    @cached_property
    def c_h_arr(self) -> np.ndarray:
        return np.array(self.c_h)

    @cached_property
    def c_a_arr(self) -> np.ndarray:
        return np.array(self.c_a)

    @cached_property
    def c_d_arr(self) -> np.ndarray:
        return np.array(self.c_d)

    @cached_property
    def v_arr(self) -> np.ndarray:
        return np.array(self.v)

    @cached_property
    def trait_low(self) -> np.ndarray:
        return np.array([t.low for t in self.traits])

    @cached_property
    def trait_mode(self) -> np.ndarray:
        return np.array([t.mode for t in self.traits])

    @cached_property
    def trait_high(self) -> np.ndarray:
        return np.array([t.high for t in self.traits])

    @cached_property
    def kernel_weight(self) -> np.ndarray:
        """Per-target weight W_i in the closed-form kernel average.

        Averaging exp(-RATE*(s - c_h_i - SPAN/2)) over s uniform on
        [h, h + SPAN] gives -W_i * exp(-RATE*h), where
        W_i = (1/(RATE*SPAN)) * exp(RATE*(c_h_i + SPAN/2)) * (exp(-RATE*SPAN) - 1) < 0,
        so per-target expected utilities are (r_i/n)(1 + W_i e^{-RATE h_i})
        for the attacker and -(v_i/n)(1 + W_i e^{-RATE h_i}) for the defender.
        """
        return (
            (1.0 / (RATE * SPAN))
            * np.exp(RATE * (self.c_h_arr + SPAN / 2.0))
            * (math.exp(-RATE * SPAN) - 1.0)
        )


def _effort_fractions(alloc: Sequence[int], n: int) -> np.ndarray:
    return np.array(validate_allocation(alloc, n), dtype=np.float64) / 10.0


def floor_from_fractions(params: ModelParams, d_frac: np.ndarray, a_frac: np.ndarray) -> np.ndarray:
    """Success-measure floor for effort fractions; broadcasts over leading axes."""
    return (
        -_SLOPE * (np.log(params.c_a_arr * a_frac + 1.0) - np.log(params.c_d_arr * d_frac + 1.0))
        + params.c_h_arr
    )


def floor_grid(params: ModelParams, d: Sequence[int]) -> np.ndarray:
    """(n, 11) floor table over the attacker's per-target tenth levels.

    Entry [i, t] is h_i(d_i, t/10); target i's component of any candidate
    response a is read off at column a_i.
    """
    d_frac = _effort_fractions(d, params.n)
    levels = np.arange(11.0) / 10.0
    att = np.log(params.c_a_arr[:, None] * levels[None, :] + 1.0)
    deff = np.log(params.c_d_arr * d_frac + 1.0)
    return -_SLOPE * (att - deff[:, None]) + params.c_h_arr[:, None]


def outcome_floor(params: ModelParams, d: Sequence[int], a: Sequence[int]) -> np.ndarray:
    """Per-target floor h_i(d_i, a_i) for tenth allocations d, a."""
    h = floor_from_fractions(params, _effort_fractions(d, params.n), _effort_fractions(a, params.n))
    if not np.all(np.isfinite(h)):
        raise ValueError(f"non-finite success-measure floor for d={d}, a={a}")
    return h


def sample_success(
    params: ModelParams, d: Sequence[int], a: Sequence[int], rng: np.random.Generator
) -> np.ndarray:
    """One draw of the success-measure vector S ~ Uniform[h, h + SPAN]."""
    return outcome_floor(params, d, a) + SPAN * rng.random(params.n)


def sample_traits(params: ModelParams, rng: np.random.Generator) -> np.ndarray:
    """One draw of the attacker trait vector r (independent triangulars)."""
    return sample_traits_batch(params, rng, 1)[0]


def sample_traits_batch(params: ModelParams, rng: np.random.Generator, size: int) -> np.ndarray:
    """(size, n) trait draws via per-target inverse CDF on a single uniform block."""
    if size < 0:
        raise ValueError(f"size must be non-negative, got {size}")
    q = rng.random((size, params.n))
    l, m, u = params.trait_low, params.trait_mode, params.trait_high
    width = u - l
    safe = np.where(width > 0.0, width, 1.0)
    pivot = np.where(width > 0.0, (m - l) / safe, 1.0)
    lower = l + np.sqrt(q * width * (m - l))
    upper = u - np.sqrt((1.0 - q) * width * (u - m))
    return np.where(q <= pivot, lower, upper)


def _kernel(params: ModelParams, s: np.ndarray) -> np.ndarray:
    return np.exp(-RATE * (s - params.c_h_arr - SPAN / 2.0))


def utility_defender(params: ModelParams, s) -> np.ndarray | float:
    """Defender utility of success vector(s) s with shape (..., n)."""
    s = np.asarray(s, dtype=np.float64)
    return (params.v_arr * (_kernel(params, s) - 1.0)).sum(axis=-1) / params.n


def utility_attacker(params: ModelParams, s, r) -> np.ndarray | float:
    """Attacker utility of success vector(s) s under trait vector(s) r."""
    s = np.asarray(s, dtype=np.float64)
    r = np.asarray(r, dtype=np.float64)
    return (r * (1.0 - _kernel(params, s))).sum(axis=-1) / params.n


def closed_index_attacker(
    params: ModelParams, d: Sequence[int], a: Sequence[int], r: np.ndarray
) -> np.ndarray:
    """Per-target expected attacker utility E_S[u_A]_i = (r_i/n)(1 + W_i e^{-RATE h_i})."""
    h = outcome_floor(params, d, a)
    r = np.asarray(r, dtype=np.float64)
    return r / params.n * (1.0 + params.kernel_weight * np.exp(-RATE * h))


def closed_index_defender(params: ModelParams, d: Sequence[int], a: Sequence[int]) -> np.ndarray:
    """Per-target expected defender utility, -(v_i/n)(1 + W_i e^{-RATE h_i})."""
    h = outcome_floor(params, d, a)
    return -params.v_arr / params.n * (1.0 + params.kernel_weight * np.exp(-RATE * h))


def expected_attacker_closed(
    params: ModelParams, d: Sequence[int], a: Sequence[int], r: np.ndarray
) -> float:
    """E_S[u_A(S, r)] in closed form."""
    return float(closed_index_attacker(params, d, a, r).sum())


def expected_defender_closed(params: ModelParams, d: Sequence[int], a: Sequence[int]) -> float:
    """E_S[u_D(S)] in closed form."""
    return float(closed_index_defender(params, d, a).sum())


def expected_numeric(
    params: ModelParams,
    d: Sequence[int],
    a: Sequence[int],
    who: str,
    r: np.ndarray | None = None,
    n_s: int = 10,
) -> float:
    """Expected utility by midpoint quadrature with n_s nodes per target.

    Utilities are additive over targets, so the n-dimensional product-grid
    average collapses to independent per-target averages; cost is O(n*n_s).
    """
    if n_s < 1:
        raise ValueError(f"need at least one quadrature node, got {n_s}")
    if who not in ("defender", "attacker"):
        raise ValueError(f"who must be 'defender' or 'attacker', got {who!r}")
    if who == "attacker":
        if r is None:
            raise ValueError("attacker expectation requires the trait vector r")
        weight = np.asarray(r, dtype=np.float64)
        sign = -1.0
    else:
        if r is not None:
            raise ValueError("defender expectation takes no trait vector")
        weight = params.v_arr
        sign = 1.0
    h = outcome_floor(params, d, a)
    step = SPAN / n_s
    mids = h[:, None] + (np.arange(n_s) + 0.5) * step      # (n, n_s) nodes
    kern = _kernel(params, mids.T).T                       # evaluate, keep (n, n_s)
    per_target = weight * sign * (kern.mean(axis=1) - 1.0)
    return float(per_target.sum() / params.n)
