"""Stopping gate on repeated selection trials, and its trial-count calculus.

A solver run repeats independent selection trials, each naming a winning
strategy.  The run stops once a one-sided Wilson score bound certifies, at
confidence 1 - alpha, that the most frequent winner is the majority
outcome: with N trials and f of them not won by the leader, the gate is

    1/2 < (N - f + z^2/2)/(N + z^2) - z/(N + z^2) * sqrt(f(N - f)/N^3 + z^2/4)

The default mode keeps the N^3 in the radicand.  The textbook Wilson
interval, after clearing denominators the same way, carries f(N - f)/N
instead; mode "standard-wilson" selects that form, which is strictly
harder to pass whenever f > 0.  All published count tables here
(minimum trials 3, 5, 7, ... for f = 0, 1, 2, ...) follow the default
mode; both are provided so the discrepancy stays visible.

With z for alpha = .05 and n0 = ceil(z^2) = 3, the minimum trial count at
f leader losses is N(f) = 2f + n0 (sometimes + 1), and `expected_trials`
gives the exact expected stopping time when each trial is an independent
win with probability p_b > 1/2, by recursing over the survivor mass at
the checkpoints N(m) = 2m + n0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from statistics import NormalDist

import numpy as np

__all__ = [
    "GateParams",
    "wilson_gate",
    "min_trials",
    "sufficient_condition",
    "sufficiency_detail",
    "expected_trials",
    "expected_trials_mc",
    "TrialPlan",
    "build_trial_plan",
]

_MODES = ("paper-faithful", "standard-wilson")


@dataclass(frozen=True)
class GateParams:
    """Confidence setting and radicand mode for the selection gate."""

    alpha: float = 0.05
    mode: str = "paper-faithful"

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 0.5:
            raise ValueError(f"alpha must lie in (0, 0.5), got {self.alpha}")
        if self.mode not in _MODES:
            raise ValueError(f"mode must be one of {_MODES}, got {self.mode!r}")

    @cached_property
    def z(self) -> float:
        """One-sided normal critical value at confidence 1 - alpha."""
        return NormalDist().inv_cdf(1.0 - self.alpha)

    @cached_property
    def n0(self) -> int:
        """Smallest integer >= z^2; the minimum conceivable trial count."""
        return math.ceil(self.z * self.z)


def wilson_gate(trials: int, failures: int, gate: GateParams = GateParams()) -> bool:
    """True when the leader's win share clears the lower confidence bound 1/2."""
    n, f = trials, failures
    if n < 1:
        raise ValueError(f"need at least one trial, got {n}")
    if not 0 <= f <= n:
        raise ValueError(f"failures must lie in [0, {n}], got {f}")
    z = gate.z
    z2 = z * z
    if gate.mode == "paper-faithful":
        radicand = f * (n - f) / n**3 + z2 / 4.0
    else:
        radicand = f * (n - f) / n + z2 / 4.0
    bound = (n - f + z2 / 2.0) / (n + z2) - z / (n + z2) * math.sqrt(radicand)
    return 0.5 < bound


def min_trials(failures: int, gate: GateParams = GateParams()) -> int:
    """Smallest N for which the gate passes with `failures` leader losses."""
    if failures < 0:
        raise ValueError(f"failures must be non-negative, got {failures}")
    start = max(1, 2 * failures + gate.n0 - 1)
    limit = 10 * (failures + gate.n0) + 1000
    for n in range(start, limit):
        if wilson_gate(n, failures, gate):
            return n
    raise RuntimeError(f"no passing trial count below {limit} for failures={failures}")


def sufficiency_detail(gate: GateParams = GateParams()) -> dict:
    """Both evaluations of the closed-form check that N(f) stays near 2f + n0.

    The check compares sqrt(3)/(18*n0) against (n0/(2z))^2 minus a z^2
    term.  Two circulated forms of that term exist, z^2/4 and z^2/2; only
    the z^2/4 form is consistent with the worked derivation (and with the
    check actually holding at alpha = .05), so it is the decisive one.
    """
    z, n0 = gate.z, gate.n0
    lhs = math.sqrt(3.0) / (18.0 * n0)
    rhs_quarter = (n0 / (2.0 * z)) ** 2 - z * z / 4.0
    rhs_half = (n0 / (2.0 * z)) ** 2 - z * z / 2.0
    return {
        "lhs": lhs,
        "rhs_quarter_form": rhs_quarter,
        "rhs_half_form": rhs_half,
        "holds_quarter_form": lhs < rhs_quarter,
        "holds_half_form": lhs < rhs_half,
    }


def sufficient_condition(gate: GateParams = GateParams()) -> bool:
    """True when N(f) in {2f + n0, 2f + n0 + 1} is guaranteed for all f."""
    return bool(sufficiency_detail(gate)["holds_quarter_form"])


def expected_trials(
    p_b: float, gate: GateParams = GateParams(), tail_tol: float = 1e-12
) -> float:
    """Expected trial count until the gate passes, for win probability p_b.

    Models the idealised stopping rule N >= 2f + n0: checkpoints sit at
    N(m) = 2m + n0, the process stops at the first checkpoint where the
    leader's losses f are at most m, and no stop can occur between
    checkpoints.  Tracks the survivor mass exactly and truncates once it
    falls below tail_tol.
    """
    if not 0.5 < p_b <= 1.0:
        raise ValueError(f"win probability must lie in (0.5, 1], got {p_b}")
    n0 = gate.n0
    if not sufficient_condition(gate) or any(
        min_trials(f, gate) != 2 * f + n0 for f in range(9)
    ):
        raise ValueError("gate does not follow the 2f + n0 stopping profile")
    p, q = p_b, 1.0 - p_b
    # survivor[k] = P(running after checkpoint m with k failures), k in m+1..2m+n0
    survivor = {k: math.comb(n0, k) * p ** (n0 - k) * q**k for k in range(1, n0 + 1)}
    expected = n0 * p**n0
    stopped_mass = p**n0
    two_step = {0: p * p, 1: 2.0 * p * q, 2: q * q}
    m = 0
    while survivor and sum(survivor.values()) >= tail_tol:
        m += 1
        if m > 200_000:
            raise RuntimeError(f"no convergence at p_b={p_b}: survivor mass stalls")
        nxt: dict[int, float] = {}
        for k, mass in survivor.items():
            for j, step in two_step.items():
                i = k + j
                if k == m and j == 0:
                    continue  # gate fires at this checkpoint
                nxt[i] = nxt.get(i, 0.0) + mass * step
        if m in survivor:
            t_m = survivor[m] * two_step[0]
            expected += (2 * m + n0) * t_m
            stopped_mass += t_m
        survivor = nxt
    return expected


def expected_trials_mc(
    p_b: float,
    gate: GateParams = GateParams(),
    reps: int = 10_000,
    rng: np.random.Generator | None = None,
) -> tuple[float, float]:
    """Monte Carlo mean stopping time and its standard error.

    Independent oracle for :func:`expected_trials`: runs the literal
    procedure, checking the gate after every trial.
    """
    if not 0.5 < p_b <= 1.0:
        raise ValueError(f"win probability must lie in (0.5, 1], got {p_b}")
    if reps < 2:
        raise ValueError(f"need at least 2 repetitions, got {reps}")
    if rng is None:
        rng = np.random.default_rng(0)
    counts = np.empty(reps, dtype=np.int64)
    block = rng.random(4096)
    used = 0
    for rep in range(reps):
        n = 0
        f = 0
        while True:
            if used == block.size:
                block = rng.random(4096)
                used = 0
            if block[used] >= p_b:
                f += 1
            used += 1
            n += 1
            if wilson_gate(n, f, gate):
                break
        counts[rep] = n
    mean = float(counts.mean())
    se = float(counts.std(ddof=1) / math.sqrt(reps))
    return mean, se


@dataclass(frozen=True)
class TrialPlan:
    """Stopping-rule summary for a given per-trial win probability.

    `expected` is None when the gate's minimum-trial profile is not the
    linear 2f + n0 family the expectation recursion is built on.
    """

    p_b: float
    alpha: float
    mode: str
    z: float
    n0: int
    expected: float | None
    table: tuple  # of (failures, minimum trials)
    sufficiency: dict

    def format_lines(self) -> list[str]:
        if self.expected is None:
            expected = "n/a (stopping profile is not linear in failures)"
        else:
            expected = f"{self.expected:.4f}"
        lines = [
            f"gate: alpha={self.alpha} mode={self.mode} z={self.z:.6f} n0={self.n0}",
            f"expected trials at p_b={self.p_b}: {expected}",
            "minimum trials by leader losses:",
        ]
        lines += [f"  f={f:3d}  N={n}" for f, n in self.table]
        s = self.sufficiency
        lines.append(
            "linear-growth check: "
            f"lhs={s['lhs']:.6f} vs rhs={s['rhs_quarter_form']:.6f} "
            f"-> {'holds' if s['holds_quarter_form'] else 'fails'} "
            f"(alternate z^2/2 form: rhs={s['rhs_half_form']:.6f}, "
            f"{'holds' if s['holds_half_form'] else 'fails'})"
        )
        return lines


def build_trial_plan(p_b: float, gate: GateParams = GateParams(), max_f: int = 10) -> TrialPlan:
    if max_f < 0:
        raise ValueError(f"max_f must be non-negative, got {max_f}")
    if not 0.5 < p_b <= 1.0:
        raise ValueError(f"win probability must lie in (0.5, 1], got {p_b}")
    table = tuple((f, min_trials(f, gate)) for f in range(max_f + 1))
    try:
        expected = expected_trials(p_b, gate)
    except ValueError:
        expected = None  # gate profile outside the recursion's reach
    return TrialPlan(
        p_b=p_b,
        alpha=gate.alpha,
        mode=gate.mode,
        z=gate.z,
        n0=gate.n0,
        expected=expected,
        table=table,
        sufficiency=sufficiency_detail(gate),
    )
