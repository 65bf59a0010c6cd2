"""Discrete allocation strategies over n targets.

A strategy splits a unit budget into tenths: it is a tuple of n
non-negative integers summing to 10, interpreted as fractions
(7, 0, 3) = (0.7, 0.0, 0.3).  Both players draw from the same space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

__all__ = [
    "Allocation",
    "TOTAL_TENTHS",
    "count",
    "enumerate_space",
    "SpaceIndex",
    "neighbors",
    "format_allocation",
    "parse_allocation",
    "computation_size",
]

Allocation = tuple  # tuple[int, ...] of length n summing to TOTAL_TENTHS

TOTAL_TENTHS = 10

_MAX_ENUM_TARGETS = 8


def validate_allocation(alloc: Sequence[int], n: int | None = None) -> tuple:
    """Return `alloc` as a tuple after checking it is a valid strategy."""
    t = tuple(int(x) for x in alloc)
    if tuple(alloc) != t or any(x < 0 for x in t):
        raise ValueError(f"allocation entries must be non-negative integers: {alloc!r}")
    if sum(t) != TOTAL_TENTHS:
        raise ValueError(f"allocation must sum to {TOTAL_TENTHS} tenths: {alloc!r}")
    if n is not None and len(t) != n:
        raise ValueError(f"allocation has {len(t)} targets, expected {n}")
    return t


def count(n: int) -> int:
    """Number of ways to split 10 tenths over n targets: C(9 + n, n - 1)."""
    if n < 1:
        raise ValueError(f"need at least one target, got n={n}")
    return math.comb(TOTAL_TENTHS - 1 + n, n - 1)


def enumerate_space(n: int) -> list[tuple]:
    """All strategies for n targets in ascending lexicographic order."""
    if not 1 <= n <= _MAX_ENUM_TARGETS:
        raise ValueError(f"enumeration supports 1..{_MAX_ENUM_TARGETS} targets, got n={n}")
    out: list[tuple] = []

    def rec(prefix: list[int], remaining: int, slots: int) -> None:
        if slots == 1:
            out.append(tuple(prefix + [remaining]))
            return
        for first in range(remaining + 1):
            rec(prefix + [first], remaining - first, slots - 1)

    rec([], TOTAL_TENTHS, n)
    return out


@dataclass(frozen=True)
class SpaceIndex:
    """Enumerated strategy space with ordinal lookup.

    `strategies` is in ascending lexicographic order, so ordinal order and
    lexicographic order coincide; ties broken by ordinal are therefore
    lexicographic.  `tenths` is the same data as an (k, n) integer array
    for vectorised evaluation.
    """

    n: int
    strategies: tuple = field(repr=False)
    tenths: np.ndarray = field(repr=False, compare=False)
    _ordinal: dict = field(repr=False, compare=False)

    @classmethod
    def build(cls, n: int) -> "SpaceIndex":
        strategies = tuple(enumerate_space(n))
        tenths = np.array(strategies, dtype=np.int64)
        ordinal = {s: i for i, s in enumerate(strategies)}
        return cls(n=n, strategies=strategies, tenths=tenths, _ordinal=ordinal)

    def __len__(self) -> int:
        return len(self.strategies)

    def __iter__(self) -> Iterator[tuple]:
        return iter(self.strategies)

    def ordinal(self, alloc: Sequence[int]) -> int:
        key = tuple(int(x) for x in alloc)
        try:
            return self._ordinal[key]
        except KeyError:
            raise ValueError(f"{alloc!r} is not a strategy for n={self.n}") from None


def neighbors(alloc: Sequence[int]) -> list[tuple]:
    """Strategies reachable by moving one tenth between two targets.

    Returned in ascending lexicographic order; never contains `alloc`.
    """
    a = validate_allocation(alloc)
    n = len(a)
    out = []
    for i in range(n):
        if a[i] == 0:
            continue
        for j in range(n):
            if j == i:
                continue
            b = list(a)
            b[i] -= 1
            b[j] += 1
            out.append(tuple(b))
    out.sort()
    return out


def format_allocation(alloc: Sequence[int]) -> str:
    """Serialize as comma-separated reals with one decimal: "0.7,0.0,0.3"."""
    a = validate_allocation(alloc)
    return ",".join(f"{t / 10:.1f}" for t in a)


def parse_allocation(text: str) -> tuple:
    """Inverse of :func:`format_allocation`."""
    parts = text.split(",")
    tenths = []
    for part in parts:
        try:
            value = float(part)
        except ValueError:
            raise ValueError(f"bad allocation field {part!r} in {text!r}") from None
        t = round(value * 10)
        if abs(value * 10 - t) > 1e-9 or not 0 <= t <= TOTAL_TENTHS:
            raise ValueError(f"allocation field {part!r} is not a tenth in [0, 1]")
        tenths.append(int(t))
    return validate_allocation(tenths)


def computation_size(n: int, n_r: int, n_s: int) -> int:
    """Brute-force work measure: |F_D| * |F_A| * (1 + N_R) * N_S**n.

    Exact integer arithmetic, no overflow for any input size.
    """
    if n < 1:
        raise ValueError(f"need at least one target, got n={n}")
    if n_r < 0:
        raise ValueError(f"trait sample count must be non-negative, got {n_r}")
    if n_s < 1:
        raise ValueError(f"outcome sample count must be positive, got {n_s}")
    k = count(n)
    return k * k * (1 + n_r) * n_s ** n
