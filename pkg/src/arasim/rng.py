"""Deterministic random-stream derivation.

Every stochastic routine in this package draws from a generator obtained
through :func:`substream`, keyed by a root seed plus an integer path such
as (trial, strategy ordinal, iteration, draw index).  Streams derived from
distinct paths are independent, and the mapping from (seed, path) to stream
is fixed, so results do not depend on the order in which units of work are
executed.  Single-threaded and multi-threaded runs therefore produce
identical output.
"""

from __future__ import annotations

import numpy as np

__all__ = ["substream"]

_MASK64 = 0xFFFFFFFFFFFFFFFF


def substream(seed: int, *path: int) -> np.random.Generator:
    """Return the generator for `seed` at the given integer path.

    Path entries must be non-negative integers.  The same (seed, path)
    always yields a generator producing the same draw sequence.
    """
    if not 0 <= seed <= _MASK64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    for entry in path:
        if entry < 0:
            raise ValueError(f"path entries must be non-negative, got {path}")
    ss = np.random.SeedSequence(entropy=seed, spawn_key=tuple(path))
    return np.random.Generator(np.random.PCG64(ss))
