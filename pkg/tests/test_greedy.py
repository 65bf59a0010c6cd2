"""Random-restart greedy baseline: stopping law, search behaviour, statistics."""

import dataclasses

import numpy as np
import pytest

from arasim.adversary import best_response_exact
from arasim.blotto import ModelParams, TriangularDist
from arasim.experiments import builtin_model
from arasim.greedy import GreedyConfig, GreedyResult, greedy_search, laplace_stop

P2 = builtin_model("original-n2")


def exact_hook(params, d, r, rng):
    return best_response_exact(params, d, r)


# -------------------------------------------------------------- stopping law


def test_laplace_threshold_boundary():
    # (0 + 1)/(18 + 2) = .05 is not strictly below the default threshold
    assert laplace_stop(0, 18, 0.05) is False
    assert laplace_stop(0, 19, 0.05) is True


def test_laplace_zero_restarts_never_stops():
    assert laplace_stop(0, 0, 0.05) is False
    assert laplace_stop(0, 0, 0.4) is False


def test_laplace_new_discoveries_push_stop_out():
    assert laplace_stop(2, 19, 0.05) is False
    assert laplace_stop(2, 58, 0.05) is False  # 3/60 = .05, still not below
    assert laplace_stop(2, 59, 0.05) is True


def test_laplace_argument_errors():
    with pytest.raises(ValueError):
        laplace_stop(-1, 5, 0.05)
    with pytest.raises(ValueError):
        laplace_stop(6, 5, 0.05)


# ------------------------------------------------------------- configuration


def test_config_validation():
    with pytest.raises(ValueError):
        GreedyConfig(samples_per_eval=1)
    with pytest.raises(ValueError):
        GreedyConfig(nested_samples=0)
    with pytest.raises(ValueError):
        GreedyConfig(inner_restarts=0)
    with pytest.raises(ValueError):
        GreedyConfig(max_restarts=0)
    with pytest.raises(ValueError):
        GreedyConfig(stop_threshold=0.0)
    with pytest.raises(ValueError):
        GreedyConfig(stop_threshold=1.0)


# -------------------------------------------------------------------- search


def test_single_strategy_space_stops_immediately():
    params = ModelParams(
        c_h=(0.4,), c_a=(-0.5,), c_d=(-0.5,), v=(1.0,),
        traits=(TriangularDist(1.0, 1.2, 1.4),),
    )
    result = greedy_search(params, GreedyConfig(samples_per_eval=5, max_restarts=50), seed=0)
    assert result.best == (10,)
    assert result.local_optima == frozenset({(10,)})
    assert result.restarts == 1
    assert result.apcs == 1.0


def test_replay_and_thread_waves_are_identical():
    cfg = GreedyConfig(samples_per_eval=3, nested_samples=5, inner_restarts=1, max_restarts=6)
    first = greedy_search(P2, cfg, seed=4)
    second = greedy_search(P2, cfg, seed=4)
    threaded = greedy_search(P2, cfg, seed=4, threads=3)
    for other in (second, threaded):
        for field in dataclasses.fields(GreedyResult):
            if field.name == "stats":
                continue
            assert getattr(first, field.name) == getattr(other, field.name), field.name
        assert set(first.stats) == set(other.stats)
        for alloc, s in first.stats.items():
            o = other.stats[alloc]
            assert (s.count, s.mean, s.variance) == (o.count, o.mean, o.variance)


def test_latest_evaluation_replaces_stored_estimate():
    """Counts never pool across visits: every stored stat holds exactly one batch."""
    cfg = GreedyConfig(samples_per_eval=4, max_restarts=10, inner_restarts=1, nested_samples=5)
    result = greedy_search(P2, cfg, seed=1)
    assert result.evaluations > len(result.stats)  # some allocation was revisited
    for s in result.stats.values():
        assert s.count == cfg.samples_per_eval


def test_search_with_exact_inner_finds_true_local_optima():
    """Generous per-evaluation sampling localises both peaks of the landscape."""
    cfg = GreedyConfig(samples_per_eval=6000, nested_samples=10, max_restarts=5)
    result = greedy_search(P2, cfg, seed=3, inner_response=exact_hook)
    assert result.best == (4, 6)
    assert result.local_optima <= {(4, 6), (10, 0)}
    assert (4, 6) in result.local_optima


def test_search_counts_and_bounds_are_coherent():
    cfg = GreedyConfig(samples_per_eval=8, nested_samples=5, inner_restarts=1, max_restarts=12)
    result = greedy_search(P2, cfg, seed=21)
    assert result.restarts <= cfg.max_restarts
    assert result.evaluations >= result.restarts  # each restart evaluates its start
    assert result.best in result.local_optima
    assert result.local_optima <= set(result.stats)
    assert set(result.apcs_x) == {0.99, 0.98, 0.97, 0.96, 0.95}
    best_mean = result.stats[result.best].mean
    assert all(result.stats[o].mean <= best_mean for o in result.local_optima)
