"""Selection-gate math: Wilson bound, trial-count table, expected stopping time."""

import math

import numpy as np
import pytest

from arasim.trials import (
    GateParams,
    build_trial_plan,
    expected_trials,
    expected_trials_mc,
    min_trials,
    sufficiency_detail,
    sufficient_condition,
    wilson_gate,
)


def textbook_wilson_lower(n: int, f: int, z: float) -> float:
    """Independent re-derivation of the one-sided Wilson lower bound."""
    p_hat = (n - f) / n
    center = (p_hat + z * z / (2 * n)) / (1 + z * z / n)
    half = (z / (1 + z * z / n)) * math.sqrt(p_hat * (1 - p_hat) / n + z * z / (4 * n * n))
    return center - half


# ------------------------------------------------------------------- the gate


def test_gate_params_defaults_and_validation():
    gate = GateParams()
    assert gate.alpha == 0.05
    assert gate.z == pytest.approx(1.6448536269514722)
    assert gate.n0 == 3
    with pytest.raises(ValueError):
        GateParams(alpha=0.0)
    with pytest.raises(ValueError):
        GateParams(alpha=0.5)
    with pytest.raises(ValueError):
        GateParams(mode="two-sided")


def test_gate_spot_values():
    assert wilson_gate(3, 0) is True
    assert wilson_gate(5, 1) is True
    assert wilson_gate(4, 1) is False
    assert wilson_gate(1, 0) is False
    assert wilson_gate(2, 0) is False


def test_gate_argument_errors():
    with pytest.raises(ValueError):
        wilson_gate(0, 0)
    with pytest.raises(ValueError):
        wilson_gate(5, 6)
    with pytest.raises(ValueError):
        wilson_gate(5, -1)


def test_standard_mode_matches_textbook_interval():
    gate = GateParams(mode="standard-wilson")
    for n in range(1, 60):
        for f in range(0, n + 1):
            expect = textbook_wilson_lower(n, f, gate.z) > 0.5
            assert wilson_gate(n, f, gate) is expect


def test_default_mode_is_never_harder_than_standard():
    """The n^3 radicand shrinks the subtracted half-width for f > 0."""
    std = GateParams(mode="standard-wilson")
    assert wilson_gate(5, 1, std) is False  # passes only in the default mode
    for n in range(1, 40):
        for f in range(0, n + 1):
            if wilson_gate(n, f, std):
                assert wilson_gate(n, f)
    assert min_trials(1, std) > min_trials(1)


def test_min_trials_table():
    assert [min_trials(f) for f in range(7)] == [3, 5, 7, 9, 11, 13, 15]


def test_min_trials_is_minimal():
    for f in range(7):
        n = min_trials(f)
        assert wilson_gate(n, f)
        if n > 1:
            assert not wilson_gate(n - 1, f)


def test_min_trials_linear_growth_bracket():
    gate = GateParams()
    for f in range(0, 201):
        assert min_trials(f) - (2 * f + gate.n0) in (0, 1)


def test_min_trials_rejects_negative():
    with pytest.raises(ValueError):
        min_trials(-1)


# ------------------------------------------------------------- sufficiency


def test_sufficient_condition_holds_at_default_alpha():
    assert sufficient_condition() is True
    detail = sufficiency_detail()
    assert detail["lhs"] == pytest.approx(0.032075, abs=1e-6)
    assert detail["rhs_quarter_form"] == pytest.approx(0.155240, abs=1e-6)
    assert detail["holds_quarter_form"] is True
    # the alternate z^2/2 reading is not even satisfiable here
    assert detail["rhs_half_form"] == pytest.approx(-0.521146, abs=1e-6)
    assert detail["holds_half_form"] is False


# ---------------------------------------------------------- expected trials


def test_expected_trials_reference_points():
    assert abs(expected_trials(0.6) - 15.0) <= 0.5
    assert abs(expected_trials(0.7647) - 5.7) <= 0.2


def test_expected_trials_certain_winner_stops_at_n0():
    assert expected_trials(1.0) == pytest.approx(3.0)
    assert expected_trials(0.999999) == pytest.approx(3.0, abs=1e-4)


def test_expected_trials_monotone_in_win_probability():
    grid = [0.55, 0.6, 0.65, 0.7, 0.7647, 0.85, 0.95, 1.0]
    values = [expected_trials(p) for p in grid]
    assert all(a >= b - 1e-9 for a, b in zip(values, values[1:]))
    assert all(v >= 3.0 - 1e-12 for v in values)


def test_expected_trials_domain_errors():
    for bad in (0.5, 0.25, 1.0001, -1.0):
        with pytest.raises(ValueError):
            expected_trials(bad)


def test_expected_trials_agrees_with_direct_simulation():
    """Recursion vs the literal gate-after-every-trial procedure, 3 SE."""
    rng = np.random.default_rng(20240817)
    for p in (0.55, 0.6, 0.7, 0.7647, 0.9):
        reps = 4000 if p == 0.55 else 8000
        mean, se = expected_trials_mc(p, reps=reps, rng=rng)
        assert abs(mean - expected_trials(p)) < 3 * se


def test_expected_trials_mc_validation():
    with pytest.raises(ValueError):
        expected_trials_mc(0.5)
    with pytest.raises(ValueError):
        expected_trials_mc(0.7, reps=1)


# -------------------------------------------------------------------- plans


def test_build_trial_plan_contents():
    plan = build_trial_plan(0.6, max_f=6)
    assert plan.n0 == 3
    assert plan.table == ((0, 3), (1, 5), (2, 7), (3, 9), (4, 11), (5, 13), (6, 15))
    assert plan.expected == pytest.approx(expected_trials(0.6))
    assert plan.sufficiency["holds_quarter_form"]
    with pytest.raises(ValueError):
        build_trial_plan(0.6, max_f=-1)
    with pytest.raises(ValueError):
        build_trial_plan(0.5)


def test_build_trial_plan_nonlinear_profile_has_no_expectation():
    plan = build_trial_plan(0.6, GateParams(mode="standard-wilson"), max_f=2)
    assert plan.expected is None
    assert plan.table[0] == (0, 3)
    assert plan.table[1][1] > 5  # profile grows faster than 2f + 3
    assert "n/a" in plan.format_lines()[1]


def test_trial_plan_format_lines():
    lines = build_trial_plan(0.6, max_f=4).format_lines()
    assert lines[0] == "gate: alpha=0.05 mode=paper-faithful z=1.644854 n0=3"
    assert lines[1].startswith("expected trials at p_b=0.6: 15.")
    assert lines[2] == "minimum trials by leader losses:"
    assert lines[3].strip() == "f=  0  N=3"
    assert lines[-1].startswith("linear-growth check: lhs=0.032075 vs rhs=0.155240 -> holds")
    assert "(alternate z^2/2 form: rhs=-0.521146, fails)" in lines[-1]
