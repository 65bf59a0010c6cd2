"""The binomial selection gate that decides when to stop re-running trials.

A strategy is accepted once its wins clear a one-sided lower confidence
bound on the win probability.  The demo prints the trials-needed table,
shows the stopping profile is exactly linear in the failure count, and
compares the closed-form expected trial count with a Monte Carlo rerun.
"""

from arasim.rng import substream
from arasim.trials import (
    GateParams,
    build_trial_plan,
    expected_trials,
    expected_trials_mc,
    min_trials,
    sufficient_condition,
    wilson_gate,
)


def main() -> None:
    print("fewest trials to accept a leader with f failures (alpha = 0.05)")
    print("  f:        " + "  ".join(f"{f:3d}" for f in range(7)))
    print("  trials:   " + "  ".join(f"{min_trials(f):3d}" for f in range(7)))
    print()

    print(f"sufficient condition for the 2f + 3 profile holds: {sufficient_condition()}")
    worst = max(abs(min_trials(f) - (2 * f + 3)) for f in range(201))
    print(f"largest deviation from 2f + 3 over f = 0..200: {worst}")
    print()

    print("gate decisions near the boundary")
    for trials, failures in ((3, 0), (4, 1), (5, 1), (6, 2), (7, 2)):
        verdict = wilson_gate(trials, failures)
        print(f"  {trials} trials, {failures} failures -> {'accept' if verdict else 'continue'}")
    print()

    for p_b in (0.6, 0.7647):
        model = expected_trials(p_b)
        mc, se = expected_trials_mc(p_b, reps=20_000, rng=substream(4))
        print(f"expected trials at win probability {p_b}: {model:.2f} "
              f"(simulation {mc:.2f} +- {se:.3f})")
    print()

    print("full plan for a mildly dominant strategy:")
    for line in build_trial_plan(0.6).format_lines():
        print(f"  {line}")
    print()
    print("the standard-form bound is stricter, so its profile bends:")
    plan = build_trial_plan(0.6, gate=GateParams(mode="standard-wilson"))
    for line in plan.format_lines()[:4]:
        print(f"  {line}")


if __name__ == "__main__":
    main()
