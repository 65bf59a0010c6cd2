"""Walk through the engagement model on the two-target built-in set.

Effort splits move each target's success-measure floor; the exponential
utility kernel prices the sampled outcome.  The demo ends by checking the
closed-form expected utilities against midpoint quadrature and a plain
Monte Carlo average, the two routes the library keeps independent.
"""

import numpy as np

from arasim.blotto import (
    expected_attacker_closed,
    expected_defender_closed,
    expected_numeric,
    outcome_floor,
    sample_success,
    sample_traits,
    utility_attacker,
    utility_defender,
)
from arasim.experiments import builtin_model
from arasim.rng import substream


def main() -> None:
    params = builtin_model("original-n2")
    print("two-target built-in set")
    print(f"  baseline floors        c_h = {params.c_h}")
    print(f"  attacker coefficients  c_a = {params.c_a}")
    print(f"  defender coefficients  c_d = {params.c_d}")
    print(f"  target values          v   = {params.v}")
    print()

    d, a = (4, 6), (10, 0)
    h = outcome_floor(params, d, a)
    print(f"defender plays {d}, attacker concentrates on target 0 with {a}")
    print(f"  success-measure floors: {np.round(h, 4)}")
    print("  (all effort on target 0 raises its floor; target 1 drops below baseline)")
    print()

    rng = substream(1)
    r = sample_traits(params, rng)
    s = sample_success(params, d, a, rng)
    print(f"one engagement draw: traits r = {np.round(r, 3)}, outcomes s = {np.round(s, 4)}")
    print(f"  defender utility u_D = {utility_defender(params, s):+.4f}")
    print(f"  attacker utility u_A = {utility_attacker(params, s, r):+.4f}")
    print()

    closed = expected_defender_closed(params, d, a)
    quad = expected_numeric(params, d, a, "defender", n_s=200)
    mc = np.mean([
        utility_defender(params, sample_success(params, d, a, rng))
        for _ in range(200_000)
    ])
    print("expected defender utility by three routes")
    print(f"  closed form           {closed:+.6f}")
    print(f"  200-node quadrature   {quad:+.6f}   (gap {abs(quad - closed):.2e})")
    print(f"  200k-sample Monte Carlo {mc:+.6f}   (gap {abs(mc - closed):.2e})")

    r = sample_traits(params, rng)
    gap = abs(
        expected_numeric(params, d, a, "attacker", r=r, n_s=200)
        - expected_attacker_closed(params, d, a, r)
    )
    print(f"attacker closed form vs quadrature at a fresh trait draw: gap {gap:.2e}")


if __name__ == "__main__":
    main()
