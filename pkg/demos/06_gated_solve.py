"""A full gated solve on the two-target set, checked against enumeration.

The solver repeats simulation trials, each of which allocates its budget
adaptively and votes for a winner; trials stop once the leader's vote
record clears the binomial gate.  Exact enumeration of the same landscape
shows what the simulation was hunting for.
"""

from arasim.adversary import NestedBudget
from arasim.experiments import builtin_model
from arasim.rng import substream
from arasim.solver import SolverBudget, run_algorithm1, solve_exact_partial_analytic
from arasim.strategies import SpaceIndex, format_allocation


def main() -> None:
    params = builtin_model("original-n2")
    space = SpaceIndex.build(2)

    ranked = solve_exact_partial_analytic(params, 50_000, substream(60), space)
    print("exact landscape (50k trait draws per defense):")
    for alloc, value in ranked:
        bar = "#" * max(0, int(40 * (value - ranked[-1][1]) / (ranked[0][1] - ranked[-1][1])))
        print(f"  {format_allocation(alloc)}  {value:+.4f}  {bar}")
    print(f"two local peaks: {format_allocation(ranked[0][0])} (global) and 1.0,0.0")
    print()

    budgets = {
        "lean": SolverBudget.desk(2),
        "strong": SolverBudget(n_init=32, per_iteration=300, nested=NestedBudget(8, 100)),
    }
    for label, budget in budgets.items():
        result = run_algorithm1(params, budget, seed=900, space=space)
        classes = " | ".join(
            "=".join(format_allocation(a) for a in group) for group in result.classes
        )
        verdict = "matched" if result.chosen == ranked[0][0] else "missed"
        print(f"{label} budget ({budget.n_init} initial + {budget.per_iteration} per "
              f"iteration, inner {budget.nested.n_init}+{budget.nested.per_iteration}):")
        print(f"  chose {format_allocation(result.chosen)} after {result.trials} trials "
              f"({result.gate_failures} votes went elsewhere); "
              f"{result.total_samples} defender samples")
        print(f"  end-of-run correct-selection bound {result.apcs:+.3f}; "
              f"vote classes {classes}")
        print(f"  -> {verdict} the exact argmax")
        print()

    print("at lean budgets the inner search misidentifies the attacker often")
    print("enough to bias the landscape toward the decoy peak; richer budgets")
    print("recover the true argmax, and repeated-run reports quantify how often")


if __name__ == "__main__":
    main()
