"""Sequential defend-attack resource allocation, solved by nested simulation.

The package models a two-player contest over ``n`` targets: a defender
commits a split of one unit of budget (in tenths), an attacker with private
preferences best-responds, and stochastic outcomes score both sides.  The
defender's problem is solved three ways — a gated sequential-trial solver
built on optimal computing-budget allocation, exact enumeration (with a
closed-form inner stage or a fully numeric one), and a greedy local-search
baseline — so the routes can be checked against each other.

Typical use::

    from arasim import builtin_model, SolverBudget, run_algorithm1

    params = builtin_model("original-n2")
    result = run_algorithm1(params, SolverBudget.paper(params.n), seed=42)
    print(result.chosen, result.trials)

The ``arasim`` console script exposes the same capabilities as subcommands.
"""

from .adversary import (
    BestResponse,
    NestedBudget,
    ResponseTables,
    best_response_exact,
    best_response_exact_batch,
    best_response_ocba,
    response_tables,
    response_tables_numeric,
)
from .blotto import (
    RATE,
    SPAN,
    ModelParams,
    TriangularDist,
    closed_index_attacker,
    closed_index_defender,
    expected_attacker_closed,
    expected_defender_closed,
    expected_numeric,
    outcome_floor,
    sample_success,
    sample_traits,
    sample_traits_batch,
    utility_attacker,
    utility_defender,
)
from .experiments import (
    BUILTIN_MODELS,
    ConfigError,
    ExperimentConfig,
    RunReport,
    RunRow,
    builtin_model,
    export_quantiles,
    load_config,
    run_experiment,
    save_config,
    size_report,
    size_report_csv,
)
from .greedy import GreedyConfig, GreedyResult, greedy_search, laplace_stop
from .ocba import (
    AllocationPlan,
    SampleStats,
    StopState,
    allocate,
    allocate_arrays,
    apcs,
    apcs_x,
    merge_moment_arrays,
)
from .rng import substream
from .solver import (
    SolveResult,
    SolverBudget,
    TrialRecord,
    TrialTally,
    merge_equivalents,
    run_algorithm1,
    run_trial,
    solve_exact_fully_numeric,
    solve_exact_partial_analytic,
)
from .strategies import (
    TOTAL_TENTHS,
    Allocation,
    SpaceIndex,
    computation_size,
    count,
    enumerate_space,
    format_allocation,
    neighbors,
    parse_allocation,
)
from .trials import (
    GateParams,
    TrialPlan,
    build_trial_plan,
    expected_trials,
    expected_trials_mc,
    min_trials,
    sufficiency_detail,
    sufficient_condition,
    wilson_gate,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # strategy space
    "Allocation",
    "TOTAL_TENTHS",
    "count",
    "enumerate_space",
    "SpaceIndex",
    "neighbors",
    "format_allocation",
    "parse_allocation",
    "computation_size",
    # outcome model
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
    # budget allocation
    "SampleStats",
    "AllocationPlan",
    "allocate",
    "allocate_arrays",
    "merge_moment_arrays",
    "apcs",
    "apcs_x",
    "StopState",
    # selection gate / trial planning
    "GateParams",
    "wilson_gate",
    "min_trials",
    "sufficient_condition",
    "sufficiency_detail",
    "expected_trials",
    "expected_trials_mc",
    "TrialPlan",
    "build_trial_plan",
    # attacker stage
    "ResponseTables",
    "response_tables",
    "response_tables_numeric",
    "NestedBudget",
    "BestResponse",
    "best_response_exact",
    "best_response_exact_batch",
    "best_response_ocba",
    # defender solvers
    "SolverBudget",
    "TrialRecord",
    "TrialTally",
    "SolveResult",
    "run_trial",
    "merge_equivalents",
    "run_algorithm1",
    "solve_exact_partial_analytic",
    "solve_exact_fully_numeric",
    # greedy baseline
    "GreedyConfig",
    "GreedyResult",
    "laplace_stop",
    "greedy_search",
    # experiments
    "ConfigError",
    "ExperimentConfig",
    "RunRow",
    "RunReport",
    "BUILTIN_MODELS",
    "builtin_model",
    "load_config",
    "save_config",
    "run_experiment",
    "export_quantiles",
    "size_report",
    "size_report_csv",
    # determinism
    "substream",
]
