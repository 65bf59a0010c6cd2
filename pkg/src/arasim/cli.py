"""Command-line front end.

Subcommands map onto the library's main entry points:

* ``solve``       — trial solver with the selection gate (the default path)
* ``exact``       — exact reference solvers (partial-analytic or fully-numeric)
* ``greedy``      — greedy local-search baseline
* ``report``      — run whatever solver a config file names
* ``plan-trials`` — stopping-rule arithmetic: minimum-trial table, expected trials
* ``size``        — strategy-space and computation-count table

``solve``, ``exact``, ``greedy``, and ``report`` accept either a TOML config
(--config) or a built-in model selected by --n, plus overrides.  Experiment
outputs (report.csv, timings.csv, landscapes, quantiles) land in --out.
Set the ARASIM_THREADS environment variable to parallelize runs; results
are identical to the single-threaded reference.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .experiments import (
    ConfigError,
    ExperimentConfig,
    builtin_model,
    load_config,
    run_experiment,
    size_report_csv,
)
from .solver import GateParams, SolverBudget
from .strategies import format_allocation
from .trials import build_trial_plan

__all__ = ["main", "build_parser"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arasim",
        description="Two-player sequential risk-analysis solver and experiment runner.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", metavar="PATH", help="TOML experiment description")
        p.add_argument("--seed", type=int, metavar="U64", help="base seed override")
        p.add_argument(
            "--n", type=int, metavar="INT", help="built-in model size (selects original-n<N>)"
        )
        p.add_argument("--repeats", type=int, metavar="INT", help="number of runs")
        p.add_argument(
            "--profile", choices=("desk", "paper"), help="budget profile override"
        )
        p.add_argument("--out", metavar="DIR", help="output directory")

    add_common(sub.add_parser("solve", help="run the gated trial solver"))
    exact = sub.add_parser("exact", help="run an exact reference solver")
    add_common(exact)
    exact.add_argument(
        "--method",
        choices=("partial-analytic", "fully-numeric"),
        default="partial-analytic",
        help="exact evaluation route (default: partial-analytic)",
    )
    add_common(sub.add_parser("greedy", help="run the greedy baseline"))
    add_common(sub.add_parser("report", help="run the solver named by the config"))

    plan = sub.add_parser("plan-trials", help="stopping-rule arithmetic")
    plan.add_argument("--p-b", type=float, default=0.6, help="per-trial win probability (default .6)")
    plan.add_argument("--alpha", type=float, default=0.05, help="gate significance level")
    plan.add_argument(
        "--mode",
        choices=("paper-faithful", "standard-wilson"),
        default="paper-faithful",
        help="gate arithmetic variant",
    )
    plan.add_argument("--max-f", type=int, default=10, help="largest failure count tabulated")

    size = sub.add_parser("size", help="strategy-space and computation-count table")
    size.add_argument("--n", type=int, default=5, help="largest model size tabulated (default 5)")

    return parser


_SOLVER_FOR_COMMAND = {
    "solve": "algorithm1",
    "greedy": "greedy",
}


def _build_config(args: argparse.Namespace, command: str) -> ExperimentConfig:
    if args.n is not None and args.config:
        raise ConfigError("--n and --config are mutually exclusive", key=command)
    if args.config:
        cfg = load_config(args.config)
    else:
        if args.n is None:
            raise ConfigError("need --config or --n to choose a model", key=command)
        model = builtin_model(f"original-n{args.n}")
        cfg = ExperimentConfig(
            model=model,
            model_name=f"original-n{args.n}",
            solver="algorithm1",
            seed=0,
            repeats=1,
            budget=SolverBudget.desk(model.n),
            gate=GateParams(),
        )
    if command in _SOLVER_FOR_COMMAND:
        cfg = replace(cfg, solver=_SOLVER_FOR_COMMAND[command])
    elif command == "exact":
        cfg = replace(
            cfg,
            solver="exact-partial" if args.method == "partial-analytic" else "exact-numeric",
        )
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    if args.repeats is not None:
        cfg = replace(cfg, repeats=args.repeats)
    if args.profile is not None:
        profile = SolverBudget.desk if args.profile == "desk" else SolverBudget.paper
        cfg = replace(cfg, budget=profile(cfg.model.n))
    if args.out is not None:
        cfg = replace(cfg, output_dir=args.out)
    return cfg


def _run_and_print(cfg: ExperimentConfig) -> None:
    report = run_experiment(cfg)
    for row in report.rows:
        bits = [f"run {row.run}: chose {format_allocation(row.chosen)}"]
        if row.trials is not None:
            unit = "restarts" if cfg.solver == "greedy" else "trials"
            bits.append(f"{row.trials} {unit}")
        if row.pct_optimum_raw is not None:
            bits.append(f"{row.pct_optimum_raw:.2f}% of optimum")
        if row.apcs is not None:
            bits.append(f"apcs {row.apcs * 100:.2f}%")
        bits.append(f"{row.wall_time:.2f}s")
        print("  ".join(bits))
    if report.report_path:
        print(f"report: {report.report_path}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command in ("solve", "exact", "greedy", "report"):
            _run_and_print(_build_config(args, args.command))
        elif args.command == "plan-trials":
            gate = GateParams(alpha=args.alpha, mode=args.mode)
            plan = build_trial_plan(args.p_b, gate, max_f=args.max_f)
            print("\n".join(plan.format_lines()))
        elif args.command == "size":
            if args.n < 1:
                raise ConfigError("--n must be positive", key="size")
            sys.stdout.write(size_report_csv(range(1, args.n + 1)))
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
