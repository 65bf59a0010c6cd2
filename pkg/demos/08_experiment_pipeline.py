"""Batch experiments: TOML configs, repeated runs, and CSV reports.

An experiment is a named model, a solver, budgets, and a base seed; each
repeat derives its own seed so any run can be reproduced in isolation.
The same pipeline drives the `arasim` command line — every call below
names the shell equivalent it mirrors.
"""

import tempfile
from pathlib import Path

from arasim.adversary import NestedBudget
from arasim.cli import main as arasim
from arasim.experiments import (
    ExperimentConfig,
    GreedyConfig,
    builtin_model,
    run_experiment,
    save_config,
)
from arasim.solver import SolverBudget
from arasim.trials import GateParams


def main() -> None:
    with tempfile.TemporaryDirectory() as scratch:
        out = Path(scratch)
        cfg = ExperimentConfig(
            model=builtin_model("original-n2"),
            model_name="original-n2",
            solver="algorithm1",
            seed=7,
            repeats=3,
            budget=SolverBudget(n_init=40, per_iteration=60,
                                nested=NestedBudget(4, 25), n_r=200, n_s=10),
            gate=GateParams(),
            greedy=GreedyConfig(),
            output_dir=str(out / "runs"),
            retain_samples_for=((4, 6),),
        )
        (out / "runs").mkdir()
        config_path = out / "exp.toml"
        save_config(cfg, config_path)
        print(f"experiment description ({config_path.name}):")
        for line in config_path.read_text().splitlines():
            print(f"  {line}")
        print()

        print("running it in-process (shell: arasim solve --config exp.toml):")
        report = run_experiment(cfg)
        print(f"  report -> {report.report_path}")
        print(f"  quantile exports -> {[Path(p).name for p in report.quantile_paths]}")
        print()

        print("report.csv (percent-of-optimum columns use the exact reference):")
        for line in Path(report.report_path).read_text().splitlines():
            print(f"  {line}")
        print()

        print("the same binary answers planning questions without a config:")
        print("$ arasim size --n 4")
        arasim(["size", "--n", "4"])
        print()
        print("$ arasim plan-trials --p-b 0.7647 --max-f 3")
        arasim(["plan-trials", "--p-b", "0.7647", "--max-f", "3"])


if __name__ == "__main__":
    main()
