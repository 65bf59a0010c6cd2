"""Experiment configuration, orchestration, and report emission.

Experiments are described by small TOML files (or built programmatically),
name one of four solver paths (the trial solver, the two exact references,
or the greedy baseline), and run a number of repeats with seeds derived
from a single base seed.  Each experiment writes:

* ``report.csv``     — one row per run: chosen allocation, trial count,
  percent-of-optimum against an exact reference (when computed), and the
  correct-selection bounds.  Byte-identical across reruns of the same
  configuration and seed.
* ``timings.csv``    — wall-clock seconds per run, kept out of the main
  report so the report stays reproducible byte for byte.
* ``landscape_run<i>.csv`` — per-strategy estimates next to the exact
  values when available, for plotting estimate quality.
* ``quantiles_run<i>_<alloc>.csv`` — normal-quantile pairs for retained
  raw utility samples, for normality inspection.

Percent-of-optimum is reported in two conventions, both labelled: the raw
utility ratio, and the ratio after shifting by the worst strategy's value
(span).  Utilities may be negative, which makes the raw ratio ambiguous
on its own.
"""

from __future__ import annotations

import csv
import io
import os
import time
from dataclasses import dataclass, replace
from pathlib import Path
from statistics import NormalDist
from typing import Mapping, Sequence

import numpy as np

try:
    import tomllib as _toml  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover - environment dependent
    import tomli as _toml

from .blotto import ModelParams, TriangularDist
from .greedy import GreedyConfig, greedy_search
from .rng import substream
from .solver import (
    APCS_X_LEVELS,
    GateParams,
    SolveResult,
    SolverBudget,
    run_algorithm1,
    solve_exact_fully_numeric,
    solve_exact_partial_analytic,
)
from .strategies import (
    SpaceIndex,
    computation_size,
    count,
    format_allocation,
    parse_allocation,
)

__all__ = [
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
]

SOLVERS = ("algorithm1", "exact-partial", "exact-numeric", "greedy")

REPORT_HEADER = (
    "solver",
    "n",
    "run",
    "seed",
    "trials",
    "chosen",
    "pct_optimum_raw",
    "pct_optimum_span",
    "apcs",
    "apcs_99",
    "apcs_98",
    "apcs_97",
    "apcs_96",
    "apcs_95",
)

THREADS_ENV = "ARASIM_THREADS"


class ConfigError(ValueError):
    """Configuration problem, annotated with file and field context."""

    def __init__(self, message: str, *, path: str | None = None, key: str | None = None):
        parts = []
        if path:
            parts.append(str(path))
        if key:
            parts.append(key)
        prefix = " -> ".join(parts)
        super().__init__(f"{prefix}: {message}" if prefix else message)
        self.path = path
        self.key = key


def _original(n: int) -> ModelParams:
    return ModelParams(
        c_h=(0.4, 0.35, 0.4, 0.4, 0.3)[:n],
        c_a=(-0.4984, -0.4984, -0.5529, -0.6015, -0.6834)[:n],
        c_d=(-0.4984, -0.4373, -0.4373, -0.5529, -0.4626)[:n],
        v=(1.3, 0.8, 1.25, 0.7, 1.1)[:n],
        traits=(
            TriangularDist(0.8, 1.0, 1.5),
            TriangularDist(0.5, 0.8, 2.5),
            TriangularDist(1.0, 1.5, 3.5),
            TriangularDist(0.3, 0.7, 1.1),
            TriangularDist(0.6, 1.1, 1.9),
        )[:n],
    )


def _set2_mirroring() -> ModelParams:
    return ModelParams(
        c_h=(0.4, 0.35, 0.4, 0.4),
        c_a=(-0.4984, -0.4984, -0.5529, -0.6015),
        c_d=(-0.4982, -0.4373, -0.4373, -0.5529),
        v=(1.3, 0.8, 1.25, 0.7),
        traits=(
            TriangularDist(1.0, 1.3, 1.6),
            TriangularDist(0.5, 0.8, 1.1),
            TriangularDist(0.95, 1.25, 1.55),
            TriangularDist(0.4, 0.7, 1.0),
        ),
    )


def _set3_low_incentive() -> ModelParams:
    return ModelParams(
        c_h=(0.33, 0.33, 0.33, 0.4),
        c_a=(-0.5730, -0.5210, -0.6194, -0.6015),
        c_d=(-0.4108, -0.4108, -0.3390, -0.5529),
        v=(1.3, 0.8, 1.25, 0.7),
        traits=(
            TriangularDist(0.8, 1.0, 1.5),
            TriangularDist(0.5, 0.8, 2.5),
            TriangularDist(1.0, 1.5, 3.5),
            TriangularDist(0.3, 0.7, 1.1),
        ),
    )


def _set4_randomized() -> ModelParams:
    return ModelParams(
        c_h=(0.39, 0.35, 0.37, 0.34),
        c_a=(-0.5827, -0.5210, -0.5529, -0.5730),
        c_d=(-0.5631, -0.3540, -0.4242, -0.4982),
        v=(2.3, 1.7, 3.4, 2.1),
        traits=(
            TriangularDist(2.8, 3.0, 3.1),
            TriangularDist(2.5, 3.4, 3.5),
            TriangularDist(0.8, 1.1, 1.9),
            TriangularDist(2.9, 3.2, 3.5),
        ),
    )


BUILTIN_MODELS = {
    "original-n2": lambda: _original(2),
    "original-n3": lambda: _original(3),
    "original-n4": lambda: _original(4),
    "original-n5": lambda: _original(5),
    "set2-mirroring": _set2_mirroring,
    "set3-low-incentive": _set3_low_incentive,
    "set4-randomized": _set4_randomized,
}


def builtin_model(name: str) -> ModelParams:
    """Expand a named built-in parameter set to its full ModelParams."""
    try:
        return BUILTIN_MODELS[name]()
    except KeyError:
        known = ", ".join(sorted(BUILTIN_MODELS))
        raise ConfigError(f"unknown built-in model {name!r}; known: {known}", key="model.name")


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully validated description of one experiment."""

    model: ModelParams
    solver: str
    seed: int
    repeats: int
    budget: SolverBudget
    gate: GateParams = GateParams()
    greedy: GreedyConfig = GreedyConfig()
    model_name: str | None = None
    output_dir: str = "."
    retain_samples_for: tuple = ()
    reference_max_n: int = 3
    reference_n_r: int = 10_000

    def __post_init__(self) -> None:
        if self.solver not in SOLVERS:
            raise ConfigError(
                f"solver must be one of {', '.join(SOLVERS)}, got {self.solver!r}",
                key="experiment.solver",
            )
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer", key="experiment.seed")
        if self.repeats < 0:
            raise ConfigError("repeats must be non-negative", key="experiment.repeats")
        for alloc in self.retain_samples_for:
            if len(alloc) != self.model.n:
                raise ConfigError(
                    f"retained allocation {alloc} does not match n={self.model.n}",
                    key="experiment.retain_samples_for",
                )


def _expect(table: Mapping, key: str, kind, *, path: str, section: str):
    if key not in table:
        raise ConfigError("missing required key", path=path, key=f"{section}.{key}")
    value = table[key]
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, kind) or isinstance(value, bool) and kind is int:
        raise ConfigError(
            f"expected {getattr(kind, '__name__', kind)}, got {type(value).__name__}",
            path=path,
            key=f"{section}.{key}",
        )
    return value


def _model_from_table(table: Mapping, path: str) -> tuple[ModelParams, str | None]:
    if "name" in table:
        name = _expect(table, "name", str, path=path, section="model")
        return builtin_model(name), name
    for key in ("c_h", "c_a", "c_d", "v", "traits"):
        if key not in table:
            raise ConfigError("missing required key", path=path, key=f"model.{key}")
    def vector(key: str) -> tuple:
        value = table[key]
        if not isinstance(value, list) or not all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in value
        ):
            raise ConfigError("expected a list of numbers", path=path, key=f"model.{key}")
        return tuple(float(x) for x in value)

    traits_raw = table["traits"]
    if not isinstance(traits_raw, list):
        raise ConfigError("expected a list of [low, mode, high] triples", path=path, key="model.traits")
    traits = []
    for i, triple in enumerate(traits_raw):
        if not isinstance(triple, list) or len(triple) != 3:
            raise ConfigError(
                "each trait distribution is a [low, mode, high] triple",
                path=path,
                key=f"model.traits[{i}]",
            )
        try:
            traits.append(TriangularDist(*(float(x) for x in triple)))
        except ValueError as exc:
            raise ConfigError(str(exc), path=path, key=f"model.traits[{i}]")
    try:
        model = ModelParams(
            c_h=vector("c_h"), c_a=vector("c_a"), c_d=vector("c_d"),
            v=vector("v"), traits=tuple(traits),
        )
    except ValueError as exc:
        raise ConfigError(str(exc), path=path, key="model")
    return model, None


def _budget_from_table(table: Mapping, n: int, path: str) -> SolverBudget:
    profile = table.get("profile")
    if profile is not None:
        if profile == "desk":
            base = SolverBudget.desk(n)
        elif profile == "paper":
            base = SolverBudget.paper(n)
        else:
            raise ConfigError(
                f"profile must be 'desk' or 'paper', got {profile!r}",
                path=path,
                key="budget.profile",
            )
    else:
        base = SolverBudget.desk(n)
    overrides = {}
    for key in ("n_init", "per_iteration", "n_r", "n_s", "max_iterations"):
        if key in table:
            overrides[key] = _expect(table, key, int, path=path, section="budget")
    nested_over = {}
    for key, attr in (
        ("nested_n_init", "n_init"),
        ("nested_per_iteration", "per_iteration"),
        ("nested_max_iterations", "max_iterations"),
    ):
        if key in table:
            nested_over[attr] = _expect(table, key, int, path=path, section="budget")
    try:
        nested = replace(base.nested, **nested_over) if nested_over else base.nested
        return replace(base, nested=nested, **overrides)
    except ValueError as exc:
        raise ConfigError(str(exc), path=path, key="budget")


def load_config(path: str | os.PathLike) -> ExperimentConfig:
    """Parse and validate a TOML experiment description."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ConfigError(str(exc), path=str(path))
    try:
        doc = _toml.loads(raw.decode("utf-8"))
    except (_toml.TOMLDecodeError, UnicodeDecodeError) as exc:
        raise ConfigError(f"parse failure: {exc}", path=str(path))
    p = str(path)

    if "experiment" not in doc:
        raise ConfigError("missing required table", path=p, key="experiment")
    exp = doc["experiment"]
    solver = _expect(exp, "solver", str, path=p, section="experiment")
    seed = _expect(exp, "seed", int, path=p, section="experiment")
    repeats = _expect(exp, "repeats", int, path=p, section="experiment")
    output_dir = exp.get("output_dir", ".")
    if not isinstance(output_dir, str):
        raise ConfigError("expected string", path=p, key="experiment.output_dir")

    if "model" not in doc:
        raise ConfigError("missing required table", path=p, key="model")
    model, model_name = _model_from_table(doc["model"], p)

    budget = _budget_from_table(doc.get("budget", {}), model.n, p)

    gate_table = doc.get("gate", {})
    try:
        gate = GateParams(
            alpha=float(gate_table.get("alpha", 0.05)),
            mode=gate_table.get("mode", "paper-faithful"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc), path=p, key="gate")

    greedy_table = doc.get("greedy", {})
    try:
        greedy = GreedyConfig(
            samples_per_eval=int(greedy_table.get("samples_per_eval", 100)),
            nested_samples=int(greedy_table.get("nested_samples", 100)),
            inner_restarts=int(greedy_table.get("inner_restarts", 3)),
            max_restarts=int(greedy_table.get("max_restarts", 1000)),
            stop_threshold=float(greedy_table.get("stop_threshold", 0.05)),
        )
    except ValueError as exc:
        raise ConfigError(str(exc), path=p, key="greedy")

    retain_raw = exp.get("retain_samples_for", [])
    if not isinstance(retain_raw, list):
        raise ConfigError("expected a list of allocation strings", path=p, key="experiment.retain_samples_for")
    retain = []
    for text in retain_raw:
        try:
            retain.append(parse_allocation(text))
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc), path=p, key="experiment.retain_samples_for")

    try:
        return ExperimentConfig(
            model=model,
            solver=solver,
            seed=seed,
            repeats=repeats,
            budget=budget,
            gate=gate,
            greedy=greedy,
            model_name=model_name,
            output_dir=output_dir,
            retain_samples_for=tuple(retain),
            reference_max_n=int(exp.get("reference_max_n", 3)),
            reference_n_r=int(exp.get("reference_n_r", 10_000)),
        )
    except ConfigError as exc:
        raise ConfigError(str(exc), path=p)


def _toml_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, str):
        escaped = value.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_toml_value(v) for v in value) + "]"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def save_config(cfg: ExperimentConfig, path: str | os.PathLike) -> None:
    """Serialize a configuration so that load_config reads it back identically."""
    lines = ["[experiment]"]
    lines.append(f"solver = {_toml_value(cfg.solver)}")
    lines.append(f"seed = {cfg.seed}")
    lines.append(f"repeats = {cfg.repeats}")
    lines.append(f"output_dir = {_toml_value(cfg.output_dir)}")
    if cfg.retain_samples_for:
        allocs = [format_allocation(a) for a in cfg.retain_samples_for]
        lines.append(f"retain_samples_for = {_toml_value(allocs)}")
    lines.append(f"reference_max_n = {cfg.reference_max_n}")
    lines.append(f"reference_n_r = {cfg.reference_n_r}")
    lines.append("")
    lines.append("[model]")
    if cfg.model_name is not None:
        lines.append(f"name = {_toml_value(cfg.model_name)}")
    else:
        m = cfg.model
        lines.append(f"c_h = {_toml_value(m.c_h)}")
        lines.append(f"c_a = {_toml_value(m.c_a)}")
        lines.append(f"c_d = {_toml_value(m.c_d)}")
        lines.append(f"v = {_toml_value(m.v)}")
        triples = [[t.low, t.mode, t.high] for t in m.traits]
        lines.append(f"traits = {_toml_value(triples)}")
    lines.append("")
    lines.append("[budget]")
    b = cfg.budget
    lines.append(f"n_init = {b.n_init}")
    lines.append(f"per_iteration = {b.per_iteration}")
    lines.append(f"n_r = {b.n_r}")
    lines.append(f"n_s = {b.n_s}")
    lines.append(f"max_iterations = {b.max_iterations}")
    lines.append(f"nested_n_init = {b.nested.n_init}")
    lines.append(f"nested_per_iteration = {b.nested.per_iteration}")
    lines.append(f"nested_max_iterations = {b.nested.max_iterations}")
    lines.append("")
    lines.append("[gate]")
    lines.append(f"alpha = {_toml_value(cfg.gate.alpha)}")
    lines.append(f"mode = {_toml_value(cfg.gate.mode)}")
    lines.append("")
    lines.append("[greedy]")
    g = cfg.greedy
    lines.append(f"samples_per_eval = {g.samples_per_eval}")
    lines.append(f"nested_samples = {g.nested_samples}")
    lines.append(f"inner_restarts = {g.inner_restarts}")
    lines.append(f"max_restarts = {g.max_restarts}")
    lines.append(f"stop_threshold = {_toml_value(g.stop_threshold)}")
    _atomic_write(Path(path), "\n".join(lines) + "\n")


@dataclass(frozen=True)
class RunRow:
    """One report line; percent fields are None when no reference exists."""

    solver: str
    n: int
    run: int
    seed: int
    trials: int | None
    chosen: tuple
    pct_optimum_raw: float | None
    pct_optimum_span: float | None
    apcs: float | None
    apcs_x: dict | None
    wall_time: float


@dataclass(frozen=True)
class RunReport:
    """All rows of one experiment plus the files written."""

    rows: tuple
    report_path: str | None
    timings_path: str | None
    landscape_paths: tuple
    quantile_paths: tuple


def _derived_seed(base: int, index: int) -> int:
    seq = np.random.SeedSequence(entropy=base, spawn_key=(index,))
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _pct(value: float | None) -> str:
    return "" if value is None else f"{value:.2f}"


def _bound(value: float | None) -> str:
    return "" if value is None else f"{value * 100:.4f}"


def _report_csv(rows: Sequence[RunRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(REPORT_HEADER)
    for row in rows:
        writer.writerow(
            [
                row.solver,
                row.n,
                row.run,
                row.seed,
                "" if row.trials is None else row.trials,
                format_allocation(row.chosen),
                _pct(row.pct_optimum_raw),
                _pct(row.pct_optimum_span),
                _bound(row.apcs),
                *(
                    _bound(None if row.apcs_x is None else row.apcs_x.get(x))
                    for x in APCS_X_LEVELS
                ),
            ]
        )
    return buffer.getvalue()


def _timings_csv(rows: Sequence[RunRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["solver", "n", "run", "seed", "wall_time_seconds"])
    for row in rows:
        writer.writerow([row.solver, row.n, row.run, row.seed, f"{row.wall_time:.3f}"])
    return buffer.getvalue()


def _landscape_csv(
    space: SpaceIndex,
    estimates: Mapping[tuple, float],
    exact: Mapping[tuple, float] | None,
) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["strategy", "estimate", "exact"])
    for d in space:
        est = estimates.get(d)
        writer.writerow(
            [
                format_allocation(d),
                "" if est is None else f"{est:.10f}",
                "" if exact is None else f"{exact[d]:.10f}",
            ]
        )
    return buffer.getvalue()


def export_quantiles(samples: Sequence[float], quantile_count: int = 99) -> list[tuple[float, float]]:
    """Standard-normal quantile pairs for a normality plot.

    Returns (theoretical quantile, sample quantile) pairs at probabilities
    k / (quantile_count + 1) for k = 1..quantile_count.  Requires at least
    quantile_count samples.
    """
    if quantile_count < 1:
        raise ValueError(f"quantile count must be positive, got {quantile_count}")
    values = np.asarray(list(samples), dtype=np.float64)
    if values.size < quantile_count:
        raise ValueError(
            f"need at least {quantile_count} samples, got {values.size}"
        )
    inv = NormalDist().inv_cdf
    pairs = []
    for k in range(1, quantile_count + 1):
        p = k / (quantile_count + 1)
        pairs.append((inv(p), float(np.quantile(values, p))))
    return pairs


def _quantiles_csv(pairs: Sequence[tuple[float, float]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["theoretical", "sample"])
    for theo, samp in pairs:
        writer.writerow([f"{theo:.10f}", f"{samp:.10f}"])
    return buffer.getvalue()


def size_report(n_range: Sequence[int]) -> list[tuple[int, int, int, int, int]]:
    """Rows of (n, strategy count, trait draws, nodes per target, computations)."""
    rows = []
    for n in n_range:
        if n < 1:
            raise ValueError(f"n must be positive, got {n}")
        rows.append((n, count(n), 10**n, 10, computation_size(n, 10**n, 10)))
    return rows


def size_report_csv(n_range: Sequence[int]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["n", "strategies", "n_r", "n_s", "computations"])
    for row in size_report(n_range):
        writer.writerow(row)
    return buffer.getvalue()


def _exact_reference(cfg: ExperimentConfig, space: SpaceIndex) -> dict[tuple, float] | None:
    if cfg.model.n > cfg.reference_max_n:
        return None
    rng = substream(_derived_seed(cfg.seed, 0))
    ranked = solve_exact_partial_analytic(cfg.model, cfg.reference_n_r, rng, space)
    return dict(ranked)


def _run_one(
    cfg: ExperimentConfig, run: int, space: SpaceIndex, threads: int
) -> tuple[RunRow, dict[tuple, float], dict[tuple, list]]:
    """Execute run number `run`; returns (row, estimates, retained samples)."""
    seed = _derived_seed(cfg.seed, run)
    started = time.perf_counter()
    retained: dict[tuple, list] = {}
    if cfg.solver == "algorithm1":
        result: SolveResult = run_algorithm1(
            cfg.model,
            cfg.budget,
            cfg.gate,
            seed=seed,
            space=space,
            threads=threads,
            retain_for=cfg.retain_samples_for or None,
        )
        chosen = result.chosen
        trials = result.trials
        bound = result.apcs
        bound_x = result.apcs_x
        estimates = {d: s.mean for d, s in zip(space, result.stats)}
        retained = result.retained
        wall = result.wall_time
    elif cfg.solver in ("exact-partial", "exact-numeric"):
        rng = substream(seed)
        if cfg.solver == "exact-partial":
            ranked = solve_exact_partial_analytic(cfg.model, cfg.budget.n_r, rng, space)
        else:
            ranked = solve_exact_fully_numeric(
                cfg.model, cfg.budget.n_r, cfg.budget.n_s, rng, space
            )
        chosen = ranked[0][0]
        trials = None
        bound = None
        bound_x = None
        estimates = dict(ranked)
        wall = time.perf_counter() - started
    else:  # greedy
        result = greedy_search(cfg.model, cfg.greedy, seed, space=space, threads=threads)
        chosen = result.best
        trials = result.restarts
        bound = result.apcs
        bound_x = result.apcs_x
        estimates = {d: s.mean for d, s in result.stats.items()}
        wall = time.perf_counter() - started
    row = RunRow(
        solver=cfg.solver,
        n=cfg.model.n,
        run=run,
        seed=seed,
        trials=trials,
        chosen=chosen,
        pct_optimum_raw=None,
        pct_optimum_span=None,
        apcs=bound,
        apcs_x=bound_x,
        wall_time=wall,
    )
    return row, estimates, retained


def run_experiment(cfg: ExperimentConfig, write_files: bool = True) -> RunReport:
    """Run cfg.repeats independent runs and emit the report files.

    Repeats use seeds derived from cfg.seed (index 0 is reserved for the
    exact reference), so any run can be reproduced in isolation.  Set the
    ARASIM_THREADS environment variable to parallelize; results are
    identical to the single-threaded reference either way.
    """
    space = SpaceIndex.build(cfg.model.n)
    threads = max(1, int(os.environ.get(THREADS_ENV, "1")))
    reference = _exact_reference(cfg, space)
    if reference is not None:
        ref_best = max(reference.values())
        ref_worst = min(reference.values())

    rows: list[RunRow] = []
    landscape_paths: list[str] = []
    quantile_paths: list[str] = []
    out = Path(cfg.output_dir)
    for run in range(1, cfg.repeats + 1):
        row, estimates, retained = _run_one(cfg, run, space, threads)
        if reference is not None:
            value = reference[row.chosen]
            raw = 100.0 * value / ref_best if ref_best != 0 else None
            span_denom = ref_best - ref_worst
            span = (
                100.0 * (value - ref_worst) / span_denom if span_denom != 0 else None
            )
            row = replace(row, pct_optimum_raw=raw, pct_optimum_span=span)
        rows.append(row)
        if write_files:
            landscape = out / f"landscape_run{run}.csv"
            _atomic_write(landscape, _landscape_csv(space, estimates, reference))
            landscape_paths.append(str(landscape))
            for alloc, samples in sorted(retained.items()):
                if len(samples) < 99:
                    continue
                tag = "-".join(str(t) for t in alloc)
                qpath = out / f"quantiles_run{run}_{tag}.csv"
                _atomic_write(qpath, _quantiles_csv(export_quantiles(samples, 99)))
                quantile_paths.append(str(qpath))

    report_path = timings_path = None
    if write_files:
        report = out / "report.csv"
        _atomic_write(report, _report_csv(rows))
        report_path = str(report)
        timings = out / "timings.csv"
        _atomic_write(timings, _timings_csv(rows))
        timings_path = str(timings)
    return RunReport(
        rows=tuple(rows),
        report_path=report_path,
        timings_path=timings_path,
        landscape_paths=tuple(landscape_paths),
        quantile_paths=tuple(quantile_paths),
    )
