"""Experiment orchestration: spec files, presets, trial fan-out, CSV reports.

An :class:`ExperimentSpec` names a grid of (algorithm, problem) cells plus a
trial count and a master seed.  :func:`run_experiment` runs every cell,
aggregates, and optionally writes a report directory::

    summary.csv      one row per (algorithm, problem) cell
    trials.csv       one row per trial
    traces/*.csv     downsampled per-iteration convergence curves
    ttests.csv       Welch tests of every algorithm against the reference
    provenance.txt   versions, seeds, and the exact spec for re-running
    spec.json        the spec itself, ready for ``savlpso run``

Determinism contract: every trial's random stream is derived from
``(master_seed, algorithm index, problem index, trial index)`` alone, so
reports are byte-identical across re-runs and worker counts (wall-time
columns aside).
"""

import csv
import dataclasses
import hashlib
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from multiprocessing import get_context
from pathlib import Path

import numpy as np

from . import _backend, vl
from .benchmarks import get_problem
from .core import ConfigError, RunConfig
from .engine import run_trial
from .stats import aggregate, welch_t_test

FORMAT_VERSION = 1
DEFAULT_SEED = 20240817

# Convergence traces are capped at this many rows per trial; the final
# iteration is always present.
TRACE_POINTS = 500

SUMMARY_COLUMNS = ("algorithm", "problem", "D", "N", "mean", "std",
                   "success_ratio", "expected_fes", "n_trials")
TRIALS_COLUMNS = ("algorithm", "problem", "trial", "seed", "final_value",
                  "fe_at_acceptance", "wall_time")
TRACE_COLUMNS = ("iteration", "fe_count", "best_value", "f", "mu")
TTEST_COLUMNS = ("problem", "algorithm", "reference", "t_value", "dof",
                 "p_value", "significant_at_005")


@dataclass(frozen=True)
class ProblemSpec:
    """One benchmark instance: which function, at what size, with what swarm."""

    function: str
    dimension: int
    population: int

    def __post_init__(self):
        if self.dimension < 1:
            raise ConfigError("problem dimension must be at least 1")
        if self.population < 2:
            raise ConfigError("population must be at least 2")


@dataclass(frozen=True)
class AlgorithmSpec:
    """A labelled optimizer configuration (velocity-limit strategy plus PSO knobs)."""

    label: str
    vl: vl.VlStrategyConfig
    inertia_start: float = 0.9
    inertia_end: float = 0.4
    c1: float = 2.05
    c2: float = 2.05

    def __post_init__(self):
        if not self.label:
            raise ConfigError("algorithm label must be non-empty")
        if not isinstance(self.vl, vl.VlStrategyConfig):
            raise ConfigError("vl must be a VlStrategyConfig")


@dataclass(frozen=True)
class ExperimentSpec:
    """A full experiment: the cell grid, budget, and seeding."""

    name: str
    problems: tuple
    algorithms: tuple
    n_trials: int
    max_iters: int
    master_seed: int = DEFAULT_SEED
    reference_algorithm: str = None
    output_dir: str = None

    def __post_init__(self):
        object.__setattr__(self, "problems", tuple(self.problems))
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        if not self.name:
            raise ConfigError("experiment name must be non-empty")
        if not self.problems:
            raise ConfigError("experiment needs at least one problem")
        if not self.algorithms:
            raise ConfigError("experiment needs at least one algorithm")
        if self.n_trials < 1:
            raise ConfigError("n_trials must be at least 1")
        if self.max_iters < 1:
            raise ConfigError("max_iters must be at least 1")
        if not 0 <= self.master_seed < 2 ** 64:
            raise ConfigError("master_seed must fit in an unsigned 64-bit integer")
        labels = [a.label for a in self.algorithms]
        if len(set(labels)) != len(labels):
            raise ConfigError("algorithm labels must be unique within an experiment")
        if self.reference_algorithm is None:
            object.__setattr__(self, "reference_algorithm", labels[0])
        elif self.reference_algorithm not in labels:
            raise ConfigError(
                f"reference algorithm {self.reference_algorithm!r} is not in the spec")

    def problem_keys(self):
        """Stable per-problem identifiers, disambiguated by dimension on repeats."""
        counts = {}
        for p in self.problems:
            counts[p.function] = counts.get(p.function, 0) + 1
        return tuple(
            p.function if counts[p.function] == 1 else f"{p.function}-D{p.dimension}"
            for p in self.problems
        )


@dataclass
class ExperimentReport:
    """Everything run_experiment produces, keyed by (algorithm label, problem key)."""

    spec: ExperimentSpec
    backend: str
    cells: dict
    records: dict
    ttests: list


def cell_seed(master_seed, algorithm_index, problem_index):
    """The per-cell seed; trials within a cell use stream (cell_seed, trial)."""
    ss = np.random.SeedSequence((int(master_seed), int(algorithm_index), int(problem_index)))
    return int(ss.generate_state(1, np.uint64)[0])


def scale_budget(spec, factor):
    """Uniformly shrink (or grow) iterations and trial counts for smoke runs.

    Trials are floored at 2 so spreads and t-tests stay defined.
    """
    if not factor > 0:
        raise ConfigError("budget scale must be positive")
    return dataclasses.replace(
        spec,
        max_iters=max(1, round(spec.max_iters * factor)),
        n_trials=max(2, round(spec.n_trials * factor)),
    )


# ---------------------------------------------------------------------------
# Spec file format (JSON, versioned)

def _vl_to_dict(cfg):
    if cfg.kind == "fixed":
        return {"kind": "fixed", "mu_fixed": cfg.mu_fixed}
    return {"kind": cfg.kind, "mu_min": cfg.mu_min, "mu_max": cfg.mu_max}


def _vl_from_dict(d):
    try:
        kind = d["kind"]
    except (TypeError, KeyError):
        raise ConfigError("vl entry must be an object with a 'kind' field") from None
    if kind == "fixed":
        return vl.fixed(mu=d.get("mu_fixed", 0.5))
    if kind == "iteration-linear":
        return vl.iteration_linear(mu_min=d.get("mu_min", 0.4), mu_max=d.get("mu_max", 0.7))
    if kind == "state-based":
        return vl.state_based(mu_min=d.get("mu_min", 0.4), mu_max=d.get("mu_max", 0.7))
    raise ConfigError(f"unknown velocity-limit kind {kind!r}")


def spec_to_dict(spec):
    d = {
        "format_version": FORMAT_VERSION,
        "name": spec.name,
        "master_seed": spec.master_seed,
        "n_trials": spec.n_trials,
        "max_iters": spec.max_iters,
        "reference_algorithm": spec.reference_algorithm,
        "problems": [
            {"function": p.function, "dimension": p.dimension, "population": p.population}
            for p in spec.problems
        ],
        "algorithms": [
            {
                "label": a.label,
                "inertia_start": a.inertia_start,
                "inertia_end": a.inertia_end,
                "c1": a.c1,
                "c2": a.c2,
                "vl": _vl_to_dict(a.vl),
            }
            for a in spec.algorithms
        ],
    }
    if spec.output_dir is not None:
        d["output_dir"] = spec.output_dir
    return d


def spec_from_dict(d):
    if not isinstance(d, dict):
        raise ConfigError("spec must be a JSON object")
    version = d.get("format_version")
    if version != FORMAT_VERSION:
        raise ConfigError(
            f"unsupported spec format_version {version!r} (this build reads {FORMAT_VERSION})")
    try:
        problems = tuple(
            ProblemSpec(p["function"], int(p["dimension"]), int(p["population"]))
            for p in d["problems"]
        )
        algorithms = tuple(
            AlgorithmSpec(
                label=a["label"],
                vl=_vl_from_dict(a["vl"]),
                inertia_start=float(a.get("inertia_start", 0.9)),
                inertia_end=float(a.get("inertia_end", 0.4)),
                c1=float(a.get("c1", 2.05)),
                c2=float(a.get("c2", 2.05)),
            )
            for a in d["algorithms"]
        )
        return ExperimentSpec(
            name=d["name"],
            problems=problems,
            algorithms=algorithms,
            n_trials=int(d["n_trials"]),
            max_iters=int(d["max_iters"]),
            master_seed=int(d.get("master_seed", DEFAULT_SEED)),
            reference_algorithm=d.get("reference_algorithm"),
            output_dir=d.get("output_dir"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"malformed experiment spec: {exc}") from exc


def canonical_spec_json(spec):
    """The byte-stable JSON text hashed into provenance."""
    return json.dumps(spec_to_dict(spec), indent=2, sort_keys=True) + "\n"


def save_spec(spec, path):
    Path(path).write_text(canonical_spec_json(spec), encoding="utf-8")


def load_spec(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ConfigError(f"spec file not found: {path}") from None
    try:
        return spec_from_dict(json.loads(text))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"spec file {path} is not valid JSON: {exc}") from exc


# ---------------------------------------------------------------------------
# Presets

_LDIW_BASE = dict(inertia_start=0.9, inertia_end=0.4, c1=2.05, c2=2.05)


def preset_ablation():
    """Velocity-limit strategy shoot-out on four multimodal functions at D=10."""
    problems = tuple(ProblemSpec(f, 10, 10) for f in ("f2", "f3", "f5", "f6"))
    algorithms = (
        AlgorithmSpec("fixed-vl", vl=vl.fixed(0.5), **_LDIW_BASE),
        AlgorithmSpec("linear-vl", vl=vl.iteration_linear(0.4, 0.7), **_LDIW_BASE),
        AlgorithmSpec("state-vl", vl=vl.state_based(0.4, 0.7), **_LDIW_BASE),
    )
    return ExperimentSpec(
        name="ablation", problems=problems, algorithms=algorithms,
        n_trials=30, max_iters=3000, reference_algorithm="state-vl",
    )


def preset_main_comparison():
    """State-based adaptive VL against the linearly-decreasing-inertia baseline, f1-f7 at D=50."""
    problems = tuple(ProblemSpec(f"f{i}", 50, 20) for i in range(1, 8))
    algorithms = (
        AlgorithmSpec("pso-savl", vl=vl.state_based(0.4, 0.7), **_LDIW_BASE),
        AlgorithmSpec("pso-ldiw", vl=vl.fixed(0.5), **_LDIW_BASE),
    )
    return ExperimentSpec(
        name="compare", problems=problems, algorithms=algorithms,
        n_trials=30, max_iters=10000, reference_algorithm="pso-savl",
    )


def preset_sensitivity(param):
    """Hyper-parameter grid over mu_max (mu_min fixed) or mu_min (mu_max fixed)."""
    if param == "mu-max":
        grid = [round(0.4 + 0.1 * i, 1) for i in range(7)]
        algorithms = tuple(
            AlgorithmSpec(f"mu-max-{v:.1f}", vl=vl.state_based(0.4, v), **_LDIW_BASE)
            for v in grid if 0.4 <= v
        )
        reference = "mu-max-0.7"
    elif param == "mu-min":
        grid = [round(0.1 + 0.1 * i, 1) for i in range(7)]
        algorithms = tuple(
            AlgorithmSpec(f"mu-min-{v:.1f}", vl=vl.state_based(v, 0.7), **_LDIW_BASE)
            for v in grid if v <= 0.7
        )
        reference = "mu-min-0.4"
    else:
        raise ConfigError(f"unknown sensitivity parameter {param!r}; expected 'mu-max' or 'mu-min'")
    problems = tuple(ProblemSpec(f"f{i}", 50, 20) for i in range(1, 8))
    return ExperimentSpec(
        name=f"sensitivity-{param}", problems=problems, algorithms=algorithms,
        n_trials=30, max_iters=10000, reference_algorithm=reference,
    )


def preset_scalability():
    """The same two optimizers on f2/f6/f7 as dimension grows, swarm size D/2."""
    problems = tuple(
        ProblemSpec(f, d, d // 2) for d in (50, 100, 200) for f in ("f2", "f6", "f7")
    )
    algorithms = (
        AlgorithmSpec("pso-savl", vl=vl.state_based(0.4, 0.7), **_LDIW_BASE),
        AlgorithmSpec("pso-ldiw", vl=vl.fixed(0.5), **_LDIW_BASE),
    )
    return ExperimentSpec(
        name="scalability", problems=problems, algorithms=algorithms,
        n_trials=30, max_iters=2000, reference_algorithm="pso-savl",
    )


PRESETS = {
    "ablation": preset_ablation,
    "compare": preset_main_comparison,
    "scalability": preset_scalability,
}


# ---------------------------------------------------------------------------
# Execution

def _build_config(spec, algorithm, problem, seed):
    return RunConfig(
        dimension=problem.dimension,
        population=problem.population,
        max_iters=spec.max_iters,
        inertia_start=algorithm.inertia_start,
        inertia_end=algorithm.inertia_end,
        c1=algorithm.c1,
        c2=algorithm.c2,
        seed=seed,
        vl_strategy=algorithm.vl,
    )


def _trial_task(args):
    """Run one trial from primitives; shaped for pickling into worker processes."""
    (backend_name, a_idx, p_idx, trial, function, spec_dict) = args
    _backend.use(backend_name)
    spec = spec_from_dict(spec_dict)
    algorithm = spec.algorithms[a_idx]
    problem_spec = spec.problems[p_idx]
    problem = get_problem(function, problem_spec.dimension)
    config = _build_config(spec, algorithm, problem_spec,
                           cell_seed(spec.master_seed, a_idx, p_idx))
    record = run_trial(config, problem, trial)
    return a_idx, p_idx, trial, record


def run_experiment(spec, out_dir=None, threads=1, backend=None, echo=None):
    """Run every (algorithm, problem, trial) cell of ``spec`` and aggregate.

    ``threads`` > 1 fans trials out to worker processes; results are
    identical either way because each trial owns a derived random stream.
    ``backend`` picks the kernel implementation ("compiled", "python",
    "auto"); None keeps whatever is active.  When ``out_dir`` (or
    ``spec.output_dir``) is set the report files are written there.
    Returns the :class:`ExperimentReport`.
    """
    previous_backend = _backend.use(backend) if backend is not None else None
    try:
        backend_name = _backend.active_name()
        # Validate every problem up front so a bad spec fails before any work.
        problems = [get_problem(p.function, p.dimension) for p in spec.problems]
        spec_dict = spec_to_dict(spec)

        tasks = [
            (backend_name, a_idx, p_idx, trial, p.function, spec_dict)
            for a_idx in range(len(spec.algorithms))
            for p_idx, p in enumerate(spec.problems)
            for trial in range(spec.n_trials)
        ]
        if threads and threads > 1:
            with ProcessPoolExecutor(max_workers=threads, mp_context=get_context("spawn")) as pool:
                results = list(pool.map(_trial_task, tasks, chunksize=1))
        else:
            results = [_trial_task(t) for t in tasks]
        results.sort(key=lambda r: r[:3])

        keys = spec.problem_keys()
        records = {}
        for a_idx, p_idx, trial, record in results:
            records.setdefault((spec.algorithms[a_idx].label, keys[p_idx]), []).append(record)

        cells = {}
        for a in spec.algorithms:
            for key, problem in zip(keys, problems):
                cells[(a.label, key)] = aggregate(records[(a.label, key)], problem.acceptance)

        reference = spec.reference_algorithm
        ttests = []
        for key in keys:
            ref_finals = [r.final_value for r in records[(reference, key)]]
            for a in spec.algorithms:
                if a.label == reference:
                    continue
                finals = [r.final_value for r in records[(a.label, key)]]
                ttests.append((key, a.label, reference, welch_t_test(ref_finals, finals)))

        report = ExperimentReport(spec=spec, backend=backend_name, cells=cells,
                                  records=records, ttests=ttests)
        target = out_dir if out_dir is not None else spec.output_dir
        if target is not None:
            write_report(report, target)
            if echo is not None:
                echo(f"report written to {Path(target).resolve()}")
        return report
    finally:
        if previous_backend is not None:
            _backend.use(previous_backend)


# ---------------------------------------------------------------------------
# Report files

def _fmt(value):
    """Shortest decimal text that parses back to the same number; None -> empty."""
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def trace_indices(max_iters, cap=TRACE_POINTS):
    """Iteration indices kept in a trace: uniform stride, final always present."""
    stride = max(1, math.ceil(max_iters / (cap - 1)))
    idxs = list(range(0, max_iters, stride))
    if idxs[-1] != max_iters - 1:
        idxs.append(max_iters - 1)
    return idxs


def write_report(report, out_dir):
    """Emit summary.csv, trials.csv, traces/, ttests.csv, provenance.txt, spec.json."""
    spec = report.spec
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    keys = spec.problem_keys()

    summary_rows = []
    for a in spec.algorithms:
        for key, p in zip(keys, spec.problems):
            stats = report.cells[(a.label, key)]
            summary_rows.append((
                a.label, key, _fmt(p.dimension), _fmt(p.population),
                _fmt(stats.mean), _fmt(stats.std), _fmt(stats.success_ratio),
                _fmt(stats.expected_fes), _fmt(stats.n_trials),
            ))
    _write_csv(out / "summary.csv", SUMMARY_COLUMNS, summary_rows)

    trial_rows = []
    for a in spec.algorithms:
        for key in keys:
            for record in report.records[(a.label, key)]:
                trial_rows.append((
                    a.label, key, _fmt(record.trial_index), _fmt(record.seed),
                    _fmt(record.final_value), _fmt(record.fe_at_acceptance),
                    _fmt(record.wall_time_seconds),
                ))
    _write_csv(out / "trials.csv", TRIALS_COLUMNS, trial_rows)

    traces_dir = out / "traces"
    traces_dir.mkdir(exist_ok=True)
    for a in spec.algorithms:
        for key, p in zip(keys, spec.problems):
            for record in report.records[(a.label, key)]:
                rows = []
                for k in trace_indices(len(record.best_value_history)):
                    fe = p.population * (k + 2)  # init block plus k+1 sweeps
                    rows.append((
                        _fmt(k + 1), _fmt(fe), _fmt(record.best_value_history[k]),
                        _fmt(record.f_history[k]), _fmt(record.mu_history[k]),
                    ))
                name = f"{a.label}_{key}_{record.trial_index}.csv"
                _write_csv(traces_dir / name, TRACE_COLUMNS, rows)

    ttest_rows = [
        (key, label, reference, _fmt(res.t_value), _fmt(res.dof), _fmt(res.p_value),
         "true" if res.significant_at_005 else "false")
        for key, label, reference, res in report.ttests
    ]
    _write_csv(out / "ttests.csv", TTEST_COLUMNS, ttest_rows)

    save_spec(spec, out / "spec.json")
    (out / "provenance.txt").write_text(_provenance_text(report), encoding="utf-8")


def _provenance_text(report):
    try:
        from importlib.metadata import version
        pkg_version = version("savlpso")
    except Exception:
        pkg_version = "unknown"
    spec = report.spec
    spec_json = canonical_spec_json(spec)
    digest = hashlib.sha256(spec_json.encode("utf-8")).hexdigest()
    keys = spec.problem_keys()

    lines = [
        f"savlpso {pkg_version}",
        f"python {sys.version.split()[0]}",
        f"numpy {np.__version__}",
        f"backend {report.backend}",
        f"spec format_version {FORMAT_VERSION}",
        f"spec sha256 {digest}",
        "",
        "rotation seeds (per rotated function, fixed at build time):",
    ]
    seen = set()
    for p in spec.problems:
        problem = get_problem(p.function, p.dimension)
        if problem.rotation_seed is not None and p.function not in seen:
            lines.append(f"  {p.function} -> {problem.rotation_seed}")
            seen.add(p.function)
    if not seen:
        lines.append("  (none in this spec)")
    lines += [
        "",
        "cell seeds (algorithm x problem; trial t uses stream SeedSequence((cell_seed, t))):",
    ]
    for a_idx, a in enumerate(spec.algorithms):
        for p_idx, key in enumerate(keys):
            lines.append(
                f"  {a.label} x {key} -> {cell_seed(spec.master_seed, a_idx, p_idx)}")
    lines += [
        "",
        "re-run: savlpso run spec.json --out <dir>   (threads do not change results)",
        "single trial: run_trial(config, problem, t) with the cell seed above",
        "",
        "spec.json:",
        spec_json.rstrip("\n"),
        "",
    ]
    return "\n".join(lines)
