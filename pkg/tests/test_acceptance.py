"""The package-level acceptance gate.

Nine end-to-end checks covering the sigmoid limit law, state estimation,
containment, orderings on the experiment presets, sensitivity direction,
complexity accounting, statistical machinery, and report determinism.
Each test prints one CRITERION line so a run reads as a checklist (the
pass lines surface in pytest's summary via ``-rP``).

The slow criteria share work: 4 and 9 reuse one full ablation run through a
session fixture.  The whole module takes a few minutes on the compiled
backend.
"""

import csv
import dataclasses
import math
import os

import numpy as np
import pytest

from savlpso import (
    ConfigError,
    RunConfig,
    cli,
    derive_alpha_beta,
    evolutionary_factor,
    get_problem,
    preset_ablation,
    preset_main_comparison,
    run_experiment,
    run_trial,
    scale_budget,
    sigmoid_mu,
    welch_t_test,
)
from savlpso.engine import InvariantViolation
from savlpso.harness import (
    DEFAULT_SEED,
    AlgorithmSpec,
    ExperimentSpec,
    ProblemSpec,
    cell_seed,
)
from savlpso.stats import student_t_two_tailed_p
from savlpso.vl import state_based

from oracle_stats import T_PVALUE_GRID, WELCH_PAIRS

_WORKERS = min(4, os.cpu_count() or 1)


def _verdict(number, title, ok, detail=""):
    tail = f" -- {detail}" if detail else ""
    print(f"CRITERION {number} ({title}): {'PASS' if ok else 'FAIL'}{tail}")
    assert ok, f"criterion {number} ({title}): {detail}"


@pytest.fixture(scope="session")
def ablation_out(tmp_path_factory):
    """One full ablation run through the CLI, shared by criteria 4 and 9."""
    out = tmp_path_factory.mktemp("acceptance") / "ablation-serial"
    assert cli.main(["ablation", "--out", str(out)]) == 0
    return out


def _summary_table(path):
    with open(path, newline="") as fh:
        return {(r["algorithm"], r["problem"]): r for r in csv.DictReader(fh)}


def test_criterion_1_sigmoid_endpoint_fidelity():
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(1000):
        mu_min = rng.uniform(0.05, 0.95)
        mu_max = rng.uniform(mu_min, 0.95)
        alpha, beta = derive_alpha_beta(mu_min, mu_max)
        worst = max(
            worst,
            abs(sigmoid_mu(0.0, alpha, beta) - mu_min),
            abs(sigmoid_mu(1.0, alpha, beta) - mu_max),
        )
    _verdict(1, "sigmoid endpoint fidelity", worst <= 1e-12,
             f"max endpoint error {worst:.2e} over 1000 pairs")


def test_criterion_2_state_estimation_oracle():
    rng = np.random.default_rng(202)
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(2, 9))
        dim = int(rng.integers(1, 6))
        pos = rng.uniform(-100, 100, (n, dim))
        g = int(rng.integers(0, n))
        d = [
            sum(math.dist(pos[i], pos[j]) for j in range(n) if j != i) / (n - 1)
            for i in range(n)
        ]
        want = 0.0 if max(d) == min(d) else (d[g] - min(d)) / (max(d) - min(d))
        worst = max(worst, abs(evolutionary_factor(pos, g).f - want))
    line = np.array([[0.0], [1.0], [2.0]])
    exact = (
        evolutionary_factor(line, 0).f == 1.0
        and evolutionary_factor(line, 1).f == 0.0
        and evolutionary_factor(np.ones((4, 2)), 3).f == 0.0
    )
    _verdict(2, "state estimation equals naive oracle",
             worst <= 1e-12 and exact, f"max |delta f| {worst:.2e}; hand examples exact: {exact}")


def test_criterion_3_containment_on_scaled_ablation():
    spec = scale_budget(preset_ablation(), 0.1)
    checked = violations = 0
    for a_idx, algorithm in enumerate(spec.algorithms):
        for p_idx, p in enumerate(spec.problems):
            problem = get_problem(p.function, p.dimension)
            config = RunConfig(
                dimension=p.dimension, population=p.population, max_iters=spec.max_iters,
                inertia_start=algorithm.inertia_start, inertia_end=algorithm.inertia_end,
                c1=algorithm.c1, c2=algorithm.c2,
                seed=cell_seed(spec.master_seed, a_idx, p_idx), vl_strategy=algorithm.vl,
            )
            for trial in range(spec.n_trials):
                checked += 1
                try:
                    run_trial(config, problem, trial, check_interval=1)
                except InvariantViolation:
                    violations += 1
    _verdict(3, "position and velocity containment", violations == 0,
             f"{checked} full trials checked every iteration, {violations} violations")


def test_criterion_4_ablation_orderings(ablation_out):
    table = _summary_table(ablation_out / "summary.csv")
    fns = ("f2", "f3", "f5", "f6")

    def mean(a, f):
        return float(table[(a, f)]["mean"])

    fe_samples = {}
    with open(ablation_out / "trials.csv", newline="") as fh:
        for row in csv.DictReader(fh):
            if row["fe_at_acceptance"]:
                key = (row["algorithm"], row["problem"])
                fe_samples.setdefault(key, []).append(float(row["fe_at_acceptance"]))

    def fes(a, f):
        samples = fe_samples.get((a, f))
        return sum(samples) / len(samples) if samples else math.inf

    state_vs_linear = sum(mean("state-vl", f) <= mean("linear-vl", f) for f in fns)
    linear_vs_fixed = sum(mean("linear-vl", f) <= mean("fixed-vl", f) for f in fns)
    fes_direction = sum(fes("state-vl", f) <= fes("fixed-vl", f) for f in fns)
    ok = state_vs_linear >= 3 and linear_vs_fixed >= 3 and fes_direction >= 3
    _verdict(4, "ablation orderings", ok,
             f"means: state<=linear on {state_vs_linear}/4, linear<=fixed on "
             f"{linear_vs_fixed}/4; acceptance FEs: state<=fixed on {fes_direction}/4")


def test_criterion_5_main_comparison_slice():
    base = preset_main_comparison()
    spec = dataclasses.replace(
        base, name="compare-slice",
        problems=tuple(p for p in base.problems if p.function in ("f1", "f7")),
    )
    report = run_experiment(spec, threads=_WORKERS)
    f1 = report.cells[("pso-savl", "f1")]
    f7_savl = report.cells[("pso-savl", "f7")]
    f7_ldiw = report.cells[("pso-ldiw", "f7")]
    ok = f1.success_ratio >= 0.9 and f1.mean < 1e-20 and f7_savl.mean < f7_ldiw.mean
    _verdict(5, "main comparison sanity", ok,
             f"f1 mean {f1.mean:.3e} (target < 1e-20), success {f1.success_ratio:.0%} "
             f"(target >= 90%); f7 adaptive {f7_savl.mean:.4g} vs baseline {f7_ldiw.mean:.4g}")


def test_criterion_6_mu_min_sensitivity_direction():
    spec = ExperimentSpec(
        name="mu-min-slice",
        problems=(ProblemSpec("f2", 50, 20),),
        algorithms=(
            AlgorithmSpec("mu-min-0.1", vl=state_based(0.1, 0.7)),
            AlgorithmSpec("mu-min-0.4", vl=state_based(0.4, 0.7)),
        ),
        n_trials=10, max_iters=10000, master_seed=DEFAULT_SEED,
        reference_algorithm="mu-min-0.4",
    )
    report = run_experiment(spec, threads=_WORKERS)
    tight = report.cells[("mu-min-0.1", "f2")].mean
    default = report.cells[("mu-min-0.4", "f2")].mean
    _verdict(6, "mu_min sensitivity direction", tight >= 10.0 * default,
             f"mu_min=0.1 mean {tight:.4g} vs mu_min=0.4 mean {default:.4g} (needs 10x)")


def test_criterion_7_pair_distance_accounting():
    ok = True
    parts = []
    for n, iters in ((4, 13), (10, 50), (7, 99), (2, 5)):
        cfg = RunConfig(dimension=5, population=n, max_iters=iters, seed=5,
                        vl_strategy=state_based())
        rec = run_trial(cfg, get_problem("f4", 5), 0)
        want = iters * n * (n - 1) // 2
        ok = ok and rec.pair_distances == want
        parts.append(f"N={n},iters={iters}: {rec.pair_distances} (expect {want})")
    _verdict(7, "pair-distance complexity accounting", ok, "; ".join(parts))


def test_criterion_8_statistical_machinery():
    worst_grid = max(abs(student_t_two_tailed_p(t, v) - p) for t, v, p in T_PVALUE_GRID)
    worst_welch = max(abs(welch_t_test(a, b).p_value - p) for a, b, _t, p, _d in WELCH_PAIRS)

    rng = np.random.default_rng(88)
    invariances = True
    for _ in range(1000):
        a = rng.normal(rng.uniform(-3, 3), rng.uniform(0.5, 2.0), int(rng.integers(3, 15)))
        b = rng.normal(rng.uniform(-3, 3), rng.uniform(0.5, 2.0), int(rng.integers(3, 15)))
        fwd = welch_t_test(a, b)
        rev = welch_t_test(b, a)
        shifted = welch_t_test(a + 5.0, b + 5.0)
        invariances = (
            invariances
            and abs(fwd.t_value + rev.t_value) < 1e-9
            and abs(fwd.p_value - rev.p_value) < 1e-9
            and abs(fwd.t_value - shifted.t_value) < 1e-7
            and abs(fwd.p_value - shifted.p_value) < 1e-7
        )
    ok = worst_grid <= 1e-8 and worst_welch <= 1e-8 and invariances
    _verdict(8, "statistical machinery vs frozen references", ok,
             f"max |delta p|: grid {worst_grid:.2e}, welch {worst_welch:.2e}; "
             f"invariances hold: {invariances}")


def test_criterion_9_report_determinism(ablation_out, tmp_path_factory):
    base = tmp_path_factory.mktemp("determinism")
    again = base / "serial"
    pooled = base / "pooled"
    assert cli.main(["ablation", "--out", str(again)]) == 0
    assert cli.main(["ablation", "--out", str(pooled), "--threads", str(_WORKERS)]) == 0

    s0 = (ablation_out / "summary.csv").read_bytes()
    summary_ok = (
        s0 == (again / "summary.csv").read_bytes()
        and s0 == (pooled / "summary.csv").read_bytes()
    )

    def trials_without_wall_time(directory):
        lines = (directory / "trials.csv").read_text().splitlines()
        return [line.rsplit(",", 1)[0] for line in lines]

    t0 = trials_without_wall_time(ablation_out)
    trials_ok = (
        t0 == trials_without_wall_time(again)
        and t0 == trials_without_wall_time(pooled)
    )
    _verdict(9, "byte-identical reports across reruns and worker counts",
             summary_ok and trials_ok,
             f"summary identical: {summary_ok}; trials identical (wall time aside): {trials_ok}")
