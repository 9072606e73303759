"""Command-line front end.

Subcommands mirror the experiment presets (``ablation``, ``compare``,
``sensitivity``, ``scalability``), plus ``run`` for a spec file and ``bench``
for timing the compiled kernels against the pure-Python ones.

Exit codes: 0 success, 2 configuration error, 3 I/O error.
"""

import argparse
import statistics
import sys
import time

import numpy as np

from . import _backend, harness
from .benchmarks import get_problem
from .core import ConfigError, RunConfig
from .engine import run_trial
from .vl import state_based


def _add_common(parser):
    parser.add_argument("--seed", type=int, default=None,
                        help="master seed (default: the preset's)")
    parser.add_argument("--trials", type=int, default=None,
                        help="override the number of trials per cell")
    parser.add_argument("--budget-scale", type=float, default=None, metavar="S",
                        help="scale max_iters and n_trials by S (smoke runs)")
    parser.add_argument("--out", default=None, metavar="DIR",
                        help="report directory (default: ./<name>-out)")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker processes for trial fan-out (default 1)")
    parser.add_argument("--backend", choices=sorted(_backend.available()) + ["auto"],
                        default=None, help="kernel backend (default: active)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="savlpso",
        description="Particle swarm optimization with a state-based adaptive velocity limit.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run an experiment from a JSON spec file")
    run_p.add_argument("spec_file")
    _add_common(run_p)

    _add_common(sub.add_parser("ablation", help="velocity-limit strategies on f2/f3/f5/f6 at D=10"))
    _add_common(sub.add_parser("compare", help="pso-savl vs pso-ldiw on f1-f7 at D=50"))

    sens = sub.add_parser("sensitivity", help="mu_max or mu_min grid on f1-f7 at D=50")
    sens.add_argument("--param", choices=("mu-max", "mu-min"), required=True)
    _add_common(sens)

    _add_common(sub.add_parser("scalability", help="f2/f6/f7 at D=50/100/200 with N=D/2"))

    bench = sub.add_parser("bench", help="time the compiled kernels against pure Python")
    bench.add_argument("--function", default="f3")
    bench.add_argument("--dimension", type=int, default=30)
    bench.add_argument("--population", type=int, default=20)
    bench.add_argument("--iters", type=int, default=500)
    bench.add_argument("--repeats", type=int, default=3)
    bench.add_argument("--seed", type=int, default=harness.DEFAULT_SEED)
    return parser


def _spec_for(args):
    if args.command == "run":
        spec = harness.load_spec(args.spec_file)
    elif args.command == "ablation":
        spec = harness.preset_ablation()
    elif args.command == "compare":
        spec = harness.preset_main_comparison()
    elif args.command == "sensitivity":
        spec = harness.preset_sensitivity(args.param)
    elif args.command == "scalability":
        spec = harness.preset_scalability()
    else:  # pragma: no cover - argparse enforces the choices
        raise ConfigError(f"unknown command {args.command!r}")

    import dataclasses
    if args.seed is not None:
        spec = dataclasses.replace(spec, master_seed=args.seed)
    if args.trials is not None:
        spec = dataclasses.replace(spec, n_trials=args.trials)
    if args.budget_scale is not None:
        spec = harness.scale_budget(spec, args.budget_scale)
    return spec


def _run_command(args):
    spec = _spec_for(args)
    out = args.out if args.out is not None else (spec.output_dir or f"{spec.name}-out")
    report = harness.run_experiment(
        spec, out_dir=out, threads=args.threads, backend=args.backend, echo=print)
    keys = spec.problem_keys()
    width = max(len(a.label) for a in spec.algorithms)
    for a in spec.algorithms:
        for key in keys:
            stats = report.cells[(a.label, key)]
            fes = "-" if stats.expected_fes is None else f"{stats.expected_fes:.0f}"
            print(f"{a.label:<{width}}  {key:<8} mean={stats.mean:.6g} "
                  f"std={stats.std:.6g} success={stats.success_ratio:.2f} fes={fes}")
    return 0


def _time_trial(backend_name, config, problem, repeats):
    previous = _backend.use(backend_name)
    try:
        timings = []
        record = None
        for _ in range(repeats):
            start = time.perf_counter()
            record = run_trial(config, problem, 0)
            timings.append(time.perf_counter() - start)
        return statistics.median(timings), record
    finally:
        _backend.use(previous)


def _bench_command(args):
    problem = get_problem(args.function, args.dimension)
    config = RunConfig(
        dimension=args.dimension, population=args.population, max_iters=args.iters,
        seed=args.seed, vl_strategy=state_based(),
    )
    names = sorted(_backend.available())
    print(f"benchmark: {args.function} D={args.dimension} N={args.population} "
          f"iters={args.iters} (median of {args.repeats})")
    results = {}
    for name in names:
        seconds, record = _time_trial(name, config, problem, args.repeats)
        results[name] = (seconds, record)
        print(f"  {name:<9} {seconds * 1e3:9.2f} ms/trial  final={record.final_value:.6g}")
    if len(names) == 2:
        fast, slow = (results["compiled"][0], results["python"][0])
        print(f"  speedup   {slow / fast:9.1f}x compiled over python")
        a, b = results["compiled"][1], results["python"][1]
        identical = (
            np.array_equal(a.best_value_history, b.best_value_history)
            and np.array_equal(a.f_history, b.f_history)
            and np.array_equal(a.mu_history, b.mu_history)
            and a.final_value == b.final_value
        )
        print(f"  results bitwise identical: {'yes' if identical else 'NO'}")
        if not identical:
            return 1
    else:
        print("  (compiled backend unavailable; timed pure Python only)")
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "bench":
            return _bench_command(args)
        return _run_command(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
