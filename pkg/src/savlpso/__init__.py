"""Particle swarm optimization with a state-based adaptive velocity limit.

The velocity limit follows the swarm's evolutionary state (estimated from
the distance distribution of the particles) through a sigmoid, instead of
the iteration counter.  Hot loops run on a compiled extension when it is
available and on a pure-Python twin otherwise; both produce bit-identical
trajectories.
"""

from ._backend import active_name as active_backend, available as available_backends
from .benchmarks import (
    BenchmarkProblem,
    available_functions,
    evaluate,
    get_problem,
    make_rotation,
)
from .core import (
    Bounds,
    ConfigError,
    RunConfig,
    SwarmState,
    derive_trial_stream,
    inertia_at,
)
from .engine import (
    InvariantViolation,
    TrialRecord,
    initialize_swarm,
    run_trial,
    step,
    update_velocity,
)
from .ese import (
    EvolutionaryFactor,
    SearchState,
    classify_state,
    evolutionary_factor,
    mean_distances,
)
from .harness import (
    AlgorithmSpec,
    ExperimentReport,
    ExperimentSpec,
    ProblemSpec,
    load_spec,
    preset_ablation,
    preset_main_comparison,
    preset_scalability,
    preset_sensitivity,
    run_experiment,
    save_spec,
    scale_budget,
)
from .limits import handle_position, handle_velocity
from .stats import AggregateStats, TTestResult, aggregate, welch_t_test
from .vl import (
    VelocityLimit,
    VlStrategyConfig,
    derive_alpha_beta,
    fixed,
    iteration_linear,
    sigmoid_mu,
    state_based,
    velocity_limit,
)

__version__ = "0.1.0"

__all__ = [
    "AggregateStats",
    "AlgorithmSpec",
    "BenchmarkProblem",
    "Bounds",
    "ConfigError",
    "EvolutionaryFactor",
    "ExperimentReport",
    "ExperimentSpec",
    "InvariantViolation",
    "ProblemSpec",
    "RunConfig",
    "SearchState",
    "SwarmState",
    "TTestResult",
    "TrialRecord",
    "VelocityLimit",
    "VlStrategyConfig",
    "active_backend",
    "aggregate",
    "available_backends",
    "available_functions",
    "classify_state",
    "derive_alpha_beta",
    "derive_trial_stream",
    "evaluate",
    "evolutionary_factor",
    "fixed",
    "get_problem",
    "handle_position",
    "handle_velocity",
    "inertia_at",
    "initialize_swarm",
    "iteration_linear",
    "load_spec",
    "make_rotation",
    "mean_distances",
    "preset_ablation",
    "preset_main_comparison",
    "preset_scalability",
    "preset_sensitivity",
    "run_experiment",
    "run_trial",
    "save_spec",
    "scale_budget",
    "sigmoid_mu",
    "state_based",
    "step",
    "update_velocity",
    "velocity_limit",
    "welch_t_test",
]
