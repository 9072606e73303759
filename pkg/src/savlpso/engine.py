"""The optimizer main loop.

One iteration, in order: estimate the swarm's evolutionary state from current
positions; derive this iteration's velocity limit from it; then, particle by
particle, update the velocity, repair it against the limit, move, repair the
position against the bounds, evaluate, and refresh the personal best.  The
global best is refreshed once per iteration, after all particles have moved,
so every particle in an iteration chases the same attractor and the state
estimate keeps a single well-defined meaning.

Function-evaluation accounting: the ``population`` evaluations spent scoring
the initial swarm are counted, so a full trial consumes exactly
``population · (max_iters + 1)`` evaluations, and ``fe_at_acceptance`` is
resolved at iteration-end granularity.

A note on deep convergence.  On problems whose optimum sits at the domain
center, the global-best particle tends to sit centrally within the swarm, so
its mean distance to the others is the swarm minimum and the evolutionary
factor pins at zero.  The limit handler then routes every velocity overflow
through its re-randomization branch, which holds the swarm in a diffusion
equilibrium whose radius tracks the current velocity limit; best values fall
only as fast as the inertia decay shrinks that equilibrium.  At 50 dimensions
this floors sphere-function finals near 1e-15 over 10000 iterations.  The
behavior follows from the update rules themselves — both backends reproduce
it bit-for-bit — and is exercised deliberately by the acceptance suite's
main-comparison criterion.
"""

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _backend, _pykernels
from .core import ConfigError, SwarmState, derive_trial_stream, inertia_at
from .ese import evolutionary_factor
from .vl import velocity_limit


class InvariantViolation(RuntimeError):
    """A runtime self-check failed: containment or best-tracking was broken."""


@dataclass
class TrialRecord:
    """Everything observable about one finished trial.

    ``best_value_history[k]``, ``f_history[k]``, and ``mu_history[k]`` are the
    global best value, evolutionary factor, and limit proportion after
    iteration ``k``.  ``fe_at_acceptance`` is the evaluation count when the
    global best first reached the problem's acceptance threshold (checked
    after initialization and after each iteration), or None if it never did.
    """

    best_value_history: np.ndarray
    f_history: np.ndarray
    mu_history: np.ndarray
    final_value: float
    fe_at_acceptance: Optional[int]
    total_fes: int
    wall_time_seconds: float
    seed: int
    trial_index: int
    pair_distances: int


def update_velocity(v, x, pbest, gbest, omega, c1, c2, rng):
    """One particle's velocity update; returns a new vector.

    Per dimension, two fresh uniform draws ``r1`` then ``r2`` are consumed:
    ``v' = omega·v + c1·r1·(pbest − x) + c2·r2·(gbest − x)``.
    No limit is enforced here; repair is a separate step.
    """
    out = np.array(v, dtype=float)
    _pykernels.update_velocity_inplace(
        out,
        np.asarray(x, dtype=float),
        np.asarray(pbest, dtype=float),
        np.asarray(gbest, dtype=float),
        omega,
        c1,
        c2,
        rng,
    )
    return out


def initialize_swarm(config, bounds, problem, rng):
    """Scatter the swarm uniformly and score it.

    Draw order: all positions (row by row), then all velocities.  Velocities
    start uniform in ``[-VL0, VL0]`` where ``VL0`` is the strategy's limit at
    ``f = 1`` — the widest limit, fitting an exploratory start and avoiding a
    pointless round of repairs on the first iteration.
    """
    if problem.dimension != config.dimension:
        raise ConfigError(
            f"problem {problem.name} has dimension {problem.dimension}, config says {config.dimension}"
        )
    if bounds.dimension != config.dimension:
        raise ConfigError("bounds dimension does not match config")
    kernels = _backend.kernels()
    n = config.population
    ndim = config.dimension
    lo, hi = bounds.lower, bounds.upper
    positions = rng.random((n, ndim)) * (hi - lo) + lo
    vl0 = velocity_limit(config.vl_strategy, bounds, 1.0, 0, config.max_iters).per_dimension
    velocities = rng.random((n, ndim)) * (2.0 * vl0) - vl0
    pbest_positions = positions.copy()
    pbest_values = np.empty(n)
    for i in range(n):
        pbest_values[i] = kernels.evaluate(problem.fid, positions[i], problem.rotation)
    gbest_index = int(np.argmin(pbest_values))
    return SwarmState(
        positions=positions,
        velocities=velocities,
        pbest_positions=pbest_positions,
        pbest_values=pbest_values,
        gbest_position=pbest_positions[gbest_index].copy(),
        gbest_value=float(pbest_values[gbest_index]),
        gbest_index=gbest_index,
        iteration=0,
        fe_count=n,
    )


def step(state, config, bounds, problem, rng):
    """Advance the swarm one iteration in place; returns ``(f, mu)`` used."""
    kernels = _backend.kernels()
    ef = evolutionary_factor(state.positions, state.gbest_index)
    limit = velocity_limit(
        config.vl_strategy, bounds, ef.f, state.iteration, config.max_iters
    )
    omega = inertia_at(config, state.iteration)
    kernels.sweep(
        state.positions,
        state.velocities,
        state.pbest_positions,
        state.pbest_values,
        state.gbest_position,
        omega,
        config.c1,
        config.c2,
        limit.per_dimension,
        ef.f,
        bounds.lower,
        bounds.upper,
        problem.fid,
        problem.rotation,
        rng,
    )
    state.fe_count += config.population
    state.pair_distances += ef.pair_count
    # Synchronous global-best refresh; ties go to the lowest particle index.
    gbest_index = int(np.argmin(state.pbest_values))
    state.gbest_index = gbest_index
    state.gbest_value = float(state.pbest_values[gbest_index])
    state.gbest_position = state.pbest_positions[gbest_index].copy()
    state.iteration += 1
    return ef.f, limit.mu_current


def _check_invariants(state, bounds, mu):
    vl = mu * bounds.half_range
    if not (
        np.all(state.positions >= bounds.lower) and np.all(state.positions <= bounds.upper)
    ):
        raise InvariantViolation(f"position escaped bounds at iteration {state.iteration}")
    if not np.all(np.abs(state.velocities) <= vl):
        raise InvariantViolation(f"velocity escaped its limit at iteration {state.iteration}")
    if state.gbest_value != float(state.pbest_values.min()):
        raise InvariantViolation(f"stale global best at iteration {state.iteration}")


def run_trial(config, problem, trial_index, check_interval=100):
    """One complete, self-contained optimization run.

    The trial's randomness comes entirely from
    ``derive_trial_stream(config.seed, trial_index)``, so a (config,
    trial_index) pair pins down every number in the result except wall time.
    ``check_interval`` controls how often containment self-checks run
    (every iteration when 1; 0 disables them).
    """
    rng = derive_trial_stream(config.seed, trial_index)
    bounds = problem.bounds
    started = time.perf_counter()
    state = initialize_swarm(config, bounds, problem, rng)
    best_history = np.empty(config.max_iters)
    f_history = np.empty(config.max_iters)
    mu_history = np.empty(config.max_iters)
    fe_at_acceptance = state.fe_count if state.gbest_value <= problem.acceptance else None
    for k in range(config.max_iters):
        f, mu = step(state, config, bounds, problem, rng)
        best_history[k] = state.gbest_value
        f_history[k] = f
        mu_history[k] = mu
        if fe_at_acceptance is None and state.gbest_value <= problem.acceptance:
            fe_at_acceptance = state.fe_count
        if check_interval and (k % check_interval == 0 or k == config.max_iters - 1):
            _check_invariants(state, bounds, mu)
    return TrialRecord(
        best_value_history=best_history,
        f_history=f_history,
        mu_history=mu_history,
        final_value=float(state.gbest_value),
        fe_at_acceptance=fe_at_acceptance,
        total_fes=state.fe_count,
        wall_time_seconds=time.perf_counter() - started,
        seed=int(config.seed),
        trial_index=int(trial_index),
        pair_distances=state.pair_distances,
    )
