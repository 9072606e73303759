"""Shared domain types, run configuration, and the random-number contract.

Reproducibility rests on one rule: a trial's entire randomness comes from a
single :class:`numpy.random.Generator` created by :func:`derive_trial_stream`,
and every consumer draws from it in a fixed documented order.  Nothing else
in the package creates generators behind the caller's back.
"""

from dataclasses import dataclass

import numpy as np

# A trial's random stream is a numpy Generator; the alias documents intent.
RngStream = np.random.Generator

_UINT64_MAX = 2**64 - 1


class ConfigError(ValueError):
    """A configuration value or combination the library refuses to run with."""


@dataclass(frozen=True)
class Bounds:
    """Per-dimension closed position bounds ``[lower, upper]``."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.ascontiguousarray(self.lower, dtype=float)
        upper = np.ascontiguousarray(self.upper, dtype=float)
        if lower.ndim != 1 or lower.shape != upper.shape:
            raise ConfigError("bounds must be two equal-length 1-D vectors")
        if not np.all(lower < upper):
            raise ConfigError("every lower bound must be strictly below its upper bound")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def symmetric(cls, limit, dimension):
        """``[-limit, limit]`` in every one of ``dimension`` dimensions."""
        if limit <= 0:
            raise ConfigError("symmetric bound limit must be positive")
        return cls(np.full(dimension, -float(limit)), np.full(dimension, float(limit)))

    @property
    def dimension(self):
        return self.lower.shape[0]

    @property
    def half_range(self):
        """Per-dimension half width, the scale velocity limits are expressed in."""
        return (self.upper - self.lower) / 2.0


@dataclass(frozen=True)
class RunConfig:
    """Everything needed to run one optimizer configuration on one problem."""

    dimension: int
    population: int
    max_iters: int
    inertia_start: float = 0.9
    inertia_end: float = 0.4
    c1: float = 2.05
    c2: float = 2.05
    seed: int = 0
    vl_strategy: object = None  # a vl.VlStrategyConfig; None means state-based defaults

    def __post_init__(self):
        if self.dimension < 1:
            raise ConfigError("dimension must be at least 1")
        if self.population < 2:
            raise ConfigError("population must be at least 2 (mean distances divide by N-1)")
        if self.max_iters < 1:
            raise ConfigError("max_iters must be at least 1")
        if self.inertia_start < self.inertia_end:
            raise ConfigError("inertia must not increase over a run")
        if self.c1 <= 0 or self.c2 <= 0:
            raise ConfigError("acceleration coefficients must be positive")
        if not 0 <= self.seed <= _UINT64_MAX:
            raise ConfigError("seed must fit in an unsigned 64-bit integer")
        if self.vl_strategy is None:
            from .vl import state_based

            object.__setattr__(self, "vl_strategy", state_based())


@dataclass
class SwarmState:
    """The evolving state of one run: particle matrices plus best-so-far records.

    ``pair_distances`` counts pairwise distance evaluations consumed by
    evolutionary-state estimation, the dominant cost term; it exists so tests
    can hold the implementation to the expected operation count.
    """

    positions: np.ndarray
    velocities: np.ndarray
    pbest_positions: np.ndarray
    pbest_values: np.ndarray
    gbest_position: np.ndarray
    gbest_value: float
    gbest_index: int
    iteration: int = 0
    fe_count: int = 0
    pair_distances: int = 0


def derive_trial_stream(master_seed, trial_index):
    """Independent, reproducible random stream for one trial.

    The mixing function is fixed and documented: the pair
    ``(master_seed, trial_index)`` is fed as the entropy of a
    ``numpy.random.SeedSequence``, which keys a PCG64 generator.  Same inputs
    give the same stream on every platform; different trial indices give
    streams that are statistically independent.
    """
    if not 0 <= master_seed <= _UINT64_MAX:
        raise ConfigError("master seed must fit in an unsigned 64-bit integer")
    if trial_index < 0:
        raise ConfigError("trial index must be non-negative")
    seq = np.random.SeedSequence((int(master_seed), int(trial_index)))
    return np.random.Generator(np.random.PCG64(seq))


def inertia_at(config, k):
    """Inertia weight at iteration ``k`` of the linear schedule.

    Anchored so both endpoints are attained exactly: ``inertia_start`` at
    ``k = 0`` and ``inertia_end`` at ``k = max_iters - 1``.
    """
    if not 0 <= k < config.max_iters:
        raise ValueError(f"iteration {k} outside [0, {config.max_iters})")
    if config.max_iters == 1:
        return config.inertia_start
    return config.inertia_start + (config.inertia_end - config.inertia_start) * k / (
        config.max_iters - 1
    )
