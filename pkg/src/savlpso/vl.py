"""Velocity-limit strategies.

A velocity limit is expressed as a proportion ``mu`` of the per-dimension
half range of the position bounds.  Three strategies set ``mu``:

* ``state-based`` — the adaptive scheme this package is named for: ``mu`` is
  a sigmoid of the evolutionary factor ``f``, rising from ``mu_min`` (swarm
  converged, keep moves local) to ``mu_max`` (swarm dispersed, allow global
  moves).  The sigmoid coefficients are derived, not tuned: ``alpha`` and
  ``beta`` are the unique values making the endpoints come out at exactly
  ``mu_min`` and ``mu_max``.
* ``iteration-linear`` — ``mu`` decays linearly from ``mu_max`` to ``mu_min``
  over the iteration budget, blind to the swarm's state.
* ``fixed`` — ``mu`` is a constant.
"""

import math
from dataclasses import dataclass

from .core import ConfigError

KINDS = ("fixed", "iteration-linear", "state-based")

# A sigmoid cannot attain mu = 1 with finite coefficients; requests for
# mu_max = 1 are derived against this stand-in instead.
_MU_MAX_CAP = 1.0 - 1e-9


def derive_alpha_beta(mu_min, mu_max):
    """Sigmoid coefficients hitting ``mu_min`` at f=0 and ``mu_max`` at f=1.

    Solving ``1/(1 + alpha·e^(−beta·f))`` at the two endpoints gives
    ``alpha = 1/mu_min − 1`` and ``beta = −ln((1/mu_max − 1)/alpha)``.
    """
    if not 0.0 < mu_min < 1.0 or not 0.0 < mu_max < 1.0:
        raise ConfigError("mu_min and mu_max must lie strictly inside (0, 1)")
    if mu_min > mu_max:
        raise ConfigError("mu_min must not exceed mu_max")
    alpha = 1.0 / mu_min - 1.0
    beta = -math.log((1.0 / mu_max - 1.0) / alpha)
    return alpha, beta


def sigmoid_mu(f, alpha, beta):
    """The limit proportion at evolutionary factor ``f``."""
    return 1.0 / (1.0 + alpha * math.exp(-beta * f))


@dataclass(frozen=True)
class VlStrategyConfig:
    """One strategy choice plus its parameters.

    ``alpha`` and ``beta`` are derived in construction for the state-based
    kind and must not be supplied.  Prefer the :func:`fixed`,
    :func:`iteration_linear`, and :func:`state_based` helpers over calling
    this directly.
    """

    kind: str
    mu_min: float = 0.4
    mu_max: float = 0.7
    mu_fixed: float = 0.5
    alpha: float = None
    beta: float = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown velocity-limit strategy {self.kind!r}; expected one of {KINDS}")
        if self.alpha is not None or self.beta is not None:
            raise ConfigError("alpha and beta are derived; do not pass them")
        if self.kind == "fixed":
            if not 0.0 < self.mu_fixed <= 1.0:
                raise ConfigError("mu_fixed must lie in (0, 1]")
            return
        if not 0.0 < self.mu_min <= self.mu_max <= 1.0:
            raise ConfigError("need 0 < mu_min <= mu_max <= 1")
        if self.kind == "state-based":
            if self.mu_min >= 1.0:
                raise ConfigError("state-based mu_min must lie strictly below 1")
            alpha, beta = derive_alpha_beta(self.mu_min, min(self.mu_max, _MU_MAX_CAP))
            object.__setattr__(self, "alpha", alpha)
            object.__setattr__(self, "beta", beta)


def fixed(mu=0.5):
    return VlStrategyConfig(kind="fixed", mu_fixed=mu)


def iteration_linear(mu_min=0.4, mu_max=0.7):
    return VlStrategyConfig(kind="iteration-linear", mu_min=mu_min, mu_max=mu_max)


def state_based(mu_min=0.4, mu_max=0.7):
    return VlStrategyConfig(kind="state-based", mu_min=mu_min, mu_max=mu_max)


@dataclass(frozen=True)
class VelocityLimit:
    """The limit in force for one iteration."""

    per_dimension: object  # D-vector of non-negative reals
    mu_current: float


def velocity_limit(config, bounds, f, k, max_iters):
    """The velocity limit a strategy prescribes for this iteration.

    ``f`` is the current evolutionary factor (ignored by the fixed and
    iteration-linear kinds), ``k`` the iteration index (ignored by the fixed
    and state-based kinds).
    """
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"evolutionary factor {f} outside [0, 1]")
    if not 0 <= k < max_iters:
        raise ValueError(f"iteration {k} outside [0, {max_iters})")
    if config.kind == "fixed":
        mu = config.mu_fixed
    elif config.kind == "iteration-linear":
        if max_iters == 1:
            mu = config.mu_max
        else:
            mu = config.mu_max - (config.mu_max - config.mu_min) * k / (max_iters - 1)
    else:
        mu = sigmoid_mu(f, config.alpha, config.beta)
    return VelocityLimit(mu * bounds.half_range, mu)
