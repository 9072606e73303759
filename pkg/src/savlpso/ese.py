"""Evolutionary state estimation.

The swarm's search phase is inferred from geometry alone: how far the
globally best particle sits from the rest, relative to the most- and
least-isolated particles.  The normalized result, the evolutionary factor
``f``, drives both the adaptive velocity limit and the out-of-limit velocity
repair branch.
"""

import enum
from dataclasses import dataclass

import numpy as np

from . import _backend


class SearchScope(enum.Enum):
    LOCAL_SEARCHING = "local-searching"
    GLOBAL_SEARCHING = "global-searching"


class SearchState(enum.Enum):
    """Crisp search-phase classification from the evolutionary factor."""

    CONVERGENCE = "convergence"
    EXPLOITATION = "exploitation"
    EXPLORATION = "exploration"
    JUMPING_OUT = "jumping-out"

    @property
    def coarse(self):
        if self in (SearchState.CONVERGENCE, SearchState.EXPLOITATION):
            return SearchScope.LOCAL_SEARCHING
        return SearchScope.GLOBAL_SEARCHING


@dataclass(frozen=True)
class EvolutionaryFactor:
    """The factor ``f`` plus the distances it was computed from.

    ``pair_count`` records how many pairwise distances were evaluated
    (``N·(N−1)/2``), exposing the dominant cost term to instrumentation.
    """

    f: float
    d_g: float
    d_min: float
    d_max: float
    pair_count: int


def mean_distances(positions):
    """Mean Euclidean distance from each particle to all the others.

    ``d[i] = (1/(N−1)) · Σ_{j≠i} ‖positions[i] − positions[j]‖``
    """
    positions = np.ascontiguousarray(positions, dtype=float)
    if positions.ndim != 2 or positions.shape[0] < 2:
        raise ValueError("need a 2-D position matrix with at least 2 particles")
    dists, _ = _backend.kernels().mean_distances(positions)
    return dists


def evolutionary_factor(positions, gbest_index):
    """Normalized isolation of the best particle: ``(d_g − d_min)/(d_max − d_min)``.

    A collapsed swarm (all mean distances equal, including all particles
    coincident) is treated as fully converged: ``f = 0``.
    """
    positions = np.ascontiguousarray(positions, dtype=float)
    if positions.ndim != 2 or positions.shape[0] < 2:
        raise ValueError("need a 2-D position matrix with at least 2 particles")
    n = positions.shape[0]
    if not 0 <= gbest_index < n:
        raise IndexError(f"gbest index {gbest_index} outside [0, {n})")
    dists, pairs = _backend.kernels().mean_distances(positions)
    d_g = float(dists[gbest_index])
    d_min = float(dists.min())
    d_max = float(dists.max())
    f = 0.0 if d_max == d_min else (d_g - d_min) / (d_max - d_min)
    return EvolutionaryFactor(f, d_g, d_min, d_max, pairs)


def classify_state(f):
    """Map ``f`` to a search state: quartile intervals, upper one closed."""
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"evolutionary factor {f} outside [0, 1]")
    if f < 0.25:
        return SearchState.CONVERGENCE
    if f < 0.5:
        return SearchState.EXPLOITATION
    if f < 0.75:
        return SearchState.EXPLORATION
    return SearchState.JUMPING_OUT
