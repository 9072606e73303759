"""Repair of out-of-limit velocities and out-of-bounds positions.

Both repairs touch only the offending components and consume one random draw
per repaired component, in ascending dimension order — components already
inside their limits are returned untouched and cost no randomness.  Boundary
values count as inside (the violation tests are strict inequalities).

Velocity repair branches on the swarm's evolutionary factor: while the swarm
is globally searching (``f >= 0.5``) a too-fast component is clamped to the
nearer limit, preserving its direction; while locally searching it is
replaced by a fresh uniform value in ``[-limit, limit]``, since a converging
swarm gains nothing from pinning velocities at their extremes.
"""

import numpy as np

from . import _pykernels
from .vl import VelocityLimit


def handle_velocity(v, vl, f, rng):
    """Velocity vector with every component brought inside ``[-VL, VL]``.

    ``vl`` may be a :class:`~savlpso.vl.VelocityLimit` or a bare vector of
    per-dimension limits.  Returns a new array; the input is not modified.
    """
    out = np.array(v, dtype=float)
    per_dim = vl.per_dimension if isinstance(vl, VelocityLimit) else np.asarray(vl, dtype=float)
    _pykernels.repair_velocity_inplace(out, per_dim, f, rng)
    return out


def handle_position(x, bounds, rng):
    """Position vector with every component redistributed into its bounds.

    Returns a new array; the input is not modified.
    """
    out = np.array(x, dtype=float)
    _pykernels.repair_position_inplace(out, bounds.lower, bounds.upper, rng)
    return out
