"""Pure-Python reference kernels.

These are the semantic ground truth for the hot loops: the compiled extension
(:mod:`savlpso._kernels`) must reproduce every result here bit-for-bit, given
the same random generator state.  That contract is what makes trials
reproducible regardless of which backend happens to be active, so a few rules
are followed pedantically:

* random draws are consumed in a fixed, documented order (see ``sweep``);
* every floating-point reduction runs strictly left to right;
* arithmetic expression trees are written out explicitly and mirrored
  verbatim in the Cython source.

Scalar transcendentals come from :mod:`math` (libm), matching the libc calls
made by the compiled code.
"""

import math

import numpy as np

BACKEND_NAME = "python"

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# objective functions
# ---------------------------------------------------------------------------

def _sphere(z, n):
    acc = 0.0
    for d in range(n):
        acc = acc + z[d] * z[d]
    return acc


def _rosenbrock(z, n):
    acc = 0.0
    for d in range(n - 1):
        a = z[d + 1] - z[d] * z[d]
        b = z[d] - 1.0
        acc = acc + (100.0 * (a * a) + b * b)
    return acc


def _rastrigin(z, n):
    acc = 0.0
    for d in range(n):
        acc = acc + (z[d] * z[d] - 10.0 * math.cos(TWO_PI * z[d]) + 10.0)
    return acc


def _griewank(z, n):
    s = 0.0
    p = 1.0
    for d in range(n):
        s = s + z[d] * z[d]
        p = p * math.cos(z[d] / math.sqrt(d + 1.0))
    return 1.0 + s / 4000.0 - p


def _schwefel(z, n):
    acc = 0.0
    for d in range(n):
        acc = acc + z[d] * math.sin(math.sqrt(abs(z[d])))
    return 418.9829 * n - acc


_BASE = {
    1: _sphere,
    2: _rosenbrock,
    3: _rastrigin,
    4: _griewank,
    5: _schwefel,
    6: _griewank,   # rotated
    7: _rastrigin,  # rotated
}


def evaluate(fid, x, rotation=None):
    """Objective value of function ``fid`` (1..7) at point ``x``.

    For the rotated functions the point is first mapped through
    ``z = rotation @ x`` using an explicit row-by-row scalar product so the
    accumulation order is fixed.
    """
    base = _BASE.get(fid)
    if base is None:
        raise ValueError(f"unknown function id: {fid}")
    n = len(x)
    if rotation is not None:
        z = [0.0] * n
        for r in range(n):
            acc = 0.0
            for d in range(n):
                acc = acc + rotation[r, d] * x[d]
            z[r] = acc
    else:
        z = x
    return base(z, n)


# ---------------------------------------------------------------------------
# swarm geometry
# ---------------------------------------------------------------------------

def mean_distances(positions):
    """Per-particle mean Euclidean distance to every other particle.

    Returns ``(dists, pair_count)`` where ``pair_count`` is the number of
    pairwise distances actually computed (one per unordered pair).
    """
    n = positions.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    diffs = positions[iu] - positions[ju]
    sq = diffs * diffs
    # np.add.accumulate is a strict left-to-right scan, unlike np.sum which
    # may reassociate; the last column is the sequential total.
    dist = np.sqrt(np.add.accumulate(sq, axis=1)[:, -1])
    full = np.zeros((n, n))
    full[iu, ju] = dist
    full[ju, iu] = dist
    rows = np.add.accumulate(full, axis=1)[:, -1]
    denom = n - 1.0
    return rows / denom, len(iu)


# ---------------------------------------------------------------------------
# per-particle update steps
# ---------------------------------------------------------------------------

def update_velocity_inplace(v, x, pbest, gbest, omega, c1, c2, gen):
    """One velocity update; draws r1 then r2 for each dimension in order."""
    for d in range(v.shape[0]):
        r1 = gen.random()
        r2 = gen.random()
        v[d] = omega * v[d] + (c1 * r1) * (pbest[d] - x[d]) + (c2 * r2) * (gbest[d] - x[d])


def repair_velocity_inplace(v, vl, f, gen):
    """Bring out-of-limit velocity components back within ``[-vl, vl]``.

    Components already inside the limit (boundary inclusive) are untouched and
    consume no randomness.  Violating components are clamped to the nearer
    limit while the swarm is globally searching (``f >= 0.5``) and replaced by
    a fresh uniform draw in ``[-vl, vl]`` otherwise.
    """
    for d in range(v.shape[0]):
        limit = vl[d]
        val = v[d]
        if val > limit or val < -limit:
            if f >= 0.5:
                v[d] = limit if val > limit else -limit
            else:
                v[d] = gen.random() * (2.0 * limit) - limit


def repair_position_inplace(x, lower, upper, gen):
    """Redistribute out-of-bounds components uniformly inside the bounds."""
    for d in range(x.shape[0]):
        lo = lower[d]
        hi = upper[d]
        val = x[d]
        if val > hi or val < lo:
            x[d] = gen.random() * (hi - lo) + lo


# ---------------------------------------------------------------------------
# fused per-iteration sweep
# ---------------------------------------------------------------------------

def sweep(positions, velocities, pbest_positions, pbest_values, gbest_position,
          omega, c1, c2, vl, f, lower, upper, fid, rotation, gen):
    """Move every particle once and refresh its personal best in place.

    Particles are processed in index order.  Per particle the random draws
    are: two per dimension for the velocity update, then one per
    velocity-limit violation (ascending dimension, only when ``f < 0.5``),
    then one per out-of-bounds position component (ascending dimension).
    ``gbest_position`` is read-only here; the caller refreshes the global
    best once per iteration after the sweep.
    """
    n = positions.shape[0]
    ndim = positions.shape[1]
    for i in range(n):
        x = positions[i]
        v = velocities[i]
        update_velocity_inplace(v, x, pbest_positions[i], gbest_position,
                                omega, c1, c2, gen)
        repair_velocity_inplace(v, vl, f, gen)
        for d in range(ndim):
            x[d] = x[d] + v[d]
        repair_position_inplace(x, lower, upper, gen)
        value = evaluate(fid, x, rotation)
        if value < pbest_values[i]:
            pbest_values[i] = value
            pbest_positions[i, :] = x
