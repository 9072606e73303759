"""The benchmark suite: seven minimization problems with known optima.

Five classic functions plus rotated variants of two of them.  All are scaled
so the global minimum value is 0, and each carries the position bounds and
the acceptance threshold used to declare a trial successful:

====  ==================  ============  ==========
id    function            bounds        acceptance
====  ==================  ============  ==========
f1    sphere              ±100          0.01
f2    rosenbrock          ±100          500
f3    rastrigin           ±5.12         50
f4    griewank            ±600          0.5
f5    schwefel            ±500          7000
f6    rotated-griewank    ±600          5
f7    rotated-rastrigin   ±5.12         150
====  ==================  ============  ==========

The rotated variants evaluate the base function at ``z = R·x`` with a fixed,
seeded orthogonal ``R``, which breaks dimension separability.  The rotation
seeds are package constants so every experiment sees the same landscape.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _backend
from .core import Bounds, ConfigError

#: Rotation seed per rotated function; fixed so results are comparable
#: across runs and recorded in every experiment's provenance.
ROTATION_SEEDS = {"f6": 601, "f7": 701}

# id -> (long name, function id, symmetric bound, acceptance, rotated?)
_CATALOG = {
    "f1": ("sphere", 1, 100.0, 0.01, False),
    "f2": ("rosenbrock", 2, 100.0, 500.0, False),
    "f3": ("rastrigin", 3, 5.12, 50.0, False),
    "f4": ("griewank", 4, 600.0, 0.5, False),
    "f5": ("schwefel", 5, 500.0, 7000.0, False),
    "f6": ("rotated-griewank", 6, 600.0, 5.0, True),
    "f7": ("rotated-rastrigin", 7, 5.12, 150.0, True),
}

_BY_LONG_NAME = {long: fid for fid, (long, *_rest) in _CATALOG.items()}


def available_functions():
    """Short ids and long names accepted by :func:`get_problem`."""
    return tuple(_CATALOG) + tuple(_BY_LONG_NAME)


@dataclass(frozen=True)
class BenchmarkProblem:
    """An objective with its domain, acceptance threshold, and optional rotation."""

    name: str
    fid: int
    dimension: int
    bounds: Bounds
    acceptance: float
    global_min_value: float = 0.0
    rotation: Optional[np.ndarray] = None
    rotation_seed: Optional[int] = None


def make_rotation(dimension, seed):
    """Deterministic random orthogonal matrix.

    QR factorization of a seeded standard-normal matrix, with column signs
    fixed so the factorization's sign ambiguity cannot leak in: the result is
    a pure function of ``(dimension, seed)``.
    """
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    a = rng.standard_normal((dimension, dimension))
    q, r = np.linalg.qr(a)
    signs = np.sign(np.diag(r))
    signs[signs == 0.0] = 1.0
    return np.ascontiguousarray(q * signs)


def get_problem(name, dimension):
    """Instantiate a catalog function at the requested dimension."""
    key = name if name in _CATALOG else _BY_LONG_NAME.get(name)
    if key is None:
        raise ConfigError(
            f"unknown benchmark function {name!r}; available: {', '.join(available_functions())}"
        )
    if dimension < 1:
        raise ConfigError("benchmark dimension must be at least 1")
    long_name, fid, limit, acceptance, rotated = _CATALOG[key]
    rotation = rotation_seed = None
    if rotated:
        rotation_seed = ROTATION_SEEDS[key]
        rotation = make_rotation(dimension, rotation_seed)
    return BenchmarkProblem(
        name=key,
        fid=fid,
        dimension=dimension,
        bounds=Bounds.symmetric(limit, dimension),
        acceptance=acceptance,
        rotation=rotation,
        rotation_seed=rotation_seed,
    )


def evaluate(problem, x):
    """Objective value at ``x`` (which callers keep inside the bounds)."""
    x = np.ascontiguousarray(x, dtype=float)
    if x.shape != (problem.dimension,):
        raise ConfigError(
            f"point has shape {x.shape}, expected ({problem.dimension},) for {problem.name}"
        )
    return _backend.kernels().evaluate(problem.fid, x, problem.rotation)
