# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled kernels: drop-in replacements for :mod:`savlpso._pykernels`.

Every function here must be bit-for-bit equivalent to the pure-Python
reference given the same generator state.  The expression trees, reduction
orders, and random-draw order are copied verbatim from ``_pykernels``; keep
the two files in sync when changing either.  Random numbers are pulled
straight from the generator's underlying bit stream, which yields the exact
sequence ``Generator.random()`` would produce.
"""

from cpython.pycapsule cimport PyCapsule_GetPointer
from libc.math cimport M_PI, cos, fabs, sin, sqrt
from numpy.random cimport bitgen_t

import numpy as np

BACKEND_NAME = "compiled"

cdef double TWO_PI = 2.0 * M_PI


cdef inline bitgen_t *_bitgen(object gen) except NULL:
    capsule = gen.bit_generator.capsule
    return <bitgen_t *> PyCapsule_GetPointer(capsule, "BitGenerator")


cdef inline double _next(bitgen_t *bg) noexcept nogil:
    return bg.next_double(bg.state)


# ---------------------------------------------------------------------------
# objective functions
# ---------------------------------------------------------------------------

cdef double _sphere(double *z, Py_ssize_t n) noexcept nogil:
    cdef double acc = 0.0
    cdef Py_ssize_t d
    for d in range(n):
        acc = acc + z[d] * z[d]
    return acc


cdef double _rosenbrock(double *z, Py_ssize_t n) noexcept nogil:
    cdef double acc = 0.0
    cdef double a, b
    cdef Py_ssize_t d
    for d in range(n - 1):
        a = z[d + 1] - z[d] * z[d]
        b = z[d] - 1.0
        acc = acc + (100.0 * (a * a) + b * b)
    return acc


cdef double _rastrigin(double *z, Py_ssize_t n) noexcept nogil:
    cdef double acc = 0.0
    cdef Py_ssize_t d
    for d in range(n):
        acc = acc + (z[d] * z[d] - 10.0 * cos(TWO_PI * z[d]) + 10.0)
    return acc


cdef double _griewank(double *z, Py_ssize_t n) noexcept nogil:
    cdef double s = 0.0
    cdef double p = 1.0
    cdef Py_ssize_t d
    for d in range(n):
        s = s + z[d] * z[d]
        p = p * cos(z[d] / sqrt(d + 1.0))
    return 1.0 + s / 4000.0 - p


cdef double _schwefel(double *z, Py_ssize_t n) noexcept nogil:
    cdef double acc = 0.0
    cdef Py_ssize_t d
    for d in range(n):
        acc = acc + z[d] * sin(sqrt(fabs(z[d])))
    return 418.9829 * n - acc


cdef double _base(int fid, double *z, Py_ssize_t n) noexcept nogil:
    if fid == 1:
        return _sphere(z, n)
    elif fid == 2:
        return _rosenbrock(z, n)
    elif fid == 3 or fid == 7:
        return _rastrigin(z, n)
    elif fid == 4 or fid == 6:
        return _griewank(z, n)
    return _schwefel(z, n)


cdef void _matvec(double *rot, double *x, double *z, Py_ssize_t n) noexcept nogil:
    cdef double acc
    cdef Py_ssize_t r, d
    for r in range(n):
        acc = 0.0
        for d in range(n):
            acc = acc + rot[r * n + d] * x[d]
        z[r] = acc


def evaluate(int fid, double[::1] x, rotation=None):
    """Objective value of function ``fid`` (1..7) at point ``x``."""
    if fid < 1 or fid > 7:
        raise ValueError(f"unknown function id: {fid}")
    cdef Py_ssize_t n = x.shape[0]
    cdef double[:, ::1] rot
    cdef double[::1] z
    if rotation is not None:
        rot = rotation
        zbuf = np.empty(n)
        z = zbuf
        _matvec(&rot[0, 0], &x[0], &z[0], n)
        return _base(fid, &z[0], n)
    return _base(fid, &x[0], n)


# ---------------------------------------------------------------------------
# swarm geometry
# ---------------------------------------------------------------------------

def mean_distances(double[:, ::1] positions):
    """Per-particle mean distance to the others; returns (dists, pair_count)."""
    cdef Py_ssize_t n = positions.shape[0]
    cdef Py_ssize_t ndim = positions.shape[1]
    out_arr = np.zeros(n)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, j, d, pairs = 0
    cdef double acc, diff, dist
    cdef double *pi
    cdef double *pj
    for i in range(n):
        pi = &positions[i, 0]
        for j in range(i + 1, n):
            pj = &positions[j, 0]
            acc = 0.0
            for d in range(ndim):
                diff = pi[d] - pj[d]
                acc = acc + diff * diff
            dist = sqrt(acc)
            out[i] = out[i] + dist
            out[j] = out[j] + dist
            pairs = pairs + 1
    cdef double denom = n - 1.0
    for i in range(n):
        out[i] = out[i] / denom
    return out_arr, pairs


# ---------------------------------------------------------------------------
# per-particle update steps
# ---------------------------------------------------------------------------

cdef void _update_velocity(double *v, double *x, double *pb, double *gb,
                           double omega, double c1, double c2,
                           Py_ssize_t ndim, bitgen_t *bg) noexcept nogil:
    cdef double r1, r2
    cdef Py_ssize_t d
    for d in range(ndim):
        r1 = _next(bg)
        r2 = _next(bg)
        v[d] = omega * v[d] + (c1 * r1) * (pb[d] - x[d]) + (c2 * r2) * (gb[d] - x[d])


cdef void _repair_velocity(double *v, double *vl, double f,
                           Py_ssize_t ndim, bitgen_t *bg) noexcept nogil:
    cdef double limit, val
    cdef Py_ssize_t d
    for d in range(ndim):
        limit = vl[d]
        val = v[d]
        if val > limit or val < -limit:
            if f >= 0.5:
                v[d] = limit if val > limit else -limit
            else:
                v[d] = _next(bg) * (2.0 * limit) - limit


cdef void _repair_position(double *x, double *lo, double *hi,
                           Py_ssize_t ndim, bitgen_t *bg) noexcept nogil:
    cdef double l, h, val
    cdef Py_ssize_t d
    for d in range(ndim):
        l = lo[d]
        h = hi[d]
        val = x[d]
        if val > h or val < l:
            x[d] = _next(bg) * (h - l) + l


def update_velocity_inplace(double[::1] v, double[::1] x, double[::1] pbest,
                            double[::1] gbest, double omega, double c1,
                            double c2, object gen):
    _update_velocity(&v[0], &x[0], &pbest[0], &gbest[0], omega, c1, c2,
                     v.shape[0], _bitgen(gen))


def repair_velocity_inplace(double[::1] v, double[::1] vl, double f, object gen):
    _repair_velocity(&v[0], &vl[0], f, v.shape[0], _bitgen(gen))


def repair_position_inplace(double[::1] x, double[::1] lower, double[::1] upper,
                            object gen):
    _repair_position(&x[0], &lower[0], &upper[0], x.shape[0], _bitgen(gen))


# ---------------------------------------------------------------------------
# fused per-iteration sweep
# ---------------------------------------------------------------------------

def sweep(double[:, ::1] positions, double[:, ::1] velocities,
          double[:, ::1] pbest_positions, double[::1] pbest_values,
          double[::1] gbest_position, double omega, double c1, double c2,
          double[::1] vl, double f, double[::1] lower, double[::1] upper,
          int fid, rotation, object gen):
    """Move every particle once and refresh its personal best in place.

    Mirrors ``_pykernels.sweep``: same particle order, same draw order, same
    arithmetic.
    """
    cdef Py_ssize_t n = positions.shape[0]
    cdef Py_ssize_t ndim = positions.shape[1]
    cdef bitgen_t *bg = _bitgen(gen)
    cdef double[:, ::1] rot
    cdef double *rotp = NULL
    if rotation is not None:
        rot = rotation
        rotp = &rot[0, 0]
    zbuf = np.empty(ndim)
    cdef double[::1] z = zbuf
    cdef double *zp = &z[0]
    cdef double *gb = &gbest_position[0]
    cdef double *vlp = &vl[0]
    cdef double *lo = &lower[0]
    cdef double *hi = &upper[0]
    cdef double *xp
    cdef double *vp
    cdef double *pb
    cdef double value
    cdef Py_ssize_t i, d
    for i in range(n):
        xp = &positions[i, 0]
        vp = &velocities[i, 0]
        pb = &pbest_positions[i, 0]
        _update_velocity(vp, xp, pb, gb, omega, c1, c2, ndim, bg)
        _repair_velocity(vp, vlp, f, ndim, bg)
        for d in range(ndim):
            xp[d] = xp[d] + vp[d]
        _repair_position(xp, lo, hi, ndim, bg)
        if rotp != NULL:
            _matvec(rotp, xp, zp, ndim)
            value = _base(fid, zp, ndim)
        else:
            value = _base(fid, xp, ndim)
        if value < pbest_values[i]:
            pbest_values[i] = value
            for d in range(ndim):
                pb[d] = xp[d]
