"""Kernel backend selection.

Two interchangeable kernel sets exist: the compiled extension
(:mod:`savlpso._kernels`, built from Cython) and the pure-Python reference
(:mod:`savlpso._pykernels`).  They are bit-for-bit equivalent by contract, so
the choice only affects speed.  The default is the compiled set when the
extension imported successfully, overridable with the ``SAVLPSO_BACKEND``
environment variable (``auto``, ``compiled``, or ``python``) or at runtime
with :func:`use`.
"""

import os

from . import _pykernels

try:
    from . import _kernels
except ImportError:
    _kernels = None

_BACKENDS = {"python": _pykernels}
if _kernels is not None:
    _BACKENDS["compiled"] = _kernels


def available():
    """Names of the kernel sets importable in this installation."""
    return tuple(sorted(_BACKENDS))


def _resolve(name):
    if name == "auto":
        return _BACKENDS.get("compiled", _pykernels)
    try:
        return _BACKENDS[name]
    except KeyError:
        raise RuntimeError(
            f"kernel backend {name!r} is not available; "
            f"choose from {('auto',) + available()}"
        ) from None


_active = _resolve(os.environ.get("SAVLPSO_BACKEND", "auto"))


def kernels():
    """The active kernel module."""
    return _active


def active_name():
    return _active.BACKEND_NAME


def use(name):
    """Switch backends (``auto``/``compiled``/``python``); returns the previous name."""
    global _active
    previous = _active.BACKEND_NAME
    _active = _resolve(name)
    return previous
