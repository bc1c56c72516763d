"""Backend selection for the hot kernels.

The compiled Cython module is preferred when it imported cleanly; the pure
numpy/big-int module is the fallback and the reference.  Set
``LATTICEPROP_FORCE_PY=1`` to pin the pure backend (used by the parity tests
and the benchmark).
"""

import os

from . import kernels_py

_impl = kernels_py
if os.environ.get("LATTICEPROP_FORCE_PY", "") not in ("1", "true"):
    try:
        from . import kernels_cy as _cy
    except ImportError:
        _cy = None
    if _cy is not None:
        _impl = _cy

BACKEND = _impl.BACKEND


def pythagorean_triples(n):
    return _impl.pythagorean_triples(n)


def primitive_quadruple_count(n):
    return _impl.primitive_quadruple_count(n)


def path_count_spectrum(steps, dx, dt):
    """Dispatch with int64-overflow fallback to the big-integer kernel."""
    try:
        return _impl.path_count_spectrum(steps, dx, dt)
    except OverflowError:
        return kernels_py.path_count_spectrum(steps, dx, dt)
