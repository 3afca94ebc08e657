"""Numba switch for the hot kernels.

Set ``CYLCRIT_DISABLE_NUMBA=1`` to run every kernel as plain Python/NumPy.
The kernels are written so that the same source runs under both paths.
"""

import os

_FLAG = os.environ.get("CYLCRIT_DISABLE_NUMBA", "").strip().lower()
DISABLED_BY_ENV = _FLAG not in ("", "0", "false", "no")

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USE_NUMBA = numba is not None and not DISABLED_BY_ENV


def jit(fn):
    """Compile ``fn`` with ``numba.njit`` when acceleration is enabled."""
    if USE_NUMBA:
        return numba.njit(cache=True)(fn)
    return fn


def python_impl(fn):
    """Return the undecorated Python function behind a (possibly) jitted kernel."""
    return getattr(fn, "py_func", fn)


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
