"""Backend selection for the hot kernels.

Set ``GBFORGE_BACKEND=numpy`` to run every kernel as plain Python/numpy
(useful for debugging and for benchmarking the compiled path against it).
Any other value, or no value, uses numba when it can be imported.
"""

from __future__ import annotations

import os

BACKEND_ENV = "GBFORGE_BACKEND"

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False


def _requested_backend() -> str:
    value = os.environ.get(BACKEND_ENV, "numba").strip().lower()
    return "numpy" if value in ("numpy", "python", "off", "0") else "numba"


USE_NUMBA = HAVE_NUMBA and _requested_backend() == "numba"
BACKEND = "numba" if USE_NUMBA else "numpy"


def jit(func=None, **kwargs):
    """``numba.njit`` when the compiled backend is active, identity otherwise.

    The undecorated function is always reachable as ``.py_func`` so that
    callers (tests, benchmarks) can run both paths in one process.
    """

    def wrap(f):
        if USE_NUMBA:
            opts = {"cache": True, "nogil": True}
            opts.update(kwargs)
            return numba.njit(**opts)(f)
        f.py_func = f
        return f

    if func is not None:
        return wrap(func)
    return wrap
