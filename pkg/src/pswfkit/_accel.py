"""Backend selection for the compiled kernels.

Set ``PSWFKIT_NO_NUMBA=1`` before import to force the pure-numpy kernels.
"""

import os

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

_FLAG = os.environ.get("PSWFKIT_NO_NUMBA", "").strip().lower()
NUMBA_AVAILABLE = numba is not None
USE_NUMBA = NUMBA_AVAILABLE and _FLAG in ("", "0", "false", "no")


def njit(func):
    """Compile ``func`` in nopython mode when numba is importable.

    The undecorated function is kept as ``func.py_func`` either way, so the
    kernels can also be exercised as plain Python in tests.
    """
    if not NUMBA_AVAILABLE:
        func.py_func = func
        return func
    return numba.njit(cache=True)(func)


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
