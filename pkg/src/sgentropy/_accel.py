"""Numba acceleration toggle.

The hot counting kernels are written once, in nopython-compatible style, and
compiled with numba when available. Setting the environment variable
``SGENTROPY_BACKEND=numpy`` (or ``python``) before import forces the pure
interpreted fallback; ``SGENTROPY_BACKEND=numba`` demands the compiled path and
raises if numba cannot be imported. Default is numba when importable.

Results are identical between backends: the kernels are integer counters and
fixed-order float loops, so no reassociation differences arise.
"""

import os

_requested = os.environ.get("SGENTROPY_BACKEND", "auto").strip().lower()

if _requested in ("numpy", "python", "off", "0"):
    NUMBA_ENABLED = False
elif _requested in ("numba", "jit", "1"):
    from numba import njit as _numba_njit  # noqa: F401

    NUMBA_ENABLED = True
else:
    try:
        from numba import njit as _numba_njit  # noqa: F401

        NUMBA_ENABLED = True
    except ImportError:
        NUMBA_ENABLED = False


def njit(*args, **kwargs):
    """``numba.njit`` when enabled, identity decorator otherwise."""
    if NUMBA_ENABLED:
        return _numba_njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]

    def passthrough(func):
        return func

    return passthrough


def backend_name() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"
