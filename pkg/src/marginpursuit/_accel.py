"""Numba switch.

Set ``MARGINPURSUIT_NUMBA=0`` before import to force the pure-numpy code
paths. Numba is optional; without it the numpy paths are used silently.
"""
import os

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

_FLAG = os.environ.get("MARGINPURSUIT_NUMBA", "1").strip().lower()
USE_NUMBA = numba is not None and _FLAG not in {"0", "false", "no", "off"}


def njit(*args, **kwargs):
    """``numba.njit`` when numba is enabled, otherwise a no-op decorator."""
    if numba is None:
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f
    kwargs.setdefault("cache", True)
    return numba.njit(*args, **kwargs)


def backend():
    return "numba" if USE_NUMBA else "numpy"
