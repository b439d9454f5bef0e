"""Numba/numpy backend selection for the hot kernels.

The compiled path is used whenever numba imports cleanly; set
USCPOL_NUMBA=0 in the environment to force the pure-numpy fallback
(useful for debugging and for the backend benchmark).
"""

import os

try:
    import numba  # noqa: F401
    _HAVE_NUMBA = True
except ImportError:
    _HAVE_NUMBA = False


def numba_available() -> bool:
    return _HAVE_NUMBA


def numba_enabled() -> bool:
    """True when the njit kernels should be used."""
    flag = os.environ.get("USCPOL_NUMBA", "1").strip().lower()
    if flag in ("0", "false", "off", "no"):
        return False
    return _HAVE_NUMBA


def backend_name() -> str:
    return "numba" if numba_enabled() else "numpy"
