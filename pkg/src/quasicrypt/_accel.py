"""Backend selection for the hot kernels.

Set ``QUASICRYPT_NO_NUMBA=1`` to force the pure-numpy path even when numba
is importable.  The choice is made once, at import time.
"""
import os

_DISABLED = os.environ.get("QUASICRYPT_NO_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    import numba

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    NUMBA_AVAILABLE = False

USE_NUMBA = NUMBA_AVAILABLE and not _DISABLED


def njit(func):
    """Compile ``func`` with numba when available, else hand it back untouched."""
    if not NUMBA_AVAILABLE:
        return func
    return numba.njit(cache=True)(func)
