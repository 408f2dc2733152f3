"""Backend selection for the numeric kernels.

Set ``COMPCYCLE_DISABLE_JIT=1`` to force the pure-numpy path even when numba
is importable.
"""
import os

_FLAG = os.environ.get("COMPCYCLE_DISABLE_JIT", "").strip().lower()

try:
    import numba as nb

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    nb = None
    NUMBA_AVAILABLE = False

USE_NUMBA = NUMBA_AVAILABLE and _FLAG not in ("1", "true", "yes", "on")


def njit(*args, **kwargs):
    if NUMBA_AVAILABLE:
        return nb.njit(*args, **kwargs)
    return lambda func: func
