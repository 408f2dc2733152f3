"""Kernel dispatch: numba when available and enabled, numpy otherwise."""
import numpy as np

from . import _kernels_np
from ._accel import USE_NUMBA

if USE_NUMBA:
    from . import _kernels_jit as _impl

    BACKEND = "numba"
else:
    _impl = _kernels_np
    BACKEND = "numpy"

category_violations = _impl.category_violations
functor_violations = _impl.functor_violations
naturality_violations = _impl.naturality_violations
triangle_violations = _impl.triangle_violations
roundtrip_violations = _impl.roundtrip_violations
square_violations = _impl.square_violations


def sort_rows(rows):
    """Order violation rows by (code, a, b, c); indices follow name order."""
    if len(rows) < 2:
        return rows
    order = np.lexsort((rows[:, 3], rows[:, 2], rows[:, 1], rows[:, 0]))
    return rows[order]
