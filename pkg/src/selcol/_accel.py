"""Optional numba acceleration for the combinatorial kernels.

Kernels are written in the numba-compatible subset of Python and run
interpreted when ``SELCOL_DISABLE_NUMBA`` is set to a truthy value (or when
numba is not importable). Both paths execute the same source.
"""

import os
import time

_flag = os.environ.get("SELCOL_DISABLE_NUMBA", "").strip().lower()
_disabled = _flag not in ("", "0", "false", "no")

try:
    if _disabled:
        raise ImportError
    import numba
    from numba import objmode

    USE_NUMBA = True
except ImportError:
    numba = None
    USE_NUMBA = False


def kernel(fn):
    """Compile ``fn`` with ``numba.njit`` when acceleration is enabled."""
    if USE_NUMBA:
        return numba.njit(cache=True)(fn)
    return fn


if USE_NUMBA:

    @numba.njit(cache=True)
    def clock():
        with objmode(t="f8"):
            t = time.perf_counter()
        return t

else:
    clock = time.perf_counter


def backend():
    return "numba" if USE_NUMBA else "python"
