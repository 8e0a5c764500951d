"""Kernel backend selection.

Hot kernels are written in the numpy subset that numba understands.  By
default they are compiled with ``numba.njit``; setting ``IGMAHP_DISABLE_NUMBA=1``
(or running without numba installed) keeps them as plain numpy functions.
The flag is read once, at import time.
"""

import os

_FLAG = "IGMAHP_DISABLE_NUMBA"

_disabled = os.environ.get(_FLAG, "").strip().lower() not in ("", "0", "false", "no")

if not _disabled:
    try:
        import numba
    except ImportError:  # pragma: no cover - numba is a declared dependency
        numba = None
else:
    numba = None

USE_NUMBA = numba is not None
BACKEND = "numba" if USE_NUMBA else "numpy"


def kernel(fn):
    """Compile ``fn`` with numba when enabled, else return it unchanged.

    Either way the original Python function stays reachable as ``fn.py_func``.
    """
    if USE_NUMBA:
        return numba.njit(cache=True, nogil=True)(fn)
    fn.py_func = fn
    return fn
