"""Backend switch for the numeric kernels.

Set ``COMPULSE_BACKEND=numpy`` to bypass numba entirely (useful for debugging
or on platforms without an LLVM build). ``COMPULSE_THREADS`` caps the numba
thread pool used by the grid kernels.
"""

import os

BACKEND = os.environ.get("COMPULSE_BACKEND", "numba").strip().lower()
if BACKEND not in ("numba", "numpy"):
    raise ImportError(f"COMPULSE_BACKEND must be 'numba' or 'numpy', got {BACKEND!r}")

try:
    import numba
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    numba = None

HAVE_NUMBA = numba is not None

if HAVE_NUMBA and "NUMBA_THREADING_LAYER_PRIORITY" not in os.environ:
    # prefer OpenMP; probing an outdated TBB prints a warning on every run
    numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]
USE_NUMBA = HAVE_NUMBA and BACKEND == "numba"


def njit(*args, **kwargs):
    """``numba.njit`` with project defaults, or the identity when numba is absent."""
    if not HAVE_NUMBA:
        if args and callable(args[0]):
            return args[0]
        return lambda f: f
    kwargs.setdefault("cache", True)
    kwargs.setdefault("nogil", True)
    return numba.njit(*args, **kwargs)


if HAVE_NUMBA:
    prange = numba.prange
else:  # pragma: no cover
    prange = range


def set_threads(n=None):
    """Apply a thread count (argument, else ``COMPULSE_THREADS``); returns the count in effect."""
    if not HAVE_NUMBA:
        return 1
    if n is None:
        env = os.environ.get("COMPULSE_THREADS")
        if not env:
            return numba.get_num_threads()
        n = int(env)
    n = max(1, min(int(n), numba.config.NUMBA_NUM_THREADS))
    numba.set_num_threads(n)
    return n
