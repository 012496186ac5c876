"""JIT selection for the numeric kernels.

Kernels are written as plain loop code.  By default they are compiled with
numba's ``njit``; setting ``WLDIM_PURE=1`` in the environment (before import)
keeps them as ordinary Python and switches the vectorisable kernels to their
numpy implementations.  Results are identical on both paths.
"""

import os

PURE = os.environ.get("WLDIM_PURE", "").strip().lower() in {"1", "true", "yes", "on"}

if not PURE:
    try:
        import numba
    except ImportError:  # pragma: no cover - numba is a declared dependency
        PURE = True

if PURE:

    def jit(func):
        return func

else:

    def jit(func):
        return numba.njit(cache=True, nogil=True)(func)


def backend() -> str:
    return "numpy" if PURE else "numba"
