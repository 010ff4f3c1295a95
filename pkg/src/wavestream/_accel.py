"""Numba dispatch for the hot kernels.

The streaming pyramid kernels are written as plain Python loops and compiled
with ``numba.njit`` when available.  Setting the environment variable
``WAVESTREAM_NUMBA=0`` (or numba being uninstalled) selects the pure-Python
fallback: the *same* source runs under the interpreter, so both paths produce
bit-identical results (no fastmath, identical operation order).
"""

import os

_flag = os.environ.get("WAVESTREAM_NUMBA", "1").strip().lower()
NUMBA_REQUESTED = _flag not in ("0", "false", "no", "off")

USING_NUMBA = False

if NUMBA_REQUESTED:
    try:
        from numba import njit

        USING_NUMBA = True
    except ImportError:
        pass

if not USING_NUMBA:

    def njit(*args, **kwargs):
        """No-op decorator standing in for numba.njit."""

        def wrap(func):
            return func

        if args and callable(args[0]):
            return args[0]
        return wrap
