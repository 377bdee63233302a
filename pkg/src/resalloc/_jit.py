"""Numba switch.

Hot kernels are decorated with :func:`njit`.  Setting the environment
variable ``RESALLOC_DISABLE_JIT=1`` (before import) turns the decorator into
a no-op so the same kernels run as plain Python over numpy arrays.  That path
is slower but easy to debug and is exercised by the benchmark.
"""

import os

JIT_ENABLED = os.environ.get("RESALLOC_DISABLE_JIT", "0").lower() not in ("1", "true", "yes")

if JIT_ENABLED:
    try:
        from numba import njit as _numba_njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        JIT_ENABLED = False

if JIT_ENABLED:

    def njit(*args, **kwargs):
        kwargs.setdefault("cache", True)
        kwargs.setdefault("nogil", True)
        return _numba_njit(*args, **kwargs)

else:

    def njit(func=None, **kwargs):
        if func is not None and callable(func):
            return func

        def wrapper(f):
            return f

        return wrapper
