"""JIT toggle for the hot numeric kernels.

Every inner-loop kernel in this package is written as plain scalar/ndarray
Python that numba can compile in ``nopython`` mode.  By default the kernels
are compiled with ``@njit(cache=True)``; setting the environment variable
``MIW_DISABLE_NUMBA=1`` (before import) selects the pure-Python/numpy
fallback path instead, which runs the exact same code uncompiled.

``benchmarks/bench_jit.py`` times the two paths against each other.
"""

import os

_TRUTHY = {"1", "true", "yes", "on"}


def numba_disabled_by_env() -> bool:
    return os.environ.get("MIW_DISABLE_NUMBA", "").strip().lower() in _TRUTHY


def _resolve():
    if numba_disabled_by_env():
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


NUMBA_ENABLED = _resolve()

if NUMBA_ENABLED:
    import numba as _numba

    def njit(*args, **kwargs):
        kwargs.setdefault("cache", True)
        if args and callable(args[0]):
            return _numba.njit(cache=kwargs["cache"])(args[0])
        return _numba.njit(*args, **kwargs)

else:

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def decorate(fn):
            return fn

        return decorate
