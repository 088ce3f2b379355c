"""Optional numba acceleration: `jit` compiles when numba is importable, else is a no-op."""

try:
    from numba import njit as _njit

    def jit(func):
        return _njit(cache=True)(func)

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only on numba-less installs
    def jit(func):
        return func

    HAVE_NUMBA = False
