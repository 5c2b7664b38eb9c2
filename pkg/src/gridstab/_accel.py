"""Numba acceleration toggle.

Hot kernels ship in two variants: a numba-compiled loop and a pure-numpy
fallback. The active variant is chosen once at import time: set
``GRIDSTAB_NUMBA=0`` (or uninstall numba) to force the numpy path.
Both variants stay importable for benchmarks and parity tests.
"""
import os


def _requested() -> bool:
    flag = os.environ.get("GRIDSTAB_NUMBA", "1").strip().lower()
    return flag not in ("0", "false", "no", "off")


try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

NUMBA_ENABLED = HAVE_NUMBA and _requested()


def njit_maybe(**options):
    """Return ``numba.njit(**options)`` when enabled, else a no-op decorator."""
    if NUMBA_ENABLED:
        from numba import njit

        return njit(**options)

    def decorate(fn):
        return fn

    return decorate
