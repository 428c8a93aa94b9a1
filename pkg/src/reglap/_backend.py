"""Numba acceleration toggle.

Hot inner loops (the jump-chain simulator and its RNG) are written once in
plain Python/numpy style and wrapped with ``numba.njit`` unless the user opts
out.  Set ``REGLAP_NUMBA=0`` to force the pure-Python/numpy fallback; both
paths use the same integer RNG and produce identical streams.
"""

import os

_flag = os.environ.get("REGLAP_NUMBA", "1").strip().lower()
_want_numba = _flag not in ("0", "false", "no", "off")

USE_NUMBA = False
if _want_numba:
    try:
        import numba  # noqa: F401
        USE_NUMBA = True
    except ImportError:
        USE_NUMBA = False


def maybe_njit(**kwargs):
    """Return ``numba.njit(**kwargs)`` or the identity decorator."""
    if USE_NUMBA:
        import numba
        return numba.njit(**kwargs)

    def identity(func):
        return func

    return identity
