"""Counter-based per-path random streams.

Each simulated path gets its own 64-bit splitmix64 stream whose start point
is a hash of ``(seed, path_index)``, so results do not depend on worker count
or scheduling.  The generator is implemented twice with identical integer
semantics: a numba-jitted version on uint64 and a pure-Python version with
explicit masking.  Both produce bit-identical streams.
"""

import numpy as np

from ._backend import USE_NUMBA, maybe_njit

_MASK = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


if USE_NUMBA:

    @maybe_njit(cache=True, nogil=True)
    def _mix(z):
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
        return z ^ (z >> np.uint64(31))

    @maybe_njit(cache=True, nogil=True)
    def rng_init(seed, path_index):
        # avalanche the path index so distinct paths land at effectively
        # independent offsets of the global splitmix sequence
        h = _mix(np.uint64(path_index) * np.uint64(_GOLDEN) + np.uint64(1))
        return _mix(np.uint64(seed) ^ h)

    @maybe_njit(cache=True, nogil=True)
    def rng_next_u64(state):
        state = state + np.uint64(_GOLDEN)
        return state, _mix(state)

    @maybe_njit(cache=True, nogil=True)
    def rng_next_double(state):
        state, z = rng_next_u64(state)
        return state, (z >> np.uint64(11)) * (1.0 / 9007199254740992.0)

else:

    def _mix(z):
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def rng_init(seed, path_index):
        h = _mix((int(path_index) * _GOLDEN + 1) & _MASK)
        return _mix(int(seed) ^ h)

    def rng_next_u64(state):
        state = (state + _GOLDEN) & _MASK
        return state, _mix(state)

    def rng_next_double(state):
        state, z = rng_next_u64(state)
        return state, (z >> 11) * (1.0 / 9007199254740992.0)
