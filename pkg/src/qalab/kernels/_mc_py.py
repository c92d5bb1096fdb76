"""Pure-python (vectorized numpy) Monte-Carlo sampling kernel.

Bit-for-bit equivalent to the compiled kernel in ``_mc_cy.pyx``: the same
splitmix64 pipeline on uint64 (wrapping) arithmetic, the same uniform-double
mapping, and the same cumulative-weight index selection.  All floating work
happens on IEEE doubles with identical operations, so counts and indices are
identical across backends.
"""

import numpy as np

_U64 = np.uint64
_GOLDEN = _U64(0x9E3779B97F4A7C15)
_MIX1 = _U64(0xBF58476D1CE4E5B9)
_MIX2 = _U64(0x94D049BB133111EB)
_UNIT = 1.0 / 9007199254740992.0

_CHUNK = 1 << 20


def _mix(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> _U64(30))) * _MIX1
    z = (z ^ (z >> _U64(27))) * _MIX2
    return z ^ (z >> _U64(31))


def _indices_chunk(cumweights, master, ctx_key, lo, hi):
    trials = np.arange(lo, hi, dtype=np.uint64)
    seeds = _mix(_U64(master) + (trials + _U64(1)) * _GOLDEN)
    draws = _mix((seeds ^ _U64(ctx_key)) + _GOLDEN)
    u = (draws >> _U64(11)).astype(np.float64) * _UNIT
    idx = np.searchsorted(cumweights, u, side="right")
    return np.minimum(idx, len(cumweights) - 1).astype(np.int64)


def sample_indices(cumweights, master_seed, ctx_key, start, stop):
    """Outcome index per trial in ``[start, stop)``; int64 array."""
    cumweights = np.ascontiguousarray(cumweights, dtype=np.float64)
    out = np.empty(stop - start, dtype=np.int64)
    for lo in range(start, stop, _CHUNK):
        hi = min(lo + _CHUNK, stop)
        out[lo - start : hi - start] = _indices_chunk(
            cumweights, master_seed, ctx_key, lo, hi
        )
    return out


def sample_counts(cumweights, master_seed, ctx_key, start, stop):
    """Histogram of outcome indices over trials ``[start, stop)``; int64[d]."""
    cumweights = np.ascontiguousarray(cumweights, dtype=np.float64)
    d = len(cumweights)
    counts = np.zeros(d, dtype=np.int64)
    for lo in range(start, stop, _CHUNK):
        hi = min(lo + _CHUNK, stop)
        idx = _indices_chunk(cumweights, master_seed, ctx_key, lo, hi)
        counts += np.bincount(idx, minlength=d)
    return counts
