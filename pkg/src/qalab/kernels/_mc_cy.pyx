# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Monte-Carlo sampling kernel (hot loop of the ensemble sampler).

Mirrors ``_mc_py`` exactly: splitmix64 per-trial seeding, a per-context
64-bit draw, uniform double in [0, 1), and first-cumulative-above selection.
"""

import numpy as np


cdef unsigned long long GOLDEN = 0x9E3779B97F4A7C15ULL
cdef double UNIT = 1.0 / 9007199254740992.0


cdef inline unsigned long long _mix(unsigned long long z) nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline Py_ssize_t _select(const double[::1] cumweights, double u) nogil:
    cdef Py_ssize_t k = 0
    cdef Py_ssize_t last = cumweights.shape[0] - 1
    while k < last and cumweights[k] <= u:
        k += 1
    return k


def sample_indices(cumweights, unsigned long long master_seed,
                   unsigned long long ctx_key, long long start, long long stop):
    """Outcome index per trial in ``[start, stop)``; int64 array."""
    cdef const double[::1] cw = np.ascontiguousarray(cumweights, dtype=np.float64)
    out = np.empty(stop - start, dtype=np.int64)
    cdef long long[::1] view = out
    cdef long long i
    cdef unsigned long long s, r
    cdef double u
    with nogil:
        for i in range(start, stop):
            s = _mix(master_seed + (<unsigned long long> (i + 1)) * GOLDEN)
            r = _mix((s ^ ctx_key) + GOLDEN)
            u = <double> (r >> 11) * UNIT
            view[i - start] = <long long> _select(cw, u)
    return out


def sample_counts(cumweights, unsigned long long master_seed,
                  unsigned long long ctx_key, long long start, long long stop):
    """Histogram of outcome indices over trials ``[start, stop)``; int64[d]."""
    cdef const double[::1] cw = np.ascontiguousarray(cumweights, dtype=np.float64)
    counts = np.zeros(cw.shape[0], dtype=np.int64)
    cdef long long[::1] view = counts
    cdef long long i
    cdef unsigned long long s, r
    cdef double u
    with nogil:
        for i in range(start, stop):
            s = _mix(master_seed + (<unsigned long long> (i + 1)) * GOLDEN)
            r = _mix((s ^ ctx_key) + GOLDEN)
            u = <double> (r >> 11) * UNIT
            view[_select(cw, u)] += 1
    return counts
