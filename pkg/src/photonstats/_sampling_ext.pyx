# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled per-shot sampling kernel; same draw layout as ``_sampling_py``."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t

cnp.import_array()

cdef uint64_t GAMMA = 0x9E3779B97F4A7C15ULL
cdef double TO_UNIT = 1.0 / 9007199254740992.0


cdef inline uint64_t mix64(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline double draw(uint64_t state, uint64_t k) noexcept nogil:
    return <double>(mix64(state + (k + 1) * GAMMA) >> 11) * TO_UNIT


cdef inline int64_t search_right(const double[::1] cdf, double u) noexcept nogil:
    # first index with cdf[i] > u, clamped to the cutoff
    cdef int64_t lo = 0, hi = cdf.shape[0], mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if cdf[mid] > u:
            hi = mid
        else:
            lo = mid + 1
    if lo > cdf.shape[0] - 1:
        lo = cdf.shape[0] - 1
    return lo


def draw_counts(cdf, seed, int64_t start, int64_t stop, double efficiency=1.0, bint split=False):
    cdef const double[::1] c = np.ascontiguousarray(cdf, dtype=np.float64)
    cdef uint64_t key = mix64(<uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF))
    cdef int64_t m = stop - start
    if split:
        out = np.zeros((m, 2), dtype=np.int64)
    else:
        out = np.zeros(m, dtype=np.int64)
    cdef int64_t[:, ::1] o2
    cdef int64_t[::1] o1
    cdef int64_t i, j, n, kept, a
    cdef uint64_t state
    if split:
        o2 = out
    else:
        o1 = out
    with nogil:
        for i in range(m):
            state = mix64(key + (<uint64_t>(start + i) + 1) * GAMMA)
            n = search_right(c, draw(state, 0))
            kept = n
            if efficiency < 1.0:
                kept = 0
                for j in range(n):
                    if draw(state, <uint64_t>(j + 1)) < efficiency:
                        kept += 1
            if split:
                a = 0
                for j in range(kept):
                    if draw(state, <uint64_t>(n + 1 + j)) < 0.5:
                        a += 1
                o2[i, 0] = a
                o2[i, 1] = kept - a
            else:
                o1[i] = kept
    return out
