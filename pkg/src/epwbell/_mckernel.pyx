# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Monte Carlo kernel.

Bit-for-bit the same random construction as ``numerics.rng`` (SplitMix64
counters, Box-Muller); only libm's last-ulp behaviour may differ from numpy.
"""

import numpy as np

from libc.math cimport cos, log, sin, sqrt, M_PI
from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport free, malloc

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef double INV_2_53 = 1.0 / 9007199254740992.0
cdef double R = 0.70710678118654752440


cdef inline uint64_t mix64(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline double uniform(uint64_t key, uint64_t c) noexcept nogil:
    return (<double>(mix64(key + (c + 1) * GOLDEN) >> 11) + 0.5) * INV_2_53


cdef inline void point(uint64_t key, int64_t i, double q0, double p0, double s,
                       double* out) noexcept nogil:
    cdef uint64_t c = 4 * <uint64_t>i
    cdef double r0 = sqrt(-2.0 * log(uniform(key, c)))
    cdef double th0 = 2.0 * M_PI * uniform(key, c + 1)
    cdef double r1 = sqrt(-2.0 * log(uniform(key, c + 2)))
    cdef double th1 = 2.0 * M_PI * uniform(key, c + 3)
    cdef double q = q0 + R * (r0 * cos(th0))
    cdef double p = p0 + R * (r0 * sin(th0))
    cdef double Q = (r1 * cos(th1)) * (R / s)
    cdef double P = (r1 * sin(th1)) * (R * s)
    out[0] = R * (q + Q)
    out[1] = R * (p + P)
    out[2] = R * (Q - q)
    out[3] = R * (P - p)


def sample_block(uint64_t key, int64_t start, int64_t n, double q0, double p0, double s):
    out = np.empty((n, 4))
    cdef double[:, ::1] o = out
    cdef int64_t i
    with nogil:
        for i in range(n):
            point(key, start + i, q0, p0, s, &o[i, 0])
    return out


def sign_counts(uint64_t key, int64_t n, double q0, double p0, double s, t1, t2):
    cdef double[::1] a1 = np.ascontiguousarray(t1, dtype=np.float64)
    cdef double[::1] a2 = np.ascontiguousarray(t2, dtype=np.float64)
    cdef Py_ssize_t m = a1.shape[0]
    opp = np.zeros(m, dtype=np.int64)
    joint = np.zeros((m, m), dtype=np.int64)
    pos1 = np.zeros(m, dtype=np.int64)
    pos2 = np.zeros(m, dtype=np.int64)
    cdef int64_t[::1] vopp = opp
    cdef int64_t[:, ::1] vjoint = joint
    cdef int64_t[::1] vpos1 = pos1
    cdef int64_t[::1] vpos2 = pos2
    cdef double pt[4]
    cdef char* d = <char*>malloc(m if m > 0 else 1)
    cdef int64_t i
    cdef Py_ssize_t j, k
    cdef bint sa, sb
    if d == NULL:
        raise MemoryError()
    try:
        with nogil:
            for i in range(n):
                point(key, i, q0, p0, s, pt)
                for j in range(m):
                    sa = pt[0] + pt[1] * a1[j] >= 0.0
                    sb = pt[2] + pt[3] * a2[j] >= 0.0
                    vpos1[j] += sa
                    vpos2[j] += sb
                    d[j] = sa != sb
                for j in range(m):
                    if d[j]:
                        vopp[j] += 1
                        for k in range(m):
                            if d[k]:
                                vjoint[j, k] += 1
    finally:
        free(d)
    return opp, joint, pos1, pos2
