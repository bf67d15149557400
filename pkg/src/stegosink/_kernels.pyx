# cython: language_level=3
"""Compiled inner loops; see ``_fallback.py`` for the reference semantics."""
from libc.stdint cimport uint8_t, int64_t

import numpy as np


def embed_frame(uint8_t[::1] samples, const uint8_t[::1] data, Py_ssize_t nbits):
    cdef Py_ssize_t i, pos
    cdef uint8_t bit
    if nbits > data.shape[0] * 8:
        raise ValueError("nbits exceeds the supplied data")
    if nbits > 0 and 3 * (nbits - 1) + (nbits - 1) % 3 >= samples.shape[0]:
        raise ValueError("frame does not fit the sample buffer")
    with nogil:
        for i in range(nbits):
            bit = (data[i >> 3] >> (7 - (i & 7))) & 1
            pos = 3 * i + i % 3
            samples[pos] = (samples[pos] & 0xFE) | bit


def extract_frame(const uint8_t[::1] samples, Py_ssize_t nbytes):
    cdef Py_ssize_t nbits = nbytes * 8
    cdef Py_ssize_t i, pos
    if nbits > 0 and 3 * (nbits - 1) + (nbits - 1) % 3 >= samples.shape[0]:
        raise ValueError("requested bits exceed the sample buffer")
    out = np.zeros(nbytes, dtype=np.uint8)
    cdef uint8_t[::1] o = out
    with nogil:
        for i in range(nbits):
            pos = 3 * i + i % 3
            o[i >> 3] |= (samples[pos] & 1) << (7 - (i & 7))
    return out.tobytes()


def sum_sq_diff(const uint8_t[::1] a, const uint8_t[::1] b):
    cdef Py_ssize_t i, n = a.shape[0]
    cdef int64_t d, acc = 0
    if b.shape[0] != n:
        raise ValueError("length mismatch")
    with nogil:
        for i in range(n):
            d = <int64_t>a[i] - <int64_t>b[i]
            acc += d * d
    return acc


def dot(const uint8_t[::1] a, const uint8_t[::1] b):
    cdef Py_ssize_t i, n = a.shape[0]
    cdef int64_t acc = 0
    if b.shape[0] != n:
        raise ValueError("length mismatch")
    with nogil:
        for i in range(n):
            acc += <int64_t>a[i] * <int64_t>b[i]
    return acc


def channel_moments(const uint8_t[::1] x, const uint8_t[::1] y):
    cdef Py_ssize_t i, c, n = x.shape[0]
    cdef int64_t xv, yv
    if y.shape[0] != n or n % 3:
        raise ValueError("expected equal-length interleaved RGB buffers")
    out = np.zeros((3, 5), dtype=np.int64)
    cdef int64_t[:, ::1] m = out
    with nogil:
        for i in range(0, n, 3):
            for c in range(3):
                xv = x[i + c]
                yv = y[i + c]
                m[c, 0] += xv
                m[c, 1] += yv
                m[c, 2] += xv * xv
                m[c, 3] += yv * yv
                m[c, 4] += xv * yv
    return out
