# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled sign-vector kernels.

Sign vectors arrive as C-contiguous int8 matrices (one row per cell, entries
in {-1, 0, 1}).  ``D <= C`` in the face order iff every nonzero entry of D
agrees with C.
"""

import numpy as np


def upset_sums(const signed char[:, ::1] lower, const signed char[:, ::1] upper,
               const long long[::1] weights):
    cdef Py_ssize_t nl = lower.shape[0]
    cdef Py_ssize_t nu = upper.shape[0]
    cdef Py_ssize_t m = lower.shape[1]
    cdef Py_ssize_t i, j, k
    cdef long long acc
    cdef signed char s
    cdef bint ok
    out = np.zeros(nl, dtype=np.int64)
    cdef long long[::1] o = out
    with nogil:
        for i in range(nl):
            acc = 0
            for j in range(nu):
                if weights[j] == 0:
                    continue
                ok = True
                for k in range(m):
                    s = lower[i, k]
                    if s != 0 and s != upper[j, k]:
                        ok = False
                        break
                if ok:
                    acc += weights[j]
            o[i] = acc
    return out


def leq_matrix(const signed char[:, ::1] lower, const signed char[:, ::1] upper):
    cdef Py_ssize_t nl = lower.shape[0]
    cdef Py_ssize_t nu = upper.shape[0]
    cdef Py_ssize_t m = lower.shape[1]
    cdef Py_ssize_t i, j, k
    cdef signed char s
    cdef bint ok
    out = np.zeros((nl, nu), dtype=np.uint8)
    cdef unsigned char[:, ::1] o = out
    with nogil:
        for i in range(nl):
            for j in range(nu):
                ok = True
                for k in range(m):
                    s = lower[i, k]
                    if s != 0 and s != upper[j, k]:
                        ok = False
                        break
                o[i, j] = ok
    return out
