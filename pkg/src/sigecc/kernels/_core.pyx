# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the Monte Carlo decoding and fitness hot loops.

Same contracts as `_ref.py`; argmin ties break to the lowest index via
strict less-than comparisons.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp

cnp.import_array()


def pairwise_hamming(const unsigned char[:, ::1] words):
    cdef Py_ssize_t m = words.shape[0], n = words.shape[1]
    out = np.zeros((m, m), dtype=np.int32)
    cdef int[:, ::1] o = out
    cdef Py_ssize_t i, j, t
    cdef int d
    for i in range(m):
        for j in range(i + 1, m):
            d = 0
            for t in range(n):
                d += words[i, t] != words[j, t]
            o[i, j] = d
            o[j, i] = d
    return out


def fitness_many(const unsigned char[:, :, ::1] pop,
                 const double[:, ::1] loss_table,
                 const double[::1] kernel_lut,
                 double penalty):
    cdef Py_ssize_t P = pop.shape[0], m = pop.shape[1], n = pop.shape[2]
    out = np.empty(P, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t p, i, j, t
    cdef int d
    cdef long dup
    cdef double v
    for p in range(P):
        v = 0.0
        dup = 0
        for i in range(m):
            for j in range(i + 1, m):
                d = 0
                for t in range(n):
                    d += pop[p, i, t] != pop[p, j, t]
                v += (loss_table[i, j] + loss_table[j, i]) * kernel_lut[d]
                if d == 0:
                    dup += 1
        o[p] = v + penalty * dup
    return out


def hard_decode_many(const double[:, ::1] received,
                     const unsigned char[:, ::1] words):
    cdef Py_ssize_t N = received.shape[0], n = received.shape[1]
    cdef Py_ssize_t m = words.shape[0]
    out = np.empty(N, dtype=np.int64)
    cdef long[::1] o = out
    bits_arr = np.empty(n, dtype=np.uint8)
    cdef unsigned char[::1] bits = bits_arr
    cdef Py_ssize_t r, j, t
    cdef int d, best
    cdef Py_ssize_t arg
    for r in range(N):
        for t in range(n):
            bits[t] = 1 if received[r, t] < 0.0 else 0
        best = <int>n + 1
        arg = 0
        for j in range(m):
            d = 0
            for t in range(n):
                d += bits[t] != words[j, t]
            if d < best:
                best = d
                arg = j
        o[r] = arg
    return out


cdef void _reduced_sq_row(const double[:, ::1] received, Py_ssize_t r,
                          const double[:, ::1] mod_words,
                          const double[::1] wsq, double[::1] scores) noexcept nogil:
    # ||w_j||^2 - 2 <y_r, w_j>; the dropped ||y_r||^2 cancels downstream
    cdef Py_ssize_t m = mod_words.shape[0], n = mod_words.shape[1]
    cdef Py_ssize_t j, t
    cdef double s
    for j in range(m):
        s = 0.0
        for t in range(n):
            s += received[r, t] * mod_words[j, t]
        scores[j] = wsq[j] - 2.0 * s


def soft_decode_many(const double[:, ::1] received,
                     const double[:, ::1] mod_words):
    cdef Py_ssize_t N = received.shape[0], m = mod_words.shape[0]
    out = np.empty(N, dtype=np.int64)
    cdef long[::1] o = out
    wsq_arr = np.einsum("ij,ij->i", np.asarray(mod_words), np.asarray(mod_words))
    cdef double[::1] wsq = np.ascontiguousarray(wsq_arr)
    scores_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] scores = scores_arr
    cdef Py_ssize_t r, j, arg
    cdef double best
    for r in range(N):
        _reduced_sq_row(received, r, mod_words, wsq, scores)
        best = scores[0]
        arg = 0
        for j in range(1, m):
            if scores[j] < best:
                best = scores[j]
                arg = j
        o[r] = arg
    return out


def posterior_many(const double[:, ::1] received,
                   const double[:, ::1] mod_words,
                   double sigma):
    cdef Py_ssize_t N = received.shape[0], m = mod_words.shape[0]
    out = np.empty((N, m), dtype=np.float64)
    cdef double[:, ::1] o = out
    wsq_arr = np.einsum("ij,ij->i", np.asarray(mod_words), np.asarray(mod_words))
    cdef double[::1] wsq = np.ascontiguousarray(wsq_arr)
    scores_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] scores = scores_arr
    cdef double inv = 1.0 / (2.0 * sigma * sigma)
    cdef Py_ssize_t r, j
    cdef double mx, z
    for r in range(N):
        _reduced_sq_row(received, r, mod_words, wsq, scores)
        mx = scores[0]
        for j in range(1, m):
            if scores[j] < mx:
                mx = scores[j]
        z = 0.0
        for j in range(m):
            o[r, j] = exp(-(scores[j] - mx) * inv)
            z += o[r, j]
        for j in range(m):
            o[r, j] /= z
    return out


def bayes_decode_many(const double[:, ::1] received,
                      const double[:, ::1] mod_words,
                      const double[:, ::1] loss_table,
                      double sigma):
    cdef Py_ssize_t N = received.shape[0], m = mod_words.shape[0]
    out = np.empty(N, dtype=np.int64)
    cdef long[::1] o = out
    wsq_arr = np.einsum("ij,ij->i", np.asarray(mod_words), np.asarray(mod_words))
    cdef double[::1] wsq = np.ascontiguousarray(wsq_arr)
    scores_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] scores = scores_arr
    probs_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] probs = probs_arr
    cdef double inv = 1.0 / (2.0 * sigma * sigma)
    cdef Py_ssize_t r, i, j, arg
    cdef double mx, z, e, best
    for r in range(N):
        _reduced_sq_row(received, r, mod_words, wsq, scores)
        mx = scores[0]
        for j in range(1, m):
            if scores[j] < mx:
                mx = scores[j]
        z = 0.0
        for j in range(m):
            probs[j] = exp(-(scores[j] - mx) * inv)
            z += probs[j]
        for j in range(m):
            probs[j] /= z
        best = 0.0
        arg = 0
        for j in range(m):
            e = 0.0
            for i in range(m):
                e += loss_table[j, i] * probs[i]
            if j == 0 or e < best:
                best = e
                arg = j
        o[r] = arg
    return out
