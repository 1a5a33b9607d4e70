# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: contingency counting and k-NN class scoring.

Mirrors `featsel._kernels.fallback` exactly; see that module for the
reference semantics. Inputs must be C-contiguous with the dtypes below
(int64 for symbols/labels, float64 for coordinates).
"""

import numpy as np

from libc.math cimport INFINITY


def contingency_table(const long long[::1] x, const long long[::1] y,
                      Py_ssize_t nx, Py_ssize_t ny):
    """Joint count table of two symbol vectors, shape (nx, ny), int64."""
    cdef Py_ssize_t n = x.shape[0]
    if y.shape[0] != n:
        raise ValueError("length mismatch: %d vs %d" % (n, y.shape[0]))
    if nx < 1 or ny < 1:
        raise ValueError("cardinalities must be positive")

    counts_arr = np.zeros((nx, ny), dtype=np.int64)
    cdef long long[:, ::1] counts = counts_arr
    cdef Py_ssize_t i
    cdef long long xi, yi
    cdef int bad = 0

    with nogil:
        for i in range(n):
            xi = x[i]
            yi = y[i]
            if xi < 0 or xi >= nx or yi < 0 or yi >= ny:
                bad = 1
                break
            counts[xi, yi] += 1
    if bad:
        raise ValueError("symbol out of range for declared cardinality")
    return counts_arr


def knn_scores(const double[:, ::1] train, const long long[::1] labels,
               const double[:, ::1] query, Py_ssize_t k, Py_ssize_t n_classes):
    """Per-class vote fractions of the k nearest training rows.

    Squared Euclidean distance; ties broken by lower training index
    (first minimum wins on each of the k selection passes).
    """
    cdef Py_ssize_t nt = train.shape[0]
    cdef Py_ssize_t m = train.shape[1]
    cdef Py_ssize_t nq = query.shape[0]
    if labels.shape[0] != nt:
        raise ValueError("labels length does not match training rows")
    if query.shape[1] != m:
        raise ValueError("query dimensionality %d != training %d" % (query.shape[1], m))
    if k < 1 or k > nt:
        raise ValueError("k must be in [1, n_train]")

    cdef Py_ssize_t i
    for i in range(nt):
        if labels[i] < 0 or labels[i] >= n_classes:
            raise ValueError("label out of range")

    scores_arr = np.zeros((nq, n_classes), dtype=np.float64)
    dist_arr = np.empty(nt, dtype=np.float64)
    cdef double[:, ::1] scores = scores_arr
    cdef double[::1] dist = dist_arr
    cdef Py_ssize_t q, t, j, p, c, best
    cdef double acc, d, bestd

    with nogil:
        for q in range(nq):
            for t in range(nt):
                acc = 0.0
                for j in range(m):
                    d = query[q, j] - train[t, j]
                    acc += d * d
                dist[t] = acc
            for p in range(k):
                best = 0
                bestd = INFINITY
                for t in range(nt):
                    if dist[t] < bestd:
                        bestd = dist[t]
                        best = t
                dist[best] = INFINITY
                scores[q, labels[best]] += 1.0
            for c in range(n_classes):
                scores[q, c] /= k
    return scores_arr
