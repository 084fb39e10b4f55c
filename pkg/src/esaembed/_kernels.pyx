# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled all-pairs l1 / summing norms over rows of a dense int8 matrix."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def row_norms(const signed char[:, ::1] X):
    """Return (l1, summing) norms of every row as int64 arrays."""
    cdef Py_ssize_t V = X.shape[0], L = X.shape[1], i, t
    cdef long long acc, run, best, x
    l1 = np.zeros(V, dtype=np.int64)
    sm = np.zeros(V, dtype=np.int64)
    cdef long long[::1] l1v = l1
    cdef long long[::1] smv = sm
    for i in range(V):
        acc = 0
        run = 0
        best = 0
        for t in range(L):
            x = X[i, t]
            acc += x if x >= 0 else -x
            run += x
            if run > best:
                best = run
            elif -run > best:
                best = -run
        l1v[i] = acc
        smv[i] = best
    return l1, sm


def pairwise_norms(const signed char[:, ::1] X):
    """Return (l1, summing) matrices of ||X[i] - X[j]|| for all row pairs."""
    cdef Py_ssize_t V = X.shape[0], L = X.shape[1], i, j, t
    cdef long long acc, run, best, x
    l1 = np.zeros((V, V), dtype=np.int64)
    sm = np.zeros((V, V), dtype=np.int64)
    cdef long long[:, ::1] l1v = l1
    cdef long long[:, ::1] smv = sm
    for i in range(V):
        for j in range(i + 1, V):
            acc = 0
            run = 0
            best = 0
            for t in range(L):
                x = X[i, t] - X[j, t]
                acc += x if x >= 0 else -x
                run += x
                if run > best:
                    best = run
                elif -run > best:
                    best = -run
            l1v[i, j] = acc
            l1v[j, i] = acc
            smv[i, j] = best
            smv[j, i] = best
    return l1, sm
