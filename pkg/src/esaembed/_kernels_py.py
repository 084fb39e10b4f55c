"""Pure numpy versions of the compiled norm kernels."""
import numpy as np


def row_norms(X):
    X = np.asarray(X, dtype=np.int8)
    if X.shape[1] == 0:
        zero = np.zeros(X.shape[0], dtype=np.int64)
        return zero, zero.copy()
    wide = X.astype(np.int64)
    l1 = np.abs(wide).sum(axis=1)
    sm = np.abs(np.cumsum(wide, axis=1)).max(axis=1)
    return l1, sm


def pairwise_norms(X):
    X = np.asarray(X, dtype=np.int8)
    V = X.shape[0]
    l1 = np.zeros((V, V), dtype=np.int64)
    sm = np.zeros((V, V), dtype=np.int64)
    wide = X.astype(np.int32)
    for i in range(V - 1):
        diff = wide[i + 1 :] - wide[i]
        a, s = row_norms_wide(diff)
        l1[i, i + 1 :] = a
        l1[i + 1 :, i] = a
        sm[i, i + 1 :] = s
        sm[i + 1 :, i] = s
    return l1, sm


def row_norms_wide(D):
    if D.shape[1] == 0:
        zero = np.zeros(D.shape[0], dtype=np.int64)
        return zero, zero.copy()
    l1 = np.abs(D).sum(axis=1, dtype=np.int64)
    sm = np.abs(np.cumsum(D, axis=1, dtype=np.int64)).max(axis=1)
    return l1, sm
