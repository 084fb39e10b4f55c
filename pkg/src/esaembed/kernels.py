"""Norm kernels: compiled extension when available, numpy otherwise.

Set ``ESAEMBED_PURE_PYTHON=1`` to force the numpy fallback.
"""
import os

import numpy as np

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("ESAEMBED_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        _impl = _compiled
        BACKEND = "cython"


def _prepare(X):
    return np.ascontiguousarray(X, dtype=np.int8)


def row_norms(X):
    """``(l1, summing)`` norms of each row of an int8 matrix."""
    return _impl.row_norms(_prepare(X))


def pairwise_norms(X):
    """``(l1, summing)`` matrices of ``||X[i] - X[j]||`` over all row pairs."""
    return _impl.pairwise_norms(_prepare(X))
