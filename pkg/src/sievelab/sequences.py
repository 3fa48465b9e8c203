"""Dense and sparse arithmetic sequences on [1, X] with Dirichlet convolution.

Dense values are stored with a leading unused slot so that ``values[n]`` is the
value at ``n``.  Integer arrays give exact arithmetic (the Möbius powers and
divisor functions); float arrays are used for log-weighted sequences.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import ArgumentError

DEFAULT_CONV_CAP = 100_000


@dataclass(frozen=True)
class DenseSeq:
    limit: int
    values: np.ndarray  # length limit + 1, values[0] unused (0)

    def __post_init__(self):
        if len(self.values) != self.limit + 1:
            raise ArgumentError("values must have length limit + 1")

    def __len__(self) -> int:
        return self.limit

    def __getitem__(self, n):
        return self.values[n]

    @property
    def exact(self) -> bool:
        return np.issubdtype(self.values.dtype, np.integer)

    def as_float(self) -> "DenseSeq":
        return DenseSeq(self.limit, self.values.astype(np.float64))

    def __add__(self, other: "DenseSeq") -> "DenseSeq":
        _check_limits(self, other)
        return DenseSeq(self.limit, self.values + other.values)

    def __sub__(self, other: "DenseSeq") -> "DenseSeq":
        _check_limits(self, other)
        return DenseSeq(self.limit, self.values - other.values)

    def scale(self, a) -> "DenseSeq":
        return DenseSeq(self.limit, self.values * a)

    def pointwise(self, other: "DenseSeq") -> "DenseSeq":
        _check_limits(self, other)
        return DenseSeq(self.limit, self.values * other.values)


@dataclass(frozen=True)
class SparseSeq:
    """Values supported on an ascending index set (e.g. prime powers)."""

    limit: int
    n: np.ndarray
    values: np.ndarray

    def dense(self) -> DenseSeq:
        out = np.zeros(self.limit + 1, dtype=self.values.dtype)
        out[self.n] = self.values
        return DenseSeq(self.limit, out)

    def __getitem__(self, m: int):
        i = int(np.searchsorted(self.n, m))
        if i < len(self.n) and self.n[i] == m:
            return self.values[i]
        return self.values.dtype.type(0)


def unit(X: int, dtype=np.int64) -> DenseSeq:
    v = np.zeros(X + 1, dtype=dtype)
    if X >= 1:
        v[1] = 1
    return DenseSeq(X, v)


def _check_limits(f, g):
    if f.limit != g.limit:
        raise ArgumentError(f"limit mismatch: {f.limit} vs {g.limit}")


@njit(cache=True)
def _conv_dense(f, g, out):
    X = len(f) - 1
    for d in range(1, X + 1):
        fd = f[d]
        if fd == 0:
            continue
        for m in range(1, X // d + 1):
            out[d * m] += fd * g[m]


@njit(cache=True)
def _conv_sparse_dense(idx, fv, g, out):
    X = len(g) - 1
    for i in range(len(idx)):
        d = idx[i]
        fd = fv[i]
        for m in range(1, X // d + 1):
            out[d * m] += fd * g[m]


@njit(cache=True)
def _conv_sparse_sparse(ia, va, ib, vb, out):
    X = len(out) - 1
    for i in range(len(ia)):
        a = ia[i]
        for j in range(len(ib)):
            n = a * ib[j]
            if n > X:
                break
            out[n] += va[i] * vb[j]


def convolve(f, g) -> DenseSeq:
    """Dirichlet convolution ``(f*g)(n) = sum_{d | n} f(d) g(n/d)`` on ``[1, X]``."""
    _check_limits(f, g)
    dtype = np.result_type(f.values.dtype, g.values.dtype)
    out = np.zeros(f.limit + 1, dtype=dtype)
    fs, gs = isinstance(f, SparseSeq), isinstance(g, SparseSeq)
    if fs and gs:
        _conv_sparse_sparse(f.n, f.values.astype(dtype), g.n, g.values.astype(dtype), out)
    elif fs:
        _conv_sparse_dense(f.n, f.values.astype(dtype), g.values.astype(dtype), out)
    elif gs:
        _conv_sparse_dense(g.n, g.values.astype(dtype), f.values.astype(dtype), out)
    else:
        _conv_dense(f.values.astype(dtype), g.values.astype(dtype), out)
    return DenseSeq(f.limit, out)
