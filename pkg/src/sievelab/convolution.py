"""Generalized von Mangoldt functions, Möbius powers and log-power products."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .arith import mu_table, prime_power_table
from .errors import ArgumentError
from .sequences import DEFAULT_CONV_CAP, DenseSeq, SparseSeq, convolve, unit

__all__ = [
    "LambdaK",
    "convolve",
    "lambda_k",
    "mu_ell",
    "log_power",
    "log_power_product",
    "log_product",
]


@dataclass(frozen=True)
class LambdaK(SparseSeq):
    """Λ^(k) = Λ·log^{k-1}/(k-1)!, supported on prime powers."""

    k: int = 1


def lambda_k(k: int, X: int) -> LambdaK:
    if k < 1:
        raise ArgumentError(f"lambda_k needs k >= 1, got {k}")
    if X < 2:
        raise ArgumentError(f"lambda_k needs X >= 2, got {X}")
    tab = prime_power_table(X)
    logn = tab.h * tab.logp
    vals = tab.logp * logn ** (k - 1) / math.factorial(k - 1)
    return LambdaK(X, tab.n, vals, k)


@lru_cache(maxsize=32)
def _mu_ell_cached(ell: int, X: int) -> DenseSeq:
    mu = mu_table(X)
    acc = mu
    for _ in range(ell - 1):
        acc = convolve(acc, mu)
    return acc


def mu_ell(ell: int, X: int, exact: bool = False) -> DenseSeq:
    """ℓ-fold Möbius convolution, computed in int64 and cast to float unless ``exact``."""
    if ell < 1:
        raise ArgumentError(f"mu_ell needs ell >= 1, got {ell}")
    seq = _mu_ell_cached(ell, X)
    return seq if exact else seq.as_float()


def log_power(j: int, X: int, divide_factorial: bool = False) -> DenseSeq:
    v = np.zeros(X + 1)
    v[1:] = np.log(np.arange(1, X + 1, dtype=np.float64)) ** j
    if divide_factorial:
        v /= math.factorial(j)
    return DenseSeq(X, v)


def _iterated(factors: Iterable[int], X: int, divide_factorial: bool) -> DenseSeq:
    acc = unit(X, np.float64)
    cache: dict[int, DenseSeq] = {}
    for j in factors:
        if j not in cache:
            cache[j] = log_power(j, X, divide_factorial)
        acc = convolve(acc, cache[j])
    return acc


def _check_cap(X: int, cap: int):
    if X > cap:
        raise ArgumentError(f"dense convolution limited to X <= {cap}, got {X}")


def log_power_product(parts: Sequence[int], X: int, cap: int = DEFAULT_CONV_CAP) -> DenseSeq:
    """Convolution of (log^j / j!) taken ``parts[j-1]`` times for each j."""
    if any(k < 0 for k in parts):
        raise ArgumentError("tuple entries must be nonnegative")
    _check_cap(X, cap)
    factors = [j for j, k in enumerate(parts, start=1) for _ in range(k)]
    return _iterated(factors, X, divide_factorial=True)


def log_product(multiset: Sequence[tuple[int, int]], X: int, cap: int = DEFAULT_CONV_CAP) -> DenseSeq:
    """L = convolution of plain log^j factors; ``multiset`` holds (j, multiplicity) pairs."""
    _check_cap(X, cap)
    factors = [j for j, mult in multiset for _ in range(mult)]
    return _iterated(factors, X, divide_factorial=False)
