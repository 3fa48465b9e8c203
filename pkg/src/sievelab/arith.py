"""Segmented prime sieve and classical arithmetic functions.

The von Mangoldt function is kept sparse: a :class:`PrimePowerTable` lists every
prime power ``n = p**h <= X`` together with ``log p``.  A compact ``uint8``
exponent map (``h`` at ``p**h``, zero elsewhere) backs constant-time lookups in
the census kernels.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

from .errors import ArgumentError
from .sequences import DenseSeq, convolve

DEFAULT_SEGMENT_SIZE = 1 << 22
MAX_SEGMENT_SIZE = 1 << 28


def _simple_sieve(limit: int) -> np.ndarray:
    """Primes ``<= limit`` by a monolithic Eratosthenes sieve."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


@dataclass(frozen=True)
class SieveSegment:
    lo: int
    hi: int
    is_prime: np.ndarray  # bool, length hi - lo + 1

    def primes(self) -> np.ndarray:
        return np.flatnonzero(self.is_prime).astype(np.int64) + self.lo


def _mark_segment(lo: int, hi: int, base: np.ndarray) -> np.ndarray:
    flags = np.ones(hi - lo + 1, dtype=bool)
    if lo <= 1:
        flags[: 2 - lo] = False
    for p in base:
        p = int(p)
        if p * p > hi:
            break
        start = max(p * p, -(-lo // p) * p)
        flags[start - lo :: p] = False
    return flags


def sieve_range(lo: int, hi: int, max_segment: int = MAX_SEGMENT_SIZE) -> SieveSegment:
    """Mark the primes of ``[lo, hi]``."""
    if lo < 2 or hi < lo:
        raise ArgumentError(f"need 2 <= lo <= hi, got lo={lo}, hi={hi}")
    if hi - lo + 1 > max_segment:
        raise ArgumentError(f"segment length {hi - lo + 1} exceeds maximum {max_segment}")
    base = _simple_sieve(math.isqrt(hi))
    return SieveSegment(lo, hi, _mark_segment(lo, hi, base))


def _segments(limit: int, segment_size: int):
    lo = 2
    while lo <= limit:
        hi = min(limit, lo + segment_size - 1)
        yield lo, hi
        lo = hi + 1


def prime_flags(limit: int, segment_size: int = DEFAULT_SEGMENT_SIZE, threads: int = 1) -> np.ndarray:
    """Boolean primality flags for ``0..limit``, assembled segment by segment.

    Segments write disjoint slices, so the result does not depend on the
    number of worker threads or on the segment size.
    """
    if segment_size < 1 or segment_size > MAX_SEGMENT_SIZE:
        raise ArgumentError(f"segment size must be in [1, {MAX_SEGMENT_SIZE}]")
    flags = np.zeros(limit + 1, dtype=bool)
    if limit < 2:
        return flags
    base = _simple_sieve(math.isqrt(limit))

    def work(bounds):
        lo, hi = bounds
        flags[lo : hi + 1] = _mark_segment(lo, hi, base)

    segs = list(_segments(limit, segment_size))
    if threads > 1 and len(segs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, segs))
    else:
        for s in segs:
            work(s)
    return flags


def primes_up_to(limit: int, segment_size: int = DEFAULT_SEGMENT_SIZE, threads: int = 1) -> np.ndarray:
    return np.flatnonzero(prime_flags(limit, segment_size, threads)).astype(np.int64)


def exponent_map(limit: int, segment_size: int = DEFAULT_SEGMENT_SIZE, threads: int = 1) -> np.ndarray:
    """``uint8`` array ``e`` with ``e[p**h] = h`` for prime powers and 0 elsewhere."""
    emap = prime_flags(limit, segment_size, threads).view(np.uint8)
    for p in _simple_sieve(math.isqrt(limit)):
        p = int(p)
        q, h = p * p, 2
        while q <= limit:
            emap[q] = h
            q *= p
            h += 1
    return emap


@dataclass(frozen=True)
class PrimePowerTable:
    """Sparse von Mangoldt table: every prime power ``n = p**h <= limit``."""

    limit: int
    n: np.ndarray
    p: np.ndarray
    h: np.ndarray
    logp: np.ndarray
    emap: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.n)

    def entries(self):
        for i in range(len(self.n)):
            yield int(self.n[i]), int(self.p[i]), int(self.h[i]), float(self.logp[i])

    def lam(self, m: int) -> float:
        """Λ(m) for ``1 <= m <= limit``."""
        h = int(self.emap[m])
        if h == 0:
            return 0.0
        return math.log(_root(m, h))

    def lam1(self, m: int) -> float:
        """Λ₁(m): log m at primes, 0 elsewhere."""
        return math.log(m) if self.emap[m] == 1 else 0.0

    def lambda_dense(self, primes_only: bool = False) -> DenseSeq:
        vals = np.zeros(self.limit + 1)
        mask = self.h == 1 if primes_only else slice(None)
        vals[self.n[mask]] = self.logp[mask]
        return DenseSeq(self.limit, vals)

    def psi(self, y: int) -> float:
        k = int(np.searchsorted(self.n, y, side="right"))
        return math.fsum(self.logp[:k])


def _root(m: int, h: int) -> int:
    if h == 1:
        return m
    r = round(m ** (1.0 / h))
    while r**h > m:
        r -= 1
    while (r + 1) ** h <= m:
        r += 1
    return r


def table_from_map(emap: np.ndarray) -> PrimePowerTable:
    limit = len(emap) - 1
    n = np.flatnonzero(emap).astype(np.int64)
    h = emap[n].astype(np.int64)
    p = n.copy()
    for i in np.flatnonzero(h > 1):
        p[i] = _root(int(n[i]), int(h[i]))
    return PrimePowerTable(limit, n, p, h, np.log(p.astype(np.float64)), emap)


def prime_power_table(X: int, segment_size: int = DEFAULT_SEGMENT_SIZE, threads: int = 1) -> PrimePowerTable:
    if X < 2:
        raise ArgumentError(f"prime_power_table needs X >= 2, got {X}")
    return table_from_map(exponent_map(X, segment_size, threads))


@lru_cache(maxsize=4)
def cached_table(X: int) -> PrimePowerTable:
    return prime_power_table(X)


def phi(n: int) -> int:
    """Euler's totient by trial division."""
    if n < 1:
        raise ArgumentError(f"phi needs n >= 1, got {n}")
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def phi_table(X: int) -> np.ndarray:
    """φ(n) for ``0 <= n <= X`` (entry 0 unused)."""
    tab = np.arange(X + 1, dtype=np.int64)
    for p in primes_up_to(X):
        tab[p::p] -= tab[p::p] // p
    return tab


def mu_table(X: int) -> DenseSeq:
    """Möbius function on ``[1, X]`` as an exact integer sequence."""
    if X < 1:
        raise ArgumentError(f"mu_table needs X >= 1, got {X}")
    mu = np.ones(X + 1, dtype=np.int64)
    mu[0] = 0
    for p in primes_up_to(X):
        p = int(p)
        mu[p::p] *= -1
        if p * p <= X:
            mu[p * p :: p * p] = 0
    return DenseSeq(X, mu)


def ones(X: int) -> DenseSeq:
    v = np.ones(X + 1, dtype=np.int64)
    v[0] = 0
    return DenseSeq(X, v)


def tau_r(r: int, X: int) -> DenseSeq:
    """r-fold divisor function from ``r - 1`` self-convolutions of the constant 1."""
    if r < 1:
        raise ArgumentError(f"tau_r needs r >= 1, got {r}")
    one = ones(X)
    acc = one
    for _ in range(r - 1):
        acc = convolve(acc, one)
    return acc


class MultiplicativeKind(str, Enum):
    SIGMA_TWIN = "sigma_twin"
    SIGMA0_UNIT = "sigma0_unit"


@dataclass(frozen=True)
class MultiplicativeSpec:
    """Density function of a sifted sequence: twin shift ``[d odd]/φ(d)`` or unit ``1/d``."""

    kind: MultiplicativeKind

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", MultiplicativeKind(self.kind))
        except ValueError as exc:
            raise ArgumentError(f"unknown multiplicative kind {self.kind!r}") from exc

    def __call__(self, d: int) -> float:
        if self.kind is MultiplicativeKind.SIGMA_TWIN:
            return 0.0 if d % 2 == 0 else 1.0 / phi(d)
        return 1.0 / d

    def table(self, D: int) -> np.ndarray:
        out = np.zeros(D + 1)
        d = np.arange(1, D + 1)
        if self.kind is MultiplicativeKind.SIGMA_TWIN:
            ph = phi_table(D)[1:]
            out[1:] = np.where(d % 2 == 1, 1.0 / ph, 0.0)
        else:
            out[1:] = 1.0 / d
        return out
