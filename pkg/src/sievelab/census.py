"""Twin sums over prime powers and their Hardy–Littlewood style main terms.

T0 = Σ_{n<=X} Λ(n)Λ(n+2)
T1 = Σ_{n<=X} Λ(n+2) Σ_{d1 d2 = n} Λ(d1)Λ(d2) W(log d1 / log n) / log n

Every sum is taken over the sparse prime-power table.  The pair sum is produced
by a numba kernel over fixed blocks of d1; blocks are concatenated in ascending
order and all reductions use ``math.fsum`` (exactly rounded), so results do not
depend on the thread count.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable

import numpy as np
from numba import njit

from .arith import DEFAULT_SEGMENT_SIZE, PrimePowerTable, prime_power_table, primes_up_to
from .errors import ArgumentError

TWIN_CUTOFF = 10_000_000
WINDOW_TOL = 1e-12
PAIR_BLOCKS = 64
EVAL_CHUNK = 1 << 16


class Variant(str, Enum):
    VONMANGOLDT = "vonmangoldt"
    PRIMES_ONLY = "primes_only"

    @classmethod
    def parse(cls, s: "str | Variant") -> "Variant":
        if isinstance(s, Variant):
            return s
        key = s.replace("-", "_").lower()
        for v in cls:
            if v.value == key:
                return v
        raise ArgumentError(f"unknown variant {s!r}")


# ---------------------------------------------------------------------------
# constants and reference integrals


@dataclass(frozen=True)
class TwinConstant:
    value: float
    prime_cutoff: int
    tail_bound: float


def _log_twin_factors(primes: np.ndarray) -> np.ndarray:
    q = primes.astype(np.float64) - 1.0
    return np.log1p(-1.0 / (q * q))


@lru_cache(maxsize=8)
def twin_constant(prime_cutoff: int = TWIN_CUTOFF) -> TwinConstant:
    """Π_{3<=p<=cutoff} p(p-2)/(p-1)^2 with a bound on the omitted tail.

    The tail factor is at least exp(-1.01 Σ_{n>cutoff} 1/(n-1)^2) >= exp(-1.01/(cutoff-1)),
    so |true - value| <= value * 1.01/(cutoff-1).
    """
    if prime_cutoff < 1000:
        raise ArgumentError("prime cutoff must be >= 1000")
    primes = primes_up_to(prime_cutoff)
    value = math.exp(math.fsum(_log_twin_factors(primes[primes >= 3])))
    return TwinConstant(value, prime_cutoff, value * 1.01 / (prime_cutoff - 1))


def v_ratio(z: int) -> float:
    """Π_{3<=p<=z} p(p-2)/(p-1)^2."""
    if z < 3:
        raise ArgumentError("z must be >= 3")
    primes = primes_up_to(z)
    return math.exp(math.fsum(_log_twin_factors(primes[primes >= 3])))


def f_kappa(kappa: int, X: float) -> float:
    """∫_1^X log^{κ-1} t dt in closed form."""
    if kappa < 1 or X < 1:
        raise ArgumentError("need kappa >= 1 and X >= 1")
    L = math.log(X)
    fk = math.factorial(kappa - 1)
    terms = [X * (-1) ** (k - 1) * (fk // math.factorial(kappa - k)) * L ** (kappa - k) for k in range(1, kappa + 1)]
    terms.append((-1) ** kappa * fk)
    return math.fsum(terms)


# ---------------------------------------------------------------------------
# kernels


@njit(cache=True, nogil=True)
def _lookup_logp(tab_n, tab_logp, m):
    i = np.searchsorted(tab_n, m)
    return tab_logp[i]


@njit(cache=True, nogil=True)
def _pair_pass(lo, hi, X, tab_n, tab_h, tab_logp, emap, primes_only, fill,
               out_ld1, out_ld2, out_lm, out_lam1, out_lam2, out_next):
    """Ordered pairs (d1, d2) of prime powers with m = d1*d2 <= X and m+2 a prime power."""
    count = 0
    for i in range(lo, hi):
        d1 = tab_n[i]
        if 2 * d1 > X:
            break
        if primes_only and tab_h[i] != 1:
            continue
        for j in range(len(tab_n)):
            d2 = tab_n[j]
            m = d1 * d2
            if m > X:
                break
            e = emap[m + 2]
            if e == 0:
                continue
            if primes_only and (e != 1 or tab_h[j] != 1):
                continue
            if fill:
                out_ld1[count] = math.log(d1)
                out_ld2[count] = math.log(d2)
                out_lm[count] = math.log(m)
                out_lam1[count] = tab_logp[i]
                out_lam2[count] = tab_logp[j]
                out_next[count] = _lookup_logp(tab_n, tab_logp, m + 2)
            count += 1
    return count


@dataclass(frozen=True)
class PairData:
    """Per-pair quantities for the convolution sum (arrays aligned, block order)."""

    log_d1: np.ndarray
    log_d2: np.ndarray
    log_n: np.ndarray
    lam_d1: np.ndarray
    lam_d2: np.ndarray
    lam_next: np.ndarray

    def __len__(self) -> int:
        return len(self.log_n)

    @property
    def x(self) -> np.ndarray:
        return self.log_d1 / self.log_n

    @property
    def base_weight(self) -> np.ndarray:
        return self.lam_d1 * self.lam_d2 * self.lam_next / self.log_n


def resolve_threads(threads: int | None) -> int:
    if threads is None:
        env = os.environ.get("THREADS")
        threads = int(env) if env else 1
    if threads < 1:
        raise ArgumentError("threads must be >= 1")
    return threads


def _block_bounds(n_d1: int, blocks: int) -> list[tuple[int, int]]:
    edges = np.linspace(0, n_d1, blocks + 1).astype(np.int64)
    return [(int(edges[k]), int(edges[k + 1])) for k in range(blocks) if edges[k + 1] > edges[k]]


def collect_pairs(table: PrimePowerTable, X: int, primes_only: bool, threads: int = 1,
                  blocks: int = PAIR_BLOCKS) -> PairData:
    if table.limit < X + 2:
        raise ArgumentError("table must extend to X + 2")
    tab_n, tab_h, tab_logp, emap = table.n, table.h, table.logp, table.emap
    n_d1 = int(np.searchsorted(tab_n, X // 2, side="right"))
    bounds = _block_bounds(n_d1, blocks)
    empty = np.zeros(0)

    def run(b):
        lo, hi = b
        cnt = _pair_pass(lo, hi, X, tab_n, tab_h, tab_logp, emap, primes_only, False,
                         empty, empty, empty, empty, empty, empty)
        arrs = [np.empty(cnt) for _ in range(6)]
        _pair_pass(lo, hi, X, tab_n, tab_h, tab_logp, emap, primes_only, True, *arrs)
        return arrs

    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, bounds))
    else:
        parts = [run(b) for b in bounds]
    if not parts:
        return PairData(*[np.zeros(0) for _ in range(6)])
    return PairData(*[np.concatenate([p[k] for p in parts]) for k in range(6)])


def twin_terms(table: PrimePowerTable, X: int, primes_only: bool) -> np.ndarray:
    """Λ(n)Λ(n+2) for prime powers n <= X with n+2 a prime power (ascending n)."""
    k = int(np.searchsorted(table.n, X, side="right"))
    n, h, logp = table.n[:k], table.h[:k], table.logp[:k]
    e_next = table.emap[n + 2]
    mask = e_next > 0
    if primes_only:
        mask &= (h == 1) & (e_next == 1)
    idx_next = np.searchsorted(table.n, n[mask] + 2)
    return logp[mask] * table.logp[idx_next]


def weighted_fsum(values: np.ndarray, x: np.ndarray, F: Callable) -> float:
    """fsum of values * F(x), evaluating F in fixed-size chunks."""
    parts = []
    for s in range(0, len(x), EVAL_CHUNK):
        parts.append(values[s : s + EVAL_CHUNK] * np.asarray(F(x[s : s + EVAL_CHUNK]), dtype=np.float64))
    return math.fsum(np.concatenate(parts)) if parts else 0.0


def window_mask(pairs: PairData, beta: float, gamma: float, tol: float = WINDOW_TOL) -> np.ndarray:
    """β log n <= log d1 <= γ log n, closed, with a relative tolerance for exact ties."""
    slack = tol * pairs.log_n
    return (pairs.log_d1 >= beta * pairs.log_n - slack) & (pairs.log_d1 <= gamma * pairs.log_n + slack)


# ---------------------------------------------------------------------------
# reports


@dataclass
class CensusReport:
    X: int
    weight: str
    lambda_variant: str
    T0: float
    T1: float
    combined: float
    normalizer: float
    main_term: float
    ratio: float
    wall_time: float
    beta: float | None = None
    gamma: float | None = None
    t0_coefficient: float = 1.0

    @property
    def t0_ratio(self) -> float:
        return self.T0 / self.main_term

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class CensusContext:
    """Prime-power table and pair arrays for one (X, variant), reusable across weights."""

    X: int
    variant: Variant
    table: PrimePowerTable
    pairs: PairData
    t0_terms: np.ndarray
    setup_time: float

    @property
    def T0(self) -> float:
        return math.fsum(self.t0_terms)


def build_context(X: int, variant: "str | Variant" = Variant.VONMANGOLDT, threads: int | None = None,
                  segment_size: int = DEFAULT_SEGMENT_SIZE) -> CensusContext:
    if X < 2:
        raise ArgumentError("X must be >= 2")
    variant = Variant.parse(variant)
    threads = resolve_threads(threads)
    t = time.perf_counter()
    table = prime_power_table(X + 2, segment_size, threads)
    primes_only = variant is Variant.PRIMES_ONLY
    pairs = collect_pairs(table, X, primes_only, threads)
    t0 = twin_terms(table, X, primes_only)
    return CensusContext(X, variant, table, pairs, t0, time.perf_counter() - t)


def main_term(X: int, cutoff: int = TWIN_CUTOFF) -> float:
    return 2.0 * twin_constant(cutoff).value * X


def localized(ctx: CensusContext, beta: float, gamma: float) -> CensusReport:
    if not 0 <= beta < gamma <= 1:
        raise ArgumentError("need 0 <= beta < gamma <= 1")
    t = time.perf_counter()
    w = ctx.pairs.base_weight
    T1 = math.fsum(w[window_mask(ctx.pairs, beta, gamma)])
    T0 = ctx.T0
    norm = 1.0 / (gamma - beta)
    combined = T0 + norm * T1
    mt = main_term(ctx.X)
    return CensusReport(ctx.X, f"sharp({beta!r},{gamma!r})", ctx.variant.value, T0, T1, combined, norm, mt,
                        combined / mt, ctx.setup_time + time.perf_counter() - t, beta, gamma)


def census_localized(X: int, beta: float, gamma: float, variant: "str | Variant" = Variant.VONMANGOLDT,
                     threads: int | None = None, segment_size: int = DEFAULT_SEGMENT_SIZE) -> CensusReport:
    if X < 100:
        raise ArgumentError("X must be >= 100")
    if not 0 <= beta < gamma < 1:
        raise ArgumentError("need 0 <= beta < gamma < 1")
    return localized(build_context(X, variant, threads, segment_size), beta, gamma)


def weighted(ctx: CensusContext, F: Callable, t0_coefficient: float = 1.0, label: str | None = None) -> CensusReport:
    t = time.perf_counter()
    T1 = weighted_fsum(ctx.pairs.base_weight, ctx.pairs.x, F)
    T0 = ctx.T0
    combined = t0_coefficient * T0 + T1
    mt = main_term(ctx.X)
    if label is None:
        label = F.describe() if hasattr(F, "describe") else getattr(F, "__name__", "custom")
    return CensusReport(ctx.X, label, ctx.variant.value, T0, T1, combined, 1.0, mt, combined / mt,
                        ctx.setup_time + time.perf_counter() - t, t0_coefficient=t0_coefficient)


def census_weighted(X: int, F: Callable, variant: "str | Variant" = Variant.VONMANGOLDT,
                    t0_coefficient: float = 1.0, threads: int | None = None) -> CensusReport:
    """T0·c + Σ Λ(n+2) Σ Λ(d1)Λ(d2) F(log d1/log n)/log n, with c = 1 unless a
    discretized weight supplies Σα as the coefficient of T0."""
    return weighted(build_context(X, variant, threads), F, t0_coefficient)


@dataclass(frozen=True)
class SumComparison:
    sum: float
    main: float
    ratio: float


def weighted_lambda_census(nu1: int, nu2: int, X: int, threads: int | None = None,
                           ctx: CensusContext | None = None) -> SumComparison:
    """Σ Λ(n+2)Λ(n)/(ν-1)! + Σ Λ(n+2)(Λ^(ν1)⋆Λ^(ν2))(n)/log^{ν-1} n, ν = ν1+ν2."""
    if not 1 <= nu1 <= nu2 <= 4:
        raise ArgumentError("need 1 <= nu1 <= nu2 <= 4")
    if ctx is None:
        ctx = build_context(X, Variant.VONMANGOLDT, threads)
    nu = nu1 + nu2
    p = ctx.pairs
    terms = (
        p.lam_d1 * p.log_d1 ** (nu1 - 1) / math.factorial(nu1 - 1)
        * p.lam_d2 * p.log_d2 ** (nu2 - 1) / math.factorial(nu2 - 1)
        * p.lam_next / p.log_n ** (nu - 1)
    )
    total = math.fsum([ctx.T0 / math.factorial(nu - 1), math.fsum(terms)])
    main = main_term(ctx.X) / math.factorial(nu - 1)
    return SumComparison(total, main, total / main)


def reference_sum(nu1: int, nu2: int, X: int) -> SumComparison:
    """Σ_{n<=X} Λ^(ν1+ν2)(n) + Σ_{d1 d2 <= X} Λ^(ν1)(d1)Λ^(ν2)(d2) against 2ℱ_ν(X)/(ν-1)!."""
    if nu1 < 1 or nu2 < 1:
        raise ArgumentError("nu1, nu2 must be >= 1")
    nu = nu1 + nu2
    main = 2.0 * f_kappa(nu, X) / math.factorial(nu - 1) if X >= 1 else 0.0
    if X < 2:
        return SumComparison(0.0, main, float("nan"))
    tab = prime_power_table(X)
    logn = tab.h * tab.logp

    def lam(k):
        return tab.logp * logn ** (k - 1) / math.factorial(k - 1)

    single = math.fsum(lam(nu))
    l1, l2 = lam(nu1), lam(nu2)
    prefix2 = np.concatenate([[0.0], np.cumsum(l2)])
    cut = np.searchsorted(tab.n, X // tab.n, side="right")
    pair = math.fsum(l1 * prefix2[cut])
    lhs = single + pair
    return SumComparison(lhs, main, lhs / main if main else float("nan"))
