"""Equidistribution meter: ψ(y; d, 2) against y/φ(d), summed over odd moduli,
and divisor-weighted remainder sums for the shifted von Mangoldt sequence.

Both quantities are maxima over integers 1 <= y <= X of a step function minus a
linear function.  On each flat stretch the deviation is monotone, so it suffices
to inspect y = 1, every step point, the integer just before every step, and y = X.
"""

from __future__ import annotations

import hashlib
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from numba import njit

from .arith import PrimePowerTable, phi_table, prime_power_table, tau_r
from .census import resolve_threads
from .errors import ArgumentError

MOD_BLOCKS = 64


@njit(cache=True, nogil=True)
def _class_sweep(d, a, X, tab_n, tab_logp, emap, inv_phi):
    """max over 1 <= y <= X of |ψ(y; d, a) - y·inv_phi| and the maximizing y."""
    best = inv_phi  # y = 1: ψ(1) = 0
    arg = 1
    psi = 0.0
    start = a % d
    if start == 0:
        start = d
    n = start
    while n <= X:
        h = emap[n]
        if h > 0:
            before = abs(psi - (n - 1) * inv_phi)
            if n - 1 >= 1 and before > best:
                best = before
                arg = n - 1
            psi += tab_logp[np.searchsorted(tab_n, n)]
            after = abs(psi - n * inv_phi)
            if after > best:
                best = after
                arg = n
        n += d
    last = abs(psi - X * inv_phi)
    if last > best:
        best = last
        arg = X
    return best, arg


@njit(cache=True, nogil=True)
def _sweep_block(moduli, X, tab_n, tab_logp, emap, phis, out_max, out_arg):
    for k in range(len(moduli)):
        d = moduli[k]
        out_max[k], out_arg[k] = _class_sweep(d, 2, X, tab_n, tab_logp, emap, 1.0 / phis[k])


def psi_progression(y: int, d: int, table: PrimePowerTable | None = None) -> float:
    """Σ Λ(n) over n <= y, n ≡ 2 (mod d), for odd d."""
    if d < 1 or d % 2 == 0:
        raise ArgumentError("d must be a positive odd integer")
    return psi_class(y, d, 2, table)


def psi_class(y: int, d: int, a: int, table: PrimePowerTable | None = None) -> float:
    """Σ Λ(n) over n <= y with n ≡ a (mod d); terms added in ascending n."""
    if y < 2:
        return 0.0
    if table is None:
        table = prime_power_table(y)
    k = int(np.searchsorted(table.n, y, side="right"))
    n = table.n[:k]
    total = 0.0
    for v in table.logp[:k][n % d == a % d]:
        total += v
    return total


def psi_class_exp(y: int, d: int, a: int, table: PrimePowerTable | None = None) -> int:
    """exp(ψ(y; d, a)) as an exact integer: the product of p over prime powers p^h ≡ a."""
    if y < 2:
        return 1
    if table is None:
        table = prime_power_table(y)
    k = int(np.searchsorted(table.n, y, side="right"))
    sel = table.n[:k] % d == a % d
    return math.prod(int(p) for p in table.p[:k][sel])


@dataclass
class DiscrepancyReport:
    X: int
    delta: float
    theta_exponent: float
    sum: float
    normalized: float
    digest: str
    moduli: int
    per_modulus: list[tuple[int, float, int]] | None = field(default=None, repr=False)


def normalize(total: float, X: int, theta: float) -> float:
    return total * (6.0 * math.log(X)) ** theta / X


def modulus_limit(X: int, delta: float) -> int:
    """floor(X^{1-δ}), nudged so that exact integer powers are not lost to rounding."""
    return int(math.floor(X ** (1.0 - delta) * (1.0 + 1e-12)))


def scan_moduli(X: int, moduli: np.ndarray, table: PrimePowerTable, threads: int = 1,
                blocks: int = MOD_BLOCKS) -> tuple[np.ndarray, np.ndarray]:
    phis = phi_table(int(moduli.max()))[moduli] if len(moduli) else np.zeros(0, dtype=np.int64)
    out_max = np.zeros(len(moduli))
    out_arg = np.zeros(len(moduli), dtype=np.int64)
    edges = np.linspace(0, len(moduli), blocks + 1).astype(np.int64)
    spans = [(int(edges[k]), int(edges[k + 1])) for k in range(blocks) if edges[k + 1] > edges[k]]

    def run(span):
        lo, hi = span
        _sweep_block(moduli[lo:hi], X, table.n, table.logp, table.emap, phis[lo:hi], out_max[lo:hi], out_arg[lo:hi])

    if threads > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run, spans))
    else:
        for s in spans:
            run(s)
    return out_max, out_arg


def digest_of(moduli, maxima, argmax) -> str:
    h = hashlib.sha256()
    for d, m, y in zip(moduli.tolist(), maxima.tolist(), argmax.tolist()):
        h.update(f"{d},{m!r},{y}\n".encode())
    return h.hexdigest()


def eh_scan(X: int, delta: float, theta: float = 0.0, keep_per_modulus: bool = False,
            threads: int | None = None) -> DiscrepancyReport:
    """Σ over odd d <= X^{1-δ} of max_{y<=X} |ψ(y; d, 2) - y/φ(d)|."""
    if not 0 < delta < 1:
        raise ArgumentError("delta must lie in (0, 1)")
    if X < 2:
        raise ArgumentError("X must be >= 2")
    threads = resolve_threads(threads)
    table = prime_power_table(X)
    D = modulus_limit(X, delta)
    moduli = np.arange(1, D + 1, 2, dtype=np.int64)
    maxima, argmax = scan_moduli(X, moduli, table, threads)
    total = math.fsum(maxima)
    per = list(zip(moduli.tolist(), maxima.tolist(), argmax.tolist())) if keep_per_modulus else None
    return DiscrepancyReport(X, delta, theta, total, normalize(total, X, theta),
                             digest_of(moduli, maxima, argmax), len(moduli), per)


# ---------------------------------------------------------------------------
# remainder sums


class FKind(str, Enum):
    LAMBDA_SHIFT2 = "lambda_shift2"
    UNIT = "unit"

    @classmethod
    def parse(cls, s: "str | FKind") -> "FKind":
        if isinstance(s, FKind):
            return s
        key = s.replace("-", "_").lower()
        for v in cls:
            if v.value == key:
                return v
        raise ArgumentError(f"unknown f kind {s!r}")


@njit(cache=True, nogil=True)
def _remainder_max(d, X, sigma, unit, tab_n, tab_logp, emap):
    """max over 1 <= y <= X of |Σ_{n <= y/d} f(dn) - σ·y| (f = 1 or Λ(· + 2))."""
    best = -1.0
    arg = 0
    if d > 1:  # y = 1 lies before the first multiple of d
        best = sigma
        arg = 1
    s = 0.0
    for k in range(1, X // d + 1):
        y = d * k
        before = abs(s - (y - 1) * sigma)
        if y - 1 >= 1 and before > best:
            best = before
            arg = y - 1
        if unit:
            s += 1.0
        else:
            m = y + 2
            if emap[m] > 0:
                s += tab_logp[np.searchsorted(tab_n, m)]
        after = abs(s - y * sigma)
        if after > best:
            best = after
            arg = y
    last = abs(s - X * sigma)
    if last > best:
        best = last
        arg = X
    return best, arg


@dataclass
class RemainderReport:
    X: int
    D: int
    r: int
    f_kind: str
    value: float
    per_modulus: list[tuple[int, float, int]] | None = field(default=None, repr=False)


def remainder_terms(X: int, D: int, f_kind: "str | FKind") -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(d, max_y |r_d(f, y)|, argmax) for 1 <= d <= D."""
    f_kind = FKind.parse(f_kind)
    unit = f_kind is FKind.UNIT
    table = prime_power_table(X + 2)
    ds = np.arange(1, D + 1, dtype=np.int64)
    if unit:
        sigma = 1.0 / ds
    else:
        ph = phi_table(D)[1:]
        sigma = np.where(ds % 2 == 1, 1.0 / ph, 0.0)
    maxima = np.zeros(D)
    argmax = np.zeros(D, dtype=np.int64)
    for i, d in enumerate(ds.tolist()):
        maxima[i], argmax[i] = _remainder_max(d, X, sigma[i], unit, table.n, table.logp, table.emap)
    return ds, maxima, argmax


def remainder_sum(X: int, D: int, r: int, f_kind: "str | FKind", keep_per_modulus: bool = False) -> RemainderReport:
    """Σ_{d<=D} τ_r(d) max_{y<=X} |r_d(f, y)|."""
    if not 1 <= D <= X:
        raise ArgumentError("need 1 <= D <= X")
    if not 1 <= r <= 4:
        raise ArgumentError("need 1 <= r <= 4")
    f_kind = FKind.parse(f_kind)
    ds, maxima, argmax = remainder_terms(X, D, f_kind)
    tau = tau_r(r, D).values[1:].astype(np.float64)
    value = math.fsum(tau * maxima)
    per = list(zip(ds.tolist(), maxima.tolist(), argmax.tolist())) if keep_per_modulus else None
    return RemainderReport(X, D, r, f_kind.value, value, per)
