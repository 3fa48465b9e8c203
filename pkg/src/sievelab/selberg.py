"""Index sets, exact coefficients and the Möbius/log-power decomposition of
Λ^(ν1+ν2) + Λ^(ν1)⋆Λ^(ν2), with exhaustive checks of the associated
coefficient sums and bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import primes_up_to, tau_r
from .convolution import convolve, lambda_k, log_product, mu_ell
from .errors import ArgumentError
from .sequences import DEFAULT_CONV_CAP

NU_CAP = 6
Rational = Fraction


@dataclass(frozen=True, order=True)
class TupleK:
    parts: tuple[int, ...]

    @property
    def length(self) -> int:
        return sum(self.parts)

    @property
    def weight(self) -> int:
        return sum(j * k for j, k in enumerate(self.parts, start=1))


@dataclass(frozen=True, order=True)
class TupleH:
    kprime: tuple[int, ...]
    kdouble: tuple[int, ...]

    @property
    def lengths(self) -> tuple[int, int]:
        return sum(self.kprime), sum(self.kdouble)

    @property
    def length(self) -> int:
        return sum(self.kprime) + sum(self.kdouble)


def weight_tuples(n: int, size: int | None = None) -> list[tuple[int, ...]]:
    """All ``size``-tuples (default ``n``) of k_j >= 0 with sum j*k_j = n, lexicographic."""
    size = n if size is None else size
    out: list[tuple[int, ...]] = []

    def rec(j: int, remaining: int, acc: list[int]):
        if j > size:
            if remaining == 0:
                out.append(tuple(acc))
            return
        for k in range(remaining // j + 1):
            acc.append(k)
            rec(j + 1, remaining - j * k, acc)
            acc.pop()

    rec(1, n, [])
    return sorted(out)


def _check_nu(nu1: int, nu2: int):
    if nu1 < 1 or nu2 < 1:
        raise ArgumentError(f"need nu1, nu2 >= 1, got ({nu1}, {nu2})")


def enumerate_K(nu1: int, nu2: int) -> list[TupleK]:
    _check_nu(nu1, nu2)
    top = max(nu1, nu2)
    return [TupleK(t) for t in weight_tuples(nu1 + nu2) if sum(t) <= top]


def enumerate_H(nu1: int, nu2: int) -> list[TupleH]:
    _check_nu(nu1, nu2)
    top = max(nu1, nu2)
    return sorted(
        TupleH(a, b)
        for a in weight_tuples(nu1)
        for b in weight_tuples(nu2)
        if sum(a) + sum(b) <= top
    )


def c_of(parts: tuple[int, ...]) -> Fraction:
    k = sum(parts)
    den = math.prod(math.factorial(x) for x in parts)
    return Fraction((-1) ** (k - 1) * math.factorial(k - 1), den)


def w_of(parts: tuple[int, ...]) -> Fraction:
    return Fraction(1, math.prod(math.factorial(j) ** k for j, k in enumerate(parts, start=1)))


def coefficients(t: TupleK | TupleH) -> tuple[Fraction, Fraction]:
    """(c, w) for a 𝕂 tuple, or (c̄, w̄) for an ℍ pair."""
    if isinstance(t, TupleK):
        return c_of(t.parts), w_of(t.parts)
    return c_of(t.kprime) * c_of(t.kdouble), w_of(t.kprime) * w_of(t.kdouble)


@dataclass(frozen=True)
class Term:
    coeff: Fraction
    ell: int
    logs: tuple[tuple[int, int], ...]  # (power j, multiplicity)


@dataclass(frozen=True)
class IdentityDecomposition:
    nu1: int
    nu2: int
    terms: tuple[Term, ...]


def _multiset(*tuples: tuple[int, ...]) -> tuple[tuple[int, int], ...]:
    counts: dict[int, int] = {}
    for t in tuples:
        for j, k in enumerate(t, start=1):
            if k:
                counts[j] = counts.get(j, 0) + k
    return tuple(sorted(counts.items()))


def decompose(nu1: int, nu2: int, cap: int = NU_CAP) -> IdentityDecomposition:
    """Terms a·μ_ℓ⋆L with Σ a·μ_ℓ⋆L = Λ^(ν1+ν2) + Λ^(ν1)⋆Λ^(ν2).

    The first block carries the factor ν1+ν2, the second ν1·ν2.
    """
    _check_nu(nu1, nu2)
    if max(nu1, nu2) > cap:
        raise ArgumentError(f"nu1, nu2 must be <= {cap}")
    terms: list[Term] = []
    for t in enumerate_K(nu1, nu2):
        c, w = coefficients(t)
        terms.append(Term((nu1 + nu2) * c * w, t.length, _multiset(t.parts)))
    for t in enumerate_H(nu1, nu2):
        c, w = coefficients(t)
        terms.append(Term(nu1 * nu2 * c * w, t.length, _multiset(t.kprime, t.kdouble)))
    return IdentityDecomposition(nu1, nu2, tuple(terms))


def identity_sides(nu1: int, nu2: int, X: int, cap: int = DEFAULT_CONV_CAP) -> tuple[np.ndarray, np.ndarray]:
    """Left and right sides of the decomposition on ``[1, X]`` (index 0 unused)."""
    if X > cap:
        raise ArgumentError(f"X must be <= {cap}")
    if X < 2:
        return np.zeros(X + 1), np.zeros(X + 1)
    lhs = lambda_k(nu1 + nu2, X).dense().values + convolve(lambda_k(nu1, X), lambda_k(nu2, X)).values
    rhs = np.zeros(X + 1)
    logs_cache = {}
    for term in decompose(nu1, nu2).terms:
        if term.logs not in logs_cache:
            logs_cache[term.logs] = log_product(term.logs, X)
        rhs += float(term.coeff) * convolve(mu_ell(term.ell, X), logs_cache[term.logs]).values
    return lhs, rhs


def verify_identity(nu1: int, nu2: int, X: int, cap: int = DEFAULT_CONV_CAP) -> float:
    lhs, rhs = identity_sides(nu1, nu2, X, cap)
    return float(np.max(np.abs(lhs - rhs))) if X >= 1 else 0.0


# ---------------------------------------------------------------------------
# coefficient sums


def abs_c_sum(n: int, k0: int) -> Fraction:
    """Σ |c(k)| over weight-n tuples of length k0."""
    return sum((abs(c_of(t)) for t in weight_tuples(n) if sum(t) == k0), Fraction(0))


def _bivariate_power(n: int) -> list[list[int]]:
    """Coefficients [a][b] of X^a Y^b in (1 + XY + ... + XY^n)^n, truncated at degree n."""
    base = [[0] * (n + 1) for _ in range(n + 1)]
    base[0][0] = 1
    for j in range(1, n + 1):
        base[1][j] = 1
    acc = [[0] * (n + 1) for _ in range(n + 1)]
    acc[0][0] = 1
    for _ in range(n):
        nxt = [[0] * (n + 1) for _ in range(n + 1)]
        for a in range(n + 1):
            for b in range(n + 1):
                if acc[a][b]:
                    for a2 in (0, 1):
                        for b2 in range(n + 1 - b):
                            if base[a2][b2] and a + a2 <= n:
                                nxt[a + a2][b + b2] += acc[a][b] * base[a2][b2]
        acc = nxt
    return acc


def gf_abs_c_sum(n: int, k0: int) -> Fraction:
    """Σ|c| via the coefficient of X^{k0} Y^n, rescaled by (k0-1)!(n-k0)!/n!."""
    coef = _bivariate_power(n)[k0][n]
    return Fraction(coef * math.factorial(k0 - 1) * math.factorial(n - k0), math.factorial(n))


def printed_abs_c_sum(n: int, k0: int) -> Fraction:
    return Fraction(math.comb(n - 1, k0 - 1), k0 * math.factorial(n - k0))


def coefficient_sum_check(nu1: int, nu2: int, k0: int) -> dict:
    _check_nu(nu1, nu2)
    if not 1 <= k0 <= max(nu1, nu2):
        raise ArgumentError(f"k0 must lie in [1, {max(nu1, nu2)}]")
    n = nu1 + nu2
    enumerated = abs_c_sum(n, k0)
    printed = printed_abs_c_sum(n, k0)
    oracle = gf_abs_c_sum(n, k0)
    return {
        "nu1": nu1,
        "nu2": nu2,
        "k0": k0,
        "enumerated": enumerated,
        "printed_form": printed,
        "gf_oracle": oracle,
        "agree": enumerated == oracle,
        "printed_agrees": enumerated == printed,
        "upper_form": Fraction(math.comb(n - 1, k0 - 1), k0),
    }


def pair_sum_split_check(nu1: int, nu2: int, k0p: int, k0pp: int) -> dict:
    """Σ|c̄| over pairs with fixed lengths (k0', k0''), against the printed closed form
    and against the product of the two single-tuple closed forms."""
    enumerated = abs_c_sum(nu1, k0p) * abs_c_sum(nu2, k0pp)
    k0, n = k0p + k0pp, nu1 + nu2
    printed = Fraction(
        math.factorial(k0p - 1) * math.factorial(k0pp - 1) * math.comb(n, k0) * math.comb(n - 1, k0 - 1),
        math.factorial(nu1) * math.factorial(nu2),
    )
    product = Fraction(math.comb(nu1 - 1, k0p - 1), k0p) * Fraction(math.comb(nu2 - 1, k0pp - 1), k0pp)
    return {
        "nu1": nu1,
        "nu2": nu2,
        "k0prime": k0p,
        "k0double": k0pp,
        "enumerated": enumerated,
        "printed_form": printed,
        "product_form": product,
        "agree": enumerated == product,
        "printed_agrees": enumerated == printed,
    }


def combinatorics_report(nu_max: int) -> list[dict]:
    rows = []
    for nu1 in range(1, nu_max + 1):
        for nu2 in range(nu1, nu_max + 1):
            for k0 in range(1, max(nu1, nu2) + 1):
                rows.append(coefficient_sum_check(nu1, nu2, k0))
    return rows


# ---------------------------------------------------------------------------
# bounds on coefficient sums


def _sums(nu1: int, nu2: int) -> dict[str, Fraction]:
    K, H = enumerate_K(nu1, nu2), enumerate_H(nu1, nu2)
    cw_K = [coefficients(t) for t in K]
    cw_H = [coefficients(t) for t in H]
    return {
        "c": sum((abs(c) for c, _ in cw_K), Fraction(0)),
        "cw": sum((abs(c * w) for c, w in cw_K), Fraction(0)),
        "hbar_coeff_sum": sum((abs(c) for c, _ in cw_H), Fraction(0)),
        "cbarwbar": sum((abs(c * w) for c, w in cw_H), Fraction(0)),
        "wmax": max([w for _, w in cw_K + cw_H]),
    }


def coefficient_bounds(nu1: int, nu2: int) -> list[dict]:
    """Exact left/right sides of the coefficient inequalities for one (ν1, ν2)."""
    lo, hi, n = min(nu1, nu2), max(nu1, nu2), nu1 + nu2
    s = _sums(nu1, nu2)
    rows = [
        ("hbar_coeff_sum", s["hbar_coeff_sum"], Fraction(6**n) * Fraction(hi, lo) ** lo),
        ("combined_coeff_sum", n * s["c"] + nu1 * nu2 * s["hbar_coeff_sum"], Fraction(8**n * hi ** (lo + 1), lo ** (lo - 1))),
        ("combined_weighted_sum", n * s["cw"] + nu1 * nu2 * s["cbarwbar"], Fraction(8**n * hi ** (lo + 2), (2 * lo) ** lo)),
        ("w_bound", s["wmax"], Fraction(1, 2**lo)),
    ]
    if nu1 == nu2:
        nu = nu1
        rows.append(("diagonal_weighted_sum", 2 * nu * s["cw"] + nu * nu * s["cbarwbar"], Fraction((nu + 2) * 2 ** (nu - 1))))
    return [
        {"check": name, "nu1": nu1, "nu2": nu2, "lhs": lhs, "rhs": rhs, "holds": lhs <= rhs}
        for name, lhs, rhs in rows
    ]


def rough_divisor_sums(r: int, z: int, N: int) -> tuple[np.ndarray, np.ndarray]:
    """Cumulative Σ' τ_r(n)/n and Σ' τ_r(n) over n <= N free of primes below z (n = 1 included)."""
    tau = tau_r(r, N).values.astype(np.float64)
    rough = np.ones(N + 1, dtype=bool)
    rough[0] = False
    for p in primes_up_to(z - 1):
        rough[p::p] = False
    t = np.where(rough, tau, 0.0)
    inv = np.zeros(N + 1)
    inv[1:] = t[1:] / np.arange(1, N + 1)
    return np.cumsum(inv), np.cumsum(t)


def rough_sum_check(r: int, z: int, N: int) -> list[dict]:
    """Both sifted-sum bounds at every N' in [z, N]; returns the worst margin of each."""
    harmonic, plain = rough_divisor_sums(r, z, N)
    Ns = np.arange(z, N + 1)
    logN, logz = np.log(Ns.astype(np.float64)), math.log(z)
    rhs1 = (1.04 * logN / logz) ** r
    rhs2 = Ns * 3.0**r * logN ** (r - 1) / logz**r
    out = []
    for name, lhs, rhs in (("rough_harmonic", harmonic[z:], rhs1), ("rough_plain", plain[z:], rhs2)):
        ratio = lhs / rhs
        i = int(np.argmax(ratio))
        out.append(
            {
                "check": name,
                "r": r,
                "z": z,
                "N_max": N,
                "worst_N": int(Ns[i]),
                "lhs": float(lhs[i]),
                "rhs": float(rhs[i]),
                "holds": bool(np.all(lhs <= rhs)),
            }
        )
    return out


def eulerian(n: int) -> list[int]:
    """Eulerian numbers A(n, 0..n-1), so that Σ_h h^n x^h = x·A_n(x)/(1-x)^{n+1}."""
    row = [1]
    for m in range(2, n + 1):
        row = [(k + 1) * (row[k] if k < len(row) else 0) + (m - k) * (row[k - 1] if k >= 1 else 0) for k in range(m)]
    return row


def power_series_check(p: int, nu: int, terms: int = 4000) -> dict:
    """Σ_{h>=1} h^{ν-1}/p^{h-1} in closed form (exact) and by direct summation,
    against (ν-1)!/(1-1/p)^ν and 2^ν (ν-1)!."""
    x = Fraction(1, p)
    if nu == 1:
        exact = 1 / (1 - x)
    else:
        poly = sum((Fraction(a) * x**k for k, a in enumerate(eulerian(nu - 1))), Fraction(0))
        exact = poly / (1 - x) ** nu
    direct = math.fsum(h ** (nu - 1) * math.pow(p, 1 - h) for h in range(1, terms))
    mid = Fraction(math.factorial(nu - 1)) / (1 - x) ** nu
    top = Fraction(2**nu * math.factorial(nu - 1))
    return {
        "check": "local_power_series",
        "p": p,
        "nu": nu,
        "lhs": exact,
        "lhs_series": direct,
        "mid": mid,
        "rhs": top,
        "holds": exact <= mid <= top,
    }


def inequality_suite(
    nu_max: int = 5,
    z_values: tuple[int, ...] = (300, 1000),
    N: int = 10**6,
    r_max: int = 4,
    primes: tuple[int, ...] = (2, 3, 5),
    nu_series: int = 8,
) -> list[dict]:
    if nu_max > 8:
        raise ArgumentError("nu_max must be <= 8")
    rows: list[dict] = []
    for nu1 in range(1, nu_max + 1):
        for nu2 in range(nu1, nu_max + 1):
            rows.extend(coefficient_bounds(nu1, nu2))
    for z in z_values:
        for r in range(1, r_max + 1):
            rows.extend(rough_sum_check(r, z, N))
    for p in primes:
        for nu in range(1, nu_series + 1):
            rows.append(power_series_check(p, nu))
    return rows
