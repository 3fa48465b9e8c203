"""Bernstein basis, the binomial weights f_{ν1,ν2}, and smooth plateau/peak weights.

The smooth step F_m(x) = (1/a_m)∫_0^x (4t(1-t))^m dt is the regularized
incomplete beta function I_x(m+1, m+1), evaluated with ``scipy.special.betainc``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy.special import betainc, betaln, gammaln, xlog1py, xlogy

from .errors import ArgumentError

DEFAULT_SMOOTHNESS = 10
GRID_POINTS = 10_001


def _check_unit(x):
    arr = np.asarray(x, dtype=np.float64)
    if np.any(arr < 0) or np.any(arr > 1) or np.any(np.isnan(arr)):
        raise ArgumentError("x must lie in [0, 1]")
    return arr


def bernstein_basis(k: int, m: int, x):
    """b_{k,m}(x) = C(m,k) x^k (1-x)^{m-k}; evaluated in log space when m > 60."""
    if not 0 <= k <= m:
        raise ArgumentError(f"need 0 <= k <= m, got k={k}, m={m}")
    x = _check_unit(x)
    if m <= 60:
        out = math.comb(m, k) * x**k * (1.0 - x) ** (m - k)
    else:
        # binom.pmf raises inside Boost for subnormal x, so assemble the log-pmf directly
        log_c = gammaln(m + 1) - gammaln(k + 1) - gammaln(m - k + 1)
        out = np.exp(log_c + xlogy(k, x) + xlog1py(m - k, -x))
    return out if np.ndim(out) else float(out)


def bernstein_matrix(m: int, x) -> np.ndarray:
    """All b_{k,m}(x), shape (len(x), m+1)."""
    x = np.atleast_1d(_check_unit(x))
    return np.stack([np.atleast_1d(bernstein_basis(k, m, x)) for k in range(m + 1)], axis=1)


def f_weight(nu1: int, nu2: int, x):
    """(ν1+ν2-1)·C(ν1+ν2-2, ν1-1)·x^{ν1-1}(1-x)^{ν2-1}."""
    if nu1 < 1 or nu2 < 1:
        raise ArgumentError("nu1, nu2 must be >= 1")
    x = _check_unit(x)
    out = (nu1 + nu2 - 1) * math.comb(nu1 + nu2 - 2, nu1 - 1) * x ** (nu1 - 1) * (1.0 - x) ** (nu2 - 1)
    return out if np.ndim(out) else float(out)


def bernstein_approx(F: Callable, m: int, x):
    """B_m(F; x) = Σ_k F(k/m) b_{k,m}(x)."""
    if m < 1:
        raise ArgumentError("m must be >= 1")
    nodes = np.array([float(F(k / m)) for k in range(m + 1)])
    scalar = np.ndim(x) == 0
    out = bernstein_matrix(m, x) @ nodes
    return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# smooth step


def smooth_step_norm(m: int) -> float:
    """a_m = ∫_0^1 (4t(1-t))^m dt = 4^m B(m+1, m+1)."""
    return math.exp(m * math.log(4.0) + betaln(m + 1, m + 1))


def smooth_step_norm_series(m: int) -> float:
    """a_m from the alternating binomial series, summed in exact rationals.

    In floating point this series cancels catastrophically (wrong by m = 20);
    it serves only as a cross-check of ``smooth_step_norm``.
    """
    s = sum((Fraction((-1) ** k * math.comb(m, k), k + m + 1) for k in range(m + 1)), Fraction(0))
    return float(4**m * s)


def smooth_step(m: int, x):
    """F_m(x), clamped to 0 below 0 and 1 above 1."""
    x = np.clip(np.asarray(x, dtype=np.float64), 0.0, 1.0)
    out = betainc(m + 1, m + 1, x)
    return out if np.ndim(out) else float(out)


def smooth_step_derivative(m: int, x):
    x = np.clip(np.asarray(x, dtype=np.float64), 0.0, 1.0)
    out = (4.0 * x * (1.0 - x)) ** m / smooth_step_norm(m)
    return out if np.ndim(out) else float(out)


# ---------------------------------------------------------------------------
# weight functions


@dataclass(frozen=True)
class WeightFn:
    """Evaluable weight on [0, 1].

    kind is one of ``bernstein`` (the f_{ν1,ν2} weight), ``plateau``, ``peak``,
    ``sharp`` (the normalized interval indicator) or ``discrete`` (a Bernstein
    discretization with explicit coefficients).
    """

    kind: str
    params: tuple

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        k, p = self.kind, self.params
        if k == "bernstein":
            out = f_weight(p[0], p[1], np.clip(x, 0.0, 1.0))
        elif k == "plateau":
            out = _plateau_values(x, *p)
        elif k == "peak":
            out = _peak_values(x, *p)
        elif k == "sharp":
            beta, gamma = p
            out = np.where((x >= beta) & (x <= gamma), 1.0 / (gamma - beta), 0.0)
        elif k == "discrete":
            coeffs = np.asarray(p)
            out = bernstein_matrix(len(coeffs) - 1, np.clip(np.atleast_1d(x), 0.0, 1.0)) @ coeffs
            out = out.reshape(x.shape)
        else:
            raise ArgumentError(f"unknown weight kind {k!r}")
        return out if np.ndim(out) else float(out)

    def describe(self) -> str:
        if self.kind == "discrete":
            return f"discrete(n={len(self.params)})"
        return f"{self.kind}({','.join(repr(v) for v in self.params)})"


def plateau_area(beta: float, gamma: float, eps: float) -> float:
    """∫ of the unnormalized plateau: each smooth edge contributes eps/2 less than a box."""
    return gamma - beta - eps


def _plateau_raw(x, beta, gamma, eps, m):
    rise = smooth_step(m, (x - beta) / eps)
    fall = smooth_step(m, (gamma - x) / eps)
    return np.where(
        (x <= beta) | (x >= gamma),
        0.0,
        np.where(x < beta + eps, rise, np.where(x > gamma - eps, fall, 1.0)),
    )


def _plateau_values(x, beta, gamma, eps, m):
    return _plateau_raw(x, beta, gamma, eps, m) / plateau_area(beta, gamma, eps)


def _peak_values(x, point, beta, gamma, eps, m):
    up = smooth_step(m, (x - point + eps) / eps)
    down = smooth_step(m, (point + eps - x) / eps)
    val = np.where(x <= point, up, down)
    val = np.where((x < point - eps) | (x > point + eps), 0.0, val)
    return val / plateau_area(beta, gamma, eps)


def _check_plateau(beta, gamma, eps, m):
    if not 0 <= beta < gamma <= 1:
        raise ArgumentError("need 0 <= beta < gamma <= 1")
    if not 0 < eps < (gamma - beta) / 2:
        raise ArgumentError("need 0 < eps < (gamma - beta)/2")
    if m < 1:
        raise ArgumentError("smoothness m must be >= 1")


def plateau(beta: float, gamma: float, eps: float, m: int = DEFAULT_SMOOTHNESS) -> WeightFn:
    _check_plateau(beta, gamma, eps, m)
    return WeightFn("plateau", (beta, gamma, eps, m))


def peaks(beta: float, gamma: float, eps: float, m: int = DEFAULT_SMOOTHNESS) -> tuple[WeightFn, WeightFn]:
    _check_plateau(beta, gamma, eps, m)
    return (
        WeightFn("peak", (beta, beta, gamma, eps, m)),
        WeightFn("peak", (gamma, beta, gamma, eps, m)),
    )


def sharp_indicator(beta: float, gamma: float) -> WeightFn:
    if not 0 <= beta < gamma <= 1:
        raise ArgumentError("need 0 <= beta < gamma <= 1")
    return WeightFn("sharp", (beta, gamma))


def f_weight_fn(nu1: int, nu2: int) -> WeightFn:
    if nu1 < 1 or nu2 < 1:
        raise ArgumentError("nu1, nu2 must be >= 1")
    return WeightFn("bernstein", (nu1, nu2))


@dataclass(frozen=True)
class Discretization:
    alpha: tuple[float, ...]
    total: float
    weight: WeightFn


def discretize_F(F: Callable, nu_prime: int) -> Discretization:
    """α_j = F(j/ν')/(ν'+1), j = 0..ν'; then Σ_j (ν'+1) α_j b_{j,ν'} = B_{ν'}(F)."""
    if nu_prime < 1:
        raise ArgumentError("nu_prime must be >= 1")
    alpha = tuple(float(F(j / nu_prime)) / (nu_prime + 1) for j in range(nu_prime + 1))
    coeffs = tuple(a * (nu_prime + 1) for a in alpha)
    return Discretization(alpha, math.fsum(alpha), WeightFn("discrete", coeffs))


def grid(points: int = GRID_POINTS) -> np.ndarray:
    return np.linspace(0.0, 1.0, points)


def sup_error(F: Callable, m: int, points: int = GRID_POINTS) -> float:
    xs = grid(points)
    return float(np.max(np.abs(bernstein_approx(F, m, xs) - np.asarray(F(xs)))))


def almost_indicator(beta: float, gamma: float, eps: float) -> Callable:
    """1/𝒜 on [β, γ] and 0 elsewhere, with 𝒜 the plateau area."""
    height = 1.0 / plateau_area(beta, gamma, eps)

    def ind(x):
        x = np.asarray(x, dtype=np.float64)
        return np.where((x >= beta) & (x <= gamma), height, 0.0)

    return ind
