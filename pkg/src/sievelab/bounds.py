"""Explicit error-term bounds for the weighted sieve asymptotic."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .errors import ArgumentError


@dataclass(frozen=True)
class BoundInputs:
    delta: float
    nu1: int
    nu2: int
    c: float = 2.0
    A: float = 0.0
    Aprime: float = 0.0
    Delta: float = 0.0
    B: float = 0.0
    B0: float = 0.0
    C0: float = 0.0
    log_X: float = math.inf  # terms carrying 1/log X vanish at the default

    def validate(self) -> None:
        if not 0 < self.delta < 1:
            raise ArgumentError("delta must lie in (0, 1)")
        if not 1 <= self.nu1 <= self.nu2:
            raise ArgumentError("need 1 <= nu1 <= nu2")
        if self.c < 2:
            raise ArgumentError("c must be >= 2")
        for name in ("A", "Aprime", "Delta", "B", "B0", "C0"):
            if getattr(self, name) < 0:
                raise ArgumentError(f"{name} must be >= 0")
        if not self.log_X > 0:
            raise ArgumentError("log_X must be positive")


@dataclass(frozen=True)
class BoundOutputs:
    rho_bound: float
    rho_bound_final: float
    theta_bound: float
    theta_bound_simplified: float
    rho_tilde_bound: float
    theta1_bound: float
    theta2_bound: float
    eta: float

    def as_dict(self) -> dict:
        return asdict(self)


def _inv_log(log_X: float) -> float:
    return 0.0 if math.isinf(log_X) else 1.0 / log_X


def _scaled_exp4(scale: float, delta: float) -> float:
    """scale·4^{1/δ}; exactly 0 when scale is 0, inf past the float range."""
    if scale == 0:
        return 0.0
    try:
        return scale * 4.0 ** (1.0 / delta)
    except OverflowError:
        return math.inf


def rho_core(p: BoundInputs) -> float:
    d, nu2 = p.delta, p.nu2
    inner = p.A * p.c**2 + (p.C0 * math.e * d ** (3 * nu2) + _scaled_exp4(p.Delta, d)) * (p.c / d) ** (2 * nu2)
    return (149.0 * nu2) ** (p.nu1 + nu2) * inner


def rho_tilde(p: BoundInputs) -> float:
    d, nu1, nu2 = p.delta, p.nu1, p.nu2
    return 2.0 * (24.0 * nu2) ** nu2 * p.B0 * (3.0 * nu2**2 * math.log(1.0 / d)) ** (nu1 + 2 * nu2) * d**nu1


def evaluate_bounds(p: BoundInputs) -> BoundOutputs:
    p.validate()
    d, nu1, nu2, c = p.delta, p.nu1, p.nu2, p.c
    il = _inv_log(p.log_X)
    growth = 1.0 + math.exp(c * p.Delta)
    core = rho_core(p)
    rt = rho_tilde(p)
    middle = 2.0 * p.B * il * c**2 * growth * (1.0 + p.C0) * (4.0 * d) ** nu2 * nu2**nu1
    simplified = (
        2.0 * 648.0**nu2 * float(nu2) ** (2 * nu1 + 5 * nu2) * (p.B * il + p.B0)
        * d**nu1 * math.log(1.0 / d) ** (nu1 + 2 * nu2) + p.Aprime
    )
    return BoundOutputs(
        rho_bound=2.0 * core,
        rho_bound_final=1.5 * core,
        theta_bound=rt + middle + p.Aprime,
        theta_bound_simplified=simplified,
        rho_tilde_bound=rt,
        theta1_bound=4.0 * p.B * il * c**3 * growth * (1.0 + p.C0) * (4.0 * d) ** nu1 * float(nu1) ** nu2,
        theta2_bound=5.0 * c**2 * math.sqrt(nu1 + nu2) * p.Aprime * il,
        eta=3.0 * max(nu1, nu2) * d * math.log(1.0 / d),
    )


@dataclass(frozen=True)
class DeltaChoice:
    epsilon: float
    nu: int
    delta_max: float
    log_X0: float
    log_delta_max: float

    @property
    def X0(self) -> float:
        return math.exp(self.log_X0) if self.log_X0 < 709.0 else math.inf


def delta_for_epsilon(epsilon: float, nu: int) -> DeltaChoice:
    """Largest admissible δ = ε²/(ν+2)^{10(ν+2)} and log X0 = 10000/δ."""
    if not 0 < epsilon < 1:
        raise ArgumentError("epsilon must lie in (0, 1)")
    if nu < 0:
        raise ArgumentError("nu must be >= 0")
    k = nu + 2
    log_delta = 2.0 * math.log(epsilon) - 10.0 * k * math.log(k)
    denom = k ** (10 * k)
    delta = epsilon**2 / float(denom) if denom < 10**300 else math.exp(log_delta)  # may underflow to 0
    log_X0 = 10000.0 / delta if delta > 0 else math.inf
    return DeltaChoice(epsilon, nu, delta, log_X0, log_delta)


def delta_condition(delta: float, nu: int) -> float:
    """(ν+2)^{5(ν+2)} δ^{1/2}, which must stay below ε."""
    k = nu + 2
    return math.exp(5.0 * k * math.log(k) + 0.5 * math.log(delta))
