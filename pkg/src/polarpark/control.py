"""Feedback laws for polar parking.

Two stabilizing families built from the CLF's Lie derivatives
(nu1, nu2) and a penalty pair (eta1, eta2) with gains eps1, eps2 > 0:

optimal (minimizes the matching trajectory cost; sgn(0) = 0)
    v     = -rho * eps1 * (eta1')^{-1}(eps1*|nu1|) * sgn(nu1)
    omega = -eps2 * (eta2')^{-1}(eps2*|nu2|) * sgn(nu2)

continuous (continuous in (nu1, nu2), same stabilization guarantee)
    v     = -rho * eps1 * [lf1(eps1*|nu1|) / (eps1*|nu1|)] * sgn(nu1)
    omega = -eps2 * [lf2(eps2*|nu2|) / (eps2*|nu2|)] * sgn(nu2)

Gains may be constants or state functions.  For the bounded penalties the
schedules eps1 = (2/pi)*v_bar/(sigma+rho), eps2 = 2*omega_bar/pi (LogCosine)
and eps1 = v_bar/(sigma+rho), eps2 = omega_bar (RelayApprox) keep |v| < v_bar
and |omega| < omega_bar pointwise.

The adaptive controller handles unknown positive input coefficients b1, b2:
v = -eps1_hat*rho*nu1, omega = -eps2_hat*nu2 with the online estimates
driven by nonnegative update laws; no projection or clamping is applied, and
the scheme tolerates estimates that start at zero or with the wrong sign.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

from scipy.optimize import brentq

from .clf import _nu, _value, alpha1, alpha2
from .model import ControlInput, PolarState, SlipParams
from .penalty import LogCosine, PenaltyFunction, Quadratic, RelayApprox

GainLike = Union[float, Callable[[PolarState], float]]


def _sgn(x: float) -> float:
    if x > 0.0:
        return 1.0
    if x < 0.0:
        return -1.0
    return 0.0


@dataclass(frozen=True)
class Saturation:
    """Control bounds v_bar, omega_bar with the schedule offset sigma > 0."""

    v_bar: float
    omega_bar: float
    sigma: float

    def __post_init__(self):
        if not (self.v_bar > 0.0 and self.omega_bar > 0.0):
            raise ValueError("saturation bounds must be positive")
        if not self.sigma > 0.0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")


@dataclass(frozen=True)
class ControllerConfig:
    """Penalty choice per channel, gain functions, variant, optional saturation.

    ``eps1``/``eps2`` accept constants or callables of the state.  When
    ``saturation`` is set, the bounded-penalty schedules take precedence for
    LogCosine/RelayApprox channels (constants are then required for any
    other penalty).  ``variant`` selects "optimal" or "continuous";
    continuous is the default for simulation, optimal for cost evaluation.
    """

    penalty1: PenaltyFunction
    penalty2: PenaltyFunction
    eps1: GainLike = 1.0
    eps2: GainLike = 1.0
    variant: str = "continuous"
    saturation: Saturation | None = None

    def __post_init__(self):
        if self.variant not in ("optimal", "continuous"):
            raise ValueError(f"variant must be 'optimal' or 'continuous', got {self.variant!r}")
        for label, g in (("eps1", self.eps1), ("eps2", self.eps2)):
            if not callable(g) and not float(g) > 0.0:
                raise ValueError(f"{label} must be positive, got {g}")

    def gains(self, xi: PolarState) -> tuple[float, float]:
        """Resolve (eps1, eps2) at xi, honoring the saturation schedule."""
        if self.saturation is not None:
            return epsilon_schedule(xi.rho, self)
        e1 = self.eps1(xi) if callable(self.eps1) else float(self.eps1)
        e2 = self.eps2(xi) if callable(self.eps2) else float(self.eps2)
        if not (e1 > 0.0 and e2 > 0.0):
            raise ValueError(f"gain functions must stay positive, got ({e1}, {e2})")
        return e1, e2

    def feedback(self, xi: PolarState) -> ControlInput:
        if self.variant == "optimal":
            return optimal_feedback(xi, self)
        return continuous_feedback(xi, self)


def epsilon_schedule(rho: float, cfg: ControllerConfig) -> tuple[float, float]:
    """Saturation-respecting gains (eps1, eps2) at distance rho.

    LogCosine channels use eps1 = (2/pi)*v_bar/(sigma+rho) and
    eps2 = 2*omega_bar/pi; RelayApprox channels use eps1 = v_bar/(sigma+rho)
    and eps2 = omega_bar.  Channels with any other penalty fall back to the
    configured constant gains.
    """
    sat = cfg.saturation
    if sat is None:
        raise ValueError("epsilon_schedule requires a saturation config")
    if rho <= 0.0:
        raise ValueError(f"rho must be positive, got {rho}")

    if isinstance(cfg.penalty1, LogCosine):
        e1 = (2.0 / math.pi) * sat.v_bar / (sat.sigma + rho)
    elif isinstance(cfg.penalty1, RelayApprox):
        e1 = sat.v_bar / (sat.sigma + rho)
    else:
        if callable(cfg.eps1):
            raise ValueError("saturated configs require constant gains for unbounded penalties")
        e1 = float(cfg.eps1)

    if isinstance(cfg.penalty2, LogCosine):
        e2 = 2.0 * sat.omega_bar / math.pi
    elif isinstance(cfg.penalty2, RelayApprox):
        e2 = sat.omega_bar
    else:
        if callable(cfg.eps2):
            raise ValueError("saturated configs require constant gains for unbounded penalties")
        e2 = float(cfg.eps2)
    return e1, e2


def optimal_feedback(xi: PolarState, cfg: ControllerConfig) -> ControlInput:
    """Cost-minimizing feedback; zero exactly where (nu1, nu2) = 0."""
    nu1, nu2 = _nu(xi.rho, xi.delta, xi.gamma)
    e1, e2 = cfg.gains(xi)
    v = -xi.rho * e1 * cfg.penalty1.inv_eta_prime(e1 * abs(nu1)) * _sgn(nu1)
    omega = -e2 * cfg.penalty2.inv_eta_prime(e2 * abs(nu2)) * _sgn(nu2)
    return ControlInput(v, omega)


def continuous_feedback(xi: PolarState, cfg: ControllerConfig, *, exact: bool = True) -> ControlInput:
    """Continuous stabilizing feedback; lf(r)/r -> 0 closes the law at nu = 0.

    ``exact=False`` permits cached-table evaluation of lf for penalties
    without a closed form (simulation hot path).
    """
    nu1, nu2 = _nu(xi.rho, xi.delta, xi.gamma)
    e1, e2 = cfg.gains(xi)
    ratio1 = cfg.penalty1.lf_over_r if exact else cfg.penalty1.lf_over_r_fast
    ratio2 = cfg.penalty2.lf_over_r if exact else cfg.penalty2.lf_over_r_fast
    v = -xi.rho * e1 * ratio1(e1 * abs(nu1)) * _sgn(nu1)
    omega = -e2 * ratio2(e2 * abs(nu2)) * _sgn(nu2)
    return ControlInput(v, omega)


def identity_n(v: float) -> float:
    """Default normalization n(V) = V."""
    return v


def identity_n_prime(v: float) -> float:
    return 1.0


@dataclass
class AdaptiveState:
    """Online estimates of 1/b1, 1/b2 with adaptation gains and normalization.

    ``n`` must be class K-infinity and C^1; its derivative is supplied
    explicitly rather than differentiated numerically.  Estimates are
    unconstrained reals (negative starts are allowed).
    """

    eps1_hat: float
    eps2_hat: float
    mu1: float = 0.5
    mu2: float = 0.5
    n: Callable[[float], float] = identity_n
    n_prime: Callable[[float], float] = identity_n_prime

    def __post_init__(self):
        if not (self.mu1 > 0.0 and self.mu2 > 0.0):
            raise ValueError(f"adaptation gains must be positive, got {(self.mu1, self.mu2)}")


def adaptive_feedback(xi: PolarState, a: AdaptiveState) -> ControlInput:
    """v = -eps1_hat*rho*nu1, omega = -eps2_hat*nu2; no clamping of estimates."""
    nu1, nu2 = _nu(xi.rho, xi.delta, xi.gamma)
    return ControlInput(-a.eps1_hat * xi.rho * nu1, -a.eps2_hat * nu2)


def adaptive_update(xi: PolarState, a: AdaptiveState) -> tuple[float, float]:
    """Estimate rates (deps1_hat, deps2_hat); both are always >= 0."""
    nu1, nu2 = _nu(xi.rho, xi.delta, xi.gamma)
    v = _value(xi.rho, xi.delta, xi.gamma)
    fac = a.n_prime(v) / (1.0 + a.n(v))
    return (a.mu1 * fac * nu1 * nu1, a.mu2 * fac * nu2 * nu2)


def adaptive_bound(upsilon0: float, b: SlipParams, a: AdaptiveState) -> float:
    """Transient bound on the augmented norm: a1^{-1}(M*(exp(m*a2(Y0)) - 1)).

    With c1 = min(b1/2mu1, b2/2mu2), c2 = max(...), M = max(1, c2/c1),
    m = max(c2, 1/c2), a1(r) = min(n(alpha1(r)), r^2) and
    a2(r) = max(n(alpha2(r)), r^2).  Returns inf when the exponential
    overflows (the bound is then vacuously satisfied by any finite run).
    """
    if upsilon0 < 0.0:
        raise ValueError(f"upsilon0 must be nonnegative, got {upsilon0}")
    if not (b.b1 > 0.0 and b.b2 > 0.0):
        raise ValueError("slip coefficients must be positive")
    c_a = b.b1 / (2.0 * a.mu1)
    c_b = b.b2 / (2.0 * a.mu2)
    c1, c2 = min(c_a, c_b), max(c_a, c_b)
    big_m = max(1.0, c2 / c1)
    m = max(c2, 1.0 / c2)

    a2v = max(a.n(alpha2(upsilon0)), upsilon0 * upsilon0)
    try:
        target = big_m * math.expm1(m * a2v)
    except OverflowError:
        return math.inf
    if math.isinf(target):
        return math.inf
    if target <= 0.0:
        return 0.0

    def a1_fn(r):
        return min(a.n(alpha1(r)), r * r)

    hi = 1.0
    while a1_fn(hi) < target:
        hi *= 2.0
        if hi > 1e154:
            return math.inf
    return brentq(lambda r: a1_fn(r) - target, 0.0, hi, xtol=1e-12, rtol=8.9e-16)
