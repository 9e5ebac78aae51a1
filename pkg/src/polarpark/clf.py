"""Strict control Lyapunov function for polar parking and its Lie derivatives.

V(rho, delta, gamma) = rho^2 + delta^2 + z^2   with  z = gamma + arctan(2*delta)/2.

The two directional derivatives along the scaled input fields
gbar1 = (-rho*cos(gamma), sin(gamma), sin(gamma)) and g2 = (0, 0, -1) are

    nu1 = -2*(rho^2*cos(gamma) - sin(gamma)*[delta + (1 + 1/(1+4*delta^2))*z])
    nu2 = -2*z

and vanish simultaneously only at the origin, which is what makes V strict:
every feedback in this package steers against the signs of (nu1, nu2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import PolarState


@dataclass(frozen=True)
class LieDerivatives:
    """Directional derivatives of V along gbar1 and g2, plus the shared z term."""

    nu1: float
    nu2: float
    z: float


def _value(rho: float, delta: float, gamma: float) -> float:
    z = gamma + 0.5 * math.atan(2.0 * delta)
    return rho * rho + delta * delta + z * z


def _nu(rho: float, delta: float, gamma: float) -> tuple[float, float]:
    z = gamma + 0.5 * math.atan(2.0 * delta)
    bracket = delta + (1.0 + 1.0 / (1.0 + 4.0 * delta * delta)) * z
    nu1 = -2.0 * (rho * rho * math.cos(gamma) - math.sin(gamma) * bracket)
    return nu1, -2.0 * z


def _unpack(xi) -> tuple[float, float, float]:
    try:
        return xi.rho, xi.delta, xi.gamma
    except AttributeError:
        rho, delta, gamma = xi
        return rho, delta, gamma


def clf_value(xi: PolarState | tuple[float, float, float]) -> float:
    """Evaluate V; nonnegative, zero only at the origin.

    Accepts a PolarState or a plain (rho, delta, gamma) triple; unlike the
    state type, V itself is defined on the closed half-space rho >= 0.
    """
    return _value(*_unpack(xi))


def lie_derivatives(xi: PolarState | tuple[float, float, float]) -> LieDerivatives:
    """Evaluate (nu1, nu2) = (L_gbar1 V, L_g2 V) at xi (state or triple)."""
    nu1, nu2 = _nu(*_unpack(xi))
    return LieDerivatives(nu1, nu2, -0.5 * nu2)


def alpha1(r: float) -> float:
    """Lower class-K-infinity bound: alpha1(|xi|) <= V(xi), alpha1(r) = r^2/3."""
    return r * r / 3.0


def alpha2(r: float) -> float:
    """Upper class-K-infinity bound: V(xi) <= alpha2(|xi|), alpha2(r) = 3*r^2."""
    return 3.0 * r * r
