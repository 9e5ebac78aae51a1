"""Unicycle kinematics in Cartesian and polar parking coordinates.

The polar state (rho, delta, gamma) describes the vehicle relative to the
parking target at the origin: rho is the distance to the target, delta the
bearing of the vehicle seen from the target frame, and gamma the
line-of-sight angle minus the vehicle heading.  The conversion wraps both
angles with ``mod(. , 2*pi) - pi``.

The polar vector fields are supplied in scaled form: the forward channel
takes u1 = v / rho so that no division by rho appears in the closed loop
(the controllers produce v proportional to rho, so u1 stays finite as the
vehicle reaches the target).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi


def wrap_angle(a: float) -> float:
    """Map an angle to [-pi, pi) via mod into [0, 2*pi) then subtracting pi."""
    return (a + math.pi) % TWO_PI - math.pi


@dataclass(frozen=True)
class CartesianPose:
    """Planar pose (x, y, theta); theta in radians, unrestricted."""

    x: float
    y: float
    theta: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.theta)):
            raise ValueError(f"pose must be finite, got {(self.x, self.y, self.theta)}")


@dataclass(frozen=True)
class PolarState:
    """Polar parking state (rho, delta, gamma) with rho > 0.

    delta and gamma are unrestricted reals; the conversion from a Cartesian
    pose produces them in [-pi, pi), but closed-loop integration may leave
    that interval and no wrapping is applied to evolving states.
    """

    rho: float
    delta: float
    gamma: float

    def __post_init__(self):
        if not (self.rho > 0.0) or not math.isfinite(self.rho):
            raise ValueError(f"rho must be positive and finite, got {self.rho}")
        if not (math.isfinite(self.delta) and math.isfinite(self.gamma)):
            raise ValueError("delta and gamma must be finite")

    def norm(self) -> float:
        return math.sqrt(self.rho * self.rho + self.delta * self.delta + self.gamma * self.gamma)


@dataclass(frozen=True)
class ControlInput:
    """Forward velocity v and steering rate omega."""

    v: float
    omega: float

    def __post_init__(self):
        if not (math.isfinite(self.v) and math.isfinite(self.omega)):
            raise ValueError(f"control must be finite, got {(self.v, self.omega)}")


@dataclass(frozen=True)
class SlipParams:
    """Unknown positive input coefficients b1 (velocity) and b2 (steering)."""

    b1: float
    b2: float

    def __post_init__(self):
        if not (self.b1 > 0.0 and self.b2 > 0.0):
            raise ValueError(f"slip coefficients must be positive, got {(self.b1, self.b2)}")


def to_polar(pose: CartesianPose) -> PolarState:
    """Convert a Cartesian pose to the polar parking state.

    rho   = hypot(x, y)
    delta = mod(atan2(y, x), 2*pi) - pi
    gamma = mod(atan2(y, x) - theta, 2*pi) - pi

    Raises ValueError at (x, y) = (0, 0), where the chart is singular.
    """
    if pose.x == 0.0 and pose.y == 0.0:
        raise ValueError("polar chart is singular at (x, y) = (0, 0)")
    rho = math.hypot(pose.x, pose.y)
    phi = math.atan2(pose.y, pose.x)
    delta = phi % TWO_PI - math.pi
    gamma = (phi - pose.theta) % TWO_PI - math.pi
    return PolarState(rho, delta, gamma)


def from_polar(xi: PolarState) -> CartesianPose:
    """Reconstruct the Cartesian pose; theta is reported in [-pi, pi).

    Inverse of :func:`to_polar` up to the 2*pi equivalence of theta:
    x = -rho*cos(delta), y = -rho*sin(delta), theta = delta - gamma.
    """
    x = -xi.rho * math.cos(xi.delta)
    y = -xi.rho * math.sin(xi.delta)
    theta = wrap_angle(xi.delta - xi.gamma)
    return CartesianPose(x, y, theta)


def polar_dynamics(xi: PolarState, u1: float, omega: float) -> tuple[float, float, float]:
    """Open-loop polar vector field with scaled forward input u1 = v / rho.

    Returns (drho, ddelta, dgamma) =
    (-rho*cos(gamma)*u1, sin(gamma)*u1, sin(gamma)*u1 - omega).
    """
    if xi.rho <= 0.0:
        raise ValueError(f"rho must be positive, got {xi.rho}")
    s, c = math.sin(xi.gamma), math.cos(xi.gamma)
    return (-xi.rho * c * u1, s * u1, s * u1 - omega)


def slip_dynamics(xi: PolarState, u: ControlInput, b: SlipParams) -> tuple[float, float, float]:
    """Polar vector field with unknown input coefficients b1, b2.

    Takes the actual forward velocity v (not v / rho); the division by rho
    is explicit here:
    (-b1*v*cos(gamma), b1*(v/rho)*sin(gamma), b1*(v/rho)*sin(gamma) - b2*omega).
    """
    if xi.rho <= 0.0:
        raise ValueError(f"rho must be positive, got {xi.rho}")
    if not (b.b1 > 0.0 and b.b2 > 0.0):
        raise ValueError(f"slip coefficients must be positive, got {(b.b1, b.b2)}")
    s, c = math.sin(xi.gamma), math.cos(xi.gamma)
    u1 = b.b1 * u.v / xi.rho
    return (-b.b1 * u.v * c, u1 * s, u1 * s - b.b2 * u.omega)


def cartesian_dynamics(pose: CartesianPose, u: ControlInput) -> tuple[float, float, float]:
    """Standard unicycle kinematics (v*cos(theta), v*sin(theta), omega)."""
    return (u.v * math.cos(pose.theta), u.v * math.sin(pose.theta), u.omega)
