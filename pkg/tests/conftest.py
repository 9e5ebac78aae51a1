"""Shared oracles and samplers for the test suite.

The finite-difference oracle differentiates the implemented V directly
along the analytically stated field directions, so it stays independent
of the hand-derived Lie-derivative expressions it is used to check.
"""

from __future__ import annotations

import math
import random

from polarpark import clf_value


def fd_lie_derivatives(rho: float, delta: float, gamma: float,
                       h: float | None = None) -> tuple[float, float]:
    """Central differences of V along gbar1 = (-rho*cos g, sin g, sin g), g2 = (0,0,-1)."""
    if h is None:
        h = 1e-6 * max(1.0, abs(rho), abs(delta), abs(gamma))
    e1 = (-rho * math.cos(gamma), math.sin(gamma), math.sin(gamma))
    e2 = (0.0, 0.0, -1.0)

    def dv(e):
        plus = clf_value((rho + h * e[0], delta + h * e[1], gamma + h * e[2]))
        minus = clf_value((rho - h * e[0], delta - h * e[1], gamma - h * e[2]))
        return (plus - minus) / (2.0 * h)

    return dv(e1), dv(e2)


def random_polar_states(n: int, seed: int = 20240817):
    """States with rho in (0.01, 10], delta and gamma in (-pi, pi)."""
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        rho = 0.01 + rng.random() * 9.99
        delta = (rng.random() * 2.0 - 1.0) * (math.pi - 1e-9)
        gamma = (rng.random() * 2.0 - 1.0) * (math.pi - 1e-9)
        out.append((rho, delta, gamma))
    return out


def rel_err(a: float, b: float) -> float:
    return abs(a - b) / max(1.0, abs(a), abs(b))
