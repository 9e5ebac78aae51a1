"""Scale the optimal law by kappa and watch the cost respond.

Because the loop is driftless, any positive multiple of the feedback
still stabilizes (infinite gain margin); the trajectory cost, evaluated
for the unscaled configuration, is minimized exactly at kappa = 1.  For
the quadratic penalty the whole curve has the closed form
J(kappa) = V0 * (1 + kappa^2) / (2*kappa), shown alongside.
"""

import math

from polarpark import (
    ControllerConfig,
    PolarState,
    Quadratic,
    SimParams,
    clf_value,
    optimality_probe,
)

xi0 = PolarState(1.0, -math.pi / 2, -math.pi / 2)
v0 = clf_value(xi0)
cfg = ControllerConfig(Quadratic(), Quadratic(), 1.0, 1.0, variant="optimal")

entries = optimality_probe(xi0, cfg, [0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 4.0],
                           SimParams(dt=1e-3, t_max=50.0))

print(f"{'kappa':>6} {'J':>10} {'closed form':>12} {'tail':>9} {'converged':>10}")
for e in entries:
    pred = v0 * (1 + e.kappa**2) / (2 * e.kappa)
    print(f"{e.kappa:6.2f} {e.J:10.5f} {pred:12.5f} {e.tail:9.5f} {str(e.converged):>10}")

best = min(entries, key=lambda e: e.J)
print(f"\nargmin at kappa = {best.kappa:g} with J = {best.J:.5f} "
      f"(V0 = {v0:.5f})")
