"""Park the unicycle from one unit away, starting sideways.

Runs the quadratic-cost optimal feedback from the pose "directly above
the target, heading parallel to it" (the reversed-parallel-parking
start), prints landmarks along the way, and closes with the cost
identity: for the optimal law the accumulated trajectory cost equals the
initial CLF value up to the truncated tail.
"""

import math

from polarpark import (
    CartesianPose,
    ControllerConfig,
    Quadratic,
    SimParams,
    evaluate_cost,
    integrate,
    to_polar,
)

start = CartesianPose(0.0, 1.0, 0.0)
xi0 = to_polar(start)
print(f"start pose (x, y, theta) = (0, 1, 0)  ->  polar "
      f"(rho, delta, gamma) = ({xi0.rho:g}, {xi0.delta:.6f}, {xi0.gamma:.6f})")

cfg = ControllerConfig(Quadratic(), Quadratic(), 1.0, 1.0, variant="optimal")
traj = integrate(xi0, cfg, SimParams(dt=1e-3, t_max=50.0))

print(f"\n{'t':>6} {'x':>9} {'y':>9} {'theta':>9} {'|Xi|':>9} {'V':>10} {'v':>8} {'omega':>8}")
marks = {0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0}
for s in traj.samples:
    if round(s.t, 9) in marks:
        nrm = math.sqrt(s.xi.rho**2 + s.xi.delta**2 + s.xi.gamma**2)
        print(f"{s.t:6.1f} {s.pose.x:9.5f} {s.pose.y:9.5f} {s.pose.theta:9.5f} "
              f"{nrm:9.5f} {s.V:10.6f} {s.u.v:8.4f} {s.u.omega:8.4f}")

cost = evaluate_cost(traj, cfg)
print(f"\nterminal reason: {traj.terminal_reason}")
print(f"peak |v| = {traj.peak_v():.4f}, peak |omega| = {traj.peak_omega():.4f}")
print(f"accumulated cost J = {cost.J:.6f} (+ tail bound {cost.tail:.4f})")
print(f"initial CLF value V(0) = {traj.samples[0].V:.6f}")
print("the optimal law turns the cost integral into -dV/dt, so J ~ V(0)")
print("\nconvergence note: the feedback shuts off quadratically near the "
      "goal,\nso |Xi| decays like 1/(2*sqrt(t)) - parked to ~0.1 by t=50, "
      "not to zero.")
