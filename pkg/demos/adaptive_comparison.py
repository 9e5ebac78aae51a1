"""Adaptive parking under unknown input coefficients.

The wheels may slip: the inputs are scaled by unknown positive constants
b1, b2.  The adaptive law estimates their inverses online, starting from
zero (and even from the wrong sign), and is compared here against the
fixed-gain quadratic law that assumes b = 1.  The adaptive runs reach a
smaller state norm with visibly smaller peak controls, and the transient
bound on the augmented state-plus-estimate norm holds throughout.
"""

import math

from polarpark import (
    AdaptiveState,
    ControllerConfig,
    PolarState,
    Quadratic,
    SimParams,
    SlipParams,
    check_adaptive_bound,
    integrate,
    integrate_adaptive,
)

xi0 = PolarState(1.0, -math.pi / 2, -math.pi / 2)
p = SimParams(dt=1e-3, t_max=50.0)
b = SlipParams(1.0, 1.0)

baseline = integrate(xi0, ControllerConfig(Quadratic(), Quadratic(), 1.0, 1.0,
                                           variant="optimal"), p)
rows = [("fixed-gain baseline", baseline, None, None)]

for label, a0 in [
        ("adaptive mu=0.5", AdaptiveState(0.0, 0.0, mu1=0.5, mu2=0.5)),
        ("adaptive mu=1.0", AdaptiveState(0.0, 0.0, mu1=1.0, mu2=1.0)),
        ("wrong-sign start", AdaptiveState(-0.5, -0.5, mu1=0.5, mu2=0.5))]:
    traj = integrate_adaptive(xi0, a0, b, p)
    rows.append((label, traj, a0, check_adaptive_bound(traj, b, a0)))

print(f"{'run':<20} {'|Xi(50)|':>9} {'peak |v|':>9} {'peak |om|':>9} "
      f"{'eps_hat(50)':>16} {'bound ok':>9}")
for label, traj, a0, bc in rows:
    eps = "-"
    if traj.final.eps_hat is not None:
        eps = f"({traj.final.eps_hat[0]:.3f}, {traj.final.eps_hat[1]:.3f})"
    bound = "-" if bc is None else str(bc.passed)
    print(f"{label:<20} {traj.final_norm():9.4f} {traj.peak_v():9.3f} "
          f"{traj.peak_omega():9.3f} {eps:>16} {bound:>9}")

print("\nestimates only grow (the update laws are nonnegative), and larger")
print("adaptation gains push them further above 1, buying a faster decay")
print("with smaller control peaks than the fixed-gain law.")
