"""Walk through the four built-in cost-on-control functions.

For each penalty this prints eta, its derivative-inverse and the
Legendre-Fenchel transform on a small grid, then spot-checks the
Fenchel-Young equality lf(eta'(r)) + eta(r) = r*eta'(r) that ties the
pair together.  The derivative-inverse column is the shape of the optimal
feedback; note how LogCosine and RelayApprox flatten out below their
saturation levels (pi/2-scaled and 1).
"""

from polarpark import HyperbolicCosine, LogCosine, Quadratic, RelayApprox

penalties = [Quadratic(), HyperbolicCosine(), LogCosine(), RelayApprox()]

for p in penalties:
    print(f"\n=== {p.name} (domain limit a = {p.domain_limit:g}) ===")
    print(f"{'r':>6} {'eta(r)':>12} {'inv_eta_prime(r)':>18} {'lf(r)/r':>12}")
    for r in (0.1, 0.5, 1.0, 2.0, 4.0):
        eta = p.eta(r) if r < p.domain_limit else float("inf")
        print(f"{r:6.2f} {eta:12.6f} {p.inv_eta_prime(r):18.6f} {p.lf_over_r(r):12.6f}")

    worst = 0.0
    top = 0.9 * p.domain_limit if p.domain_limit != float("inf") else 2.5
    for i in range(1, 50):
        r = top * i / 50
        ep = p.eta_prime(r)
        worst = max(worst, abs(p.lf(ep) + p.eta(r) - r * ep))
    print(f"Fenchel-Young residual over (0, {top:.2f}]: {worst:.2e}")
