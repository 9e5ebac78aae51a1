"""Closed-loop simulation, cost accumulation, and verification probes.

Fixed-step classical Runge-Kutta (RK4) integration of the polar parking
loop, with the feedback re-evaluated at every stage.  Every step is
recorded as a :class:`TrajectorySample` carrying the state, the applied
control, the CLF value and its analytic rate, the instantaneous cost
integrand and the running trapezoidal cost.

The trajectory cost is

    J = integral [ lf1(eps1*|nu1|) + lf2(eps2*|nu2|)
                   + eta1(|v|/(eps1*rho)) + eta2(|omega|/eps2) ] dt,

where the |v|/(eps1*rho) term is evaluated from the scaled input
u1 = v/rho directly, so no small-rho division ever occurs.  Because the
horizon is finite, reported costs carry the tail estimate 2*V(end) as an
upper-bound diagnostic; a run counts as converged for cost purposes when
that tail is below 1% of the accumulated cost.

Adaptive runs co-integrate the slip dynamics, the adaptive feedback and
the estimate update laws as one augmented ODE.  Their recorded cost
integrand uses the canonical quadratic yardstick (Quadratic penalties,
eps1 = eps2 = 1) so that adaptive and non-adaptive runs are measured on
the same scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .clf import _nu, _value
from .control import (
    AdaptiveState,
    ControllerConfig,
    adaptive_bound,
)
from .model import CartesianPose, ControlInput, PolarState, SlipParams, from_polar
from .penalty import LogCosine, Quadratic, RelayApprox


@dataclass(frozen=True)
class SimParams:
    """Fixed-step integration parameters."""

    dt: float = 1e-3
    t_max: float = 50.0
    stop_norm: float = 1e-3
    rho_floor: float = 1e-9

    def __post_init__(self):
        if not self.dt > 0.0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not self.t_max > 0.0:
            raise ValueError(f"t_max must be positive, got {self.t_max}")
        if self.stop_norm < 0.0:
            raise ValueError(f"stop_norm must be nonnegative, got {self.stop_norm}")
        if not self.rho_floor > 0.0:
            raise ValueError(f"rho_floor must be positive, got {self.rho_floor}")


@dataclass(frozen=True)
class TrajectorySample:
    t: float
    xi: PolarState
    pose: CartesianPose
    u: ControlInput
    V: float
    Vdot: float
    cost_integrand: float
    J_running: float
    eps_hat: tuple[float, float] | None = None


@dataclass
class Trajectory:
    """Time-ordered samples plus the reason the run ended."""

    samples: list[TrajectorySample]
    terminal_reason: str  # "converged" | "horizon" | "rho_floor"

    @property
    def final(self) -> TrajectorySample:
        return self.samples[-1]

    @property
    def t_end(self) -> float:
        return self.samples[-1].t

    def peak_v(self) -> float:
        return max(abs(s.u.v) for s in self.samples)

    def peak_omega(self) -> float:
        return max(abs(s.u.omega) for s in self.samples)

    def final_norm(self) -> float:
        return self.samples[-1].xi.norm()


class SimulationDiverged(RuntimeError):
    """Raised when the integrator produces a nonfinite or nonpositive-rho state."""

    def __init__(self, step: int, t: float, state: tuple):
        self.step = step
        self.t = t
        self.state = state
        super().__init__(f"nonfinite or invalid state {state} at step {step} (t={t:.6g})")


@dataclass(frozen=True)
class CostResult:
    """Trapezoidal cost with per-term breakdown and tail diagnostic."""

    state_cost: float
    control_cost: float
    J: float
    tail: float
    total: float
    converged: bool


@dataclass(frozen=True)
class BoundCheck:
    passed: bool
    worst_margin: float
    bound: float


@dataclass(frozen=True)
class ProbeEntry:
    kappa: float
    J: float
    tail: float
    total: float
    converged: bool
    terminal_reason: str


# ---------------------------------------------------------------------------
# fast closures over a controller config


def _gain_fn(cfg: ControllerConfig) -> Callable[[float, float, float], tuple[float, float]]:
    """(rho, delta, gamma) -> (eps1, eps2), with constants resolved up front."""
    sat = cfg.saturation
    if sat is None:
        if not callable(cfg.eps1) and not callable(cfg.eps2):
            e1c, e2c = float(cfg.eps1), float(cfg.eps2)
            return lambda rho, d, g: (e1c, e2c)

        def user_gains(rho, d, g):
            return cfg.gains(PolarState(rho, d, g))

        return user_gains

    if isinstance(cfg.penalty1, LogCosine):
        num1 = (2.0 / math.pi) * sat.v_bar
    elif isinstance(cfg.penalty1, RelayApprox):
        num1 = sat.v_bar
    else:
        num1 = None
        e1c = float(cfg.eps1)
    if isinstance(cfg.penalty2, LogCosine):
        e2c = 2.0 * sat.omega_bar / math.pi
    elif isinstance(cfg.penalty2, RelayApprox):
        e2c = sat.omega_bar
    else:
        e2c = float(cfg.eps2)
    sigma = sat.sigma

    if num1 is None:
        return lambda rho, d, g: (e1c, e2c)
    return lambda rho, d, g: (num1 / (sigma + rho), e2c)


def _scaled_feedback_fn(cfg: ControllerConfig, *, exact: bool = False):
    """(rho, delta, gamma) -> (u1, omega) for the configured variant."""
    gains = _gain_fn(cfg)
    if cfg.variant == "optimal":
        shape1 = cfg.penalty1.inv_eta_prime
        shape2 = cfg.penalty2.inv_eta_prime
    else:
        shape1 = cfg.penalty1.lf_over_r if exact else cfg.penalty1.lf_over_r_fast
        shape2 = cfg.penalty2.lf_over_r if exact else cfg.penalty2.lf_over_r_fast

    def fb(rho, d, g):
        nu1, nu2 = _nu(rho, d, g)
        e1, e2 = gains(rho, d, g)
        if nu1 > 0.0:
            u1 = -e1 * shape1(e1 * nu1)
        elif nu1 < 0.0:
            u1 = e1 * shape1(-e1 * nu1)
        else:
            u1 = 0.0
        if nu2 > 0.0:
            om = -e2 * shape2(e2 * nu2)
        elif nu2 < 0.0:
            om = e2 * shape2(-e2 * nu2)
        else:
            om = 0.0
        return u1, om

    return fb


def _integrand_fn(cfg: ControllerConfig, *, exact: bool = False):
    """(rho, delta, gamma, u1, omega) -> instantaneous cost integrand."""
    gains = _gain_fn(cfg)
    lf1 = cfg.penalty1.lf if exact else cfg.penalty1.lf_fast
    lf2 = cfg.penalty2.lf if exact else cfg.penalty2.lf_fast
    eta1 = cfg.penalty1.eta if exact else cfg.penalty1.eta_fast
    eta2 = cfg.penalty2.eta if exact else cfg.penalty2.eta_fast

    def integrand(rho, d, g, u1, om):
        nu1, nu2 = _nu(rho, d, g)
        e1, e2 = gains(rho, d, g)
        return (lf1(e1 * abs(nu1)) + lf2(e2 * abs(nu2))
                + eta1(abs(u1) / e1) + eta2(abs(om) / e2))

    return integrand


# Yardstick config for adaptive-run cost recording.
_QUAD_COST_CFG = ControllerConfig(Quadratic(), Quadratic(), 1.0, 1.0, variant="optimal")


# ---------------------------------------------------------------------------
# integration


def integrate(xi0: PolarState, cfg: ControllerConfig, p: SimParams, *,
              kappa: float = 1.0) -> Trajectory:
    """Integrate the closed loop from xi0 under the configured feedback.

    ``kappa`` scales the applied control (gain-margin experiments); the
    recorded controls and costs refer to the scaled input.  Terminates at
    the horizon, when |xi| drops below ``stop_norm``, or when rho falls
    under ``rho_floor``.  Nonfinite states raise :class:`SimulationDiverged`
    with the offending step.
    """
    if not kappa > 0.0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    fb = _scaled_feedback_fn(cfg)
    integrand = _integrand_fn(cfg)
    dt = p.dt
    n_steps = max(1, int(round(p.t_max / dt)))

    rho, d, g = xi0.rho, xi0.delta, xi0.gamma
    samples: list[TrajectorySample] = []
    terminal = "horizon"
    j_run = 0.0
    prev_integ = 0.0

    def rhs(rho, d, g):
        u1, om = fb(rho, d, g)
        u1 *= kappa
        om *= kappa
        s, c = math.sin(g), math.cos(g)
        return (-rho * c * u1, s * u1, s * u1 - om)

    for i in range(n_steps + 1):
        t = i * dt
        u1, om = fb(rho, d, g)
        u1 *= kappa
        om *= kappa
        if not (math.isfinite(u1) and math.isfinite(om)):
            raise SimulationDiverged(i, t, (rho, d, g, u1, om))
        nu1, nu2 = _nu(rho, d, g)
        xi = PolarState(rho, d, g)
        integ = integrand(rho, d, g, u1, om)
        if i > 0:
            j_run += 0.5 * dt * (prev_integ + integ)
        prev_integ = integ
        samples.append(TrajectorySample(
            t=t, xi=xi, pose=from_polar(xi), u=ControlInput(rho * u1, om),
            V=_value(rho, d, g), Vdot=nu1 * u1 + nu2 * om,
            cost_integrand=integ, J_running=j_run))

        if math.sqrt(rho * rho + d * d + g * g) < p.stop_norm:
            terminal = "converged"
            break
        if rho < p.rho_floor:
            terminal = "rho_floor"
            break
        if i == n_steps:
            break

        k1 = rhs(rho, d, g)
        k2 = rhs(rho + 0.5 * dt * k1[0], d + 0.5 * dt * k1[1], g + 0.5 * dt * k1[2])
        k3 = rhs(rho + 0.5 * dt * k2[0], d + 0.5 * dt * k2[1], g + 0.5 * dt * k2[2])
        k4 = rhs(rho + dt * k3[0], d + dt * k3[1], g + dt * k3[2])
        rho += dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
        d += dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
        g += dt / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])
        if not (math.isfinite(rho) and math.isfinite(d) and math.isfinite(g)) or rho <= 0.0:
            raise SimulationDiverged(i + 1, (i + 1) * dt, (rho, d, g))

    return Trajectory(samples, terminal)


def integrate_adaptive(xi0: PolarState, a0: AdaptiveState, b: SlipParams,
                       p: SimParams) -> Trajectory:
    """Co-integrate slip dynamics, adaptive feedback and update laws.

    The estimates evolve as part of the augmented state and are recorded in
    each sample's ``eps_hat``.  The recorded cost integrand is the
    quadratic eps = 1 yardstick (see module docstring).
    """
    b1, b2 = b.b1, b.b2
    mu1, mu2 = a0.mu1, a0.mu2
    n_fn, np_fn = a0.n, a0.n_prime
    dt = p.dt
    n_steps = max(1, int(round(p.t_max / dt)))

    rho, d, g = xi0.rho, xi0.delta, xi0.gamma
    e1h, e2h = a0.eps1_hat, a0.eps2_hat
    samples: list[TrajectorySample] = []
    terminal = "horizon"
    j_run = 0.0
    prev_integ = 0.0

    def rhs(rho, d, g, e1h, e2h):
        nu1, nu2 = _nu(rho, d, g)
        u1 = -e1h * nu1          # = v / rho with v = -e1h*rho*nu1
        om = -e2h * nu2
        s, c = math.sin(g), math.cos(g)
        v_ = _value(rho, d, g)
        fac = np_fn(v_) / (1.0 + n_fn(v_))
        bu1 = b1 * u1
        return (-rho * c * bu1, s * bu1, s * bu1 - b2 * om,
                mu1 * fac * nu1 * nu1, mu2 * fac * nu2 * nu2)

    for i in range(n_steps + 1):
        t = i * dt
        nu1, nu2 = _nu(rho, d, g)
        u1 = -e1h * nu1
        om = -e2h * nu2
        if not (math.isfinite(u1) and math.isfinite(om)):
            raise SimulationDiverged(i, t, (rho, d, g, e1h, e2h))
        xi = PolarState(rho, d, g)
        integ = 0.5 * (nu1 * nu1 + nu2 * nu2 + u1 * u1 + om * om)
        if i > 0:
            j_run += 0.5 * dt * (prev_integ + integ)
        prev_integ = integ
        samples.append(TrajectorySample(
            t=t, xi=xi, pose=from_polar(xi), u=ControlInput(rho * u1, om),
            V=_value(rho, d, g), Vdot=nu1 * b1 * u1 + nu2 * b2 * om,
            cost_integrand=integ, J_running=j_run, eps_hat=(e1h, e2h)))

        if math.sqrt(rho * rho + d * d + g * g) < p.stop_norm:
            terminal = "converged"
            break
        if rho < p.rho_floor:
            terminal = "rho_floor"
            break
        if i == n_steps:
            break

        k1 = rhs(rho, d, g, e1h, e2h)
        k2 = rhs(rho + 0.5 * dt * k1[0], d + 0.5 * dt * k1[1], g + 0.5 * dt * k1[2],
                 e1h + 0.5 * dt * k1[3], e2h + 0.5 * dt * k1[4])
        k3 = rhs(rho + 0.5 * dt * k2[0], d + 0.5 * dt * k2[1], g + 0.5 * dt * k2[2],
                 e1h + 0.5 * dt * k2[3], e2h + 0.5 * dt * k2[4])
        k4 = rhs(rho + dt * k3[0], d + dt * k3[1], g + dt * k3[2],
                 e1h + dt * k3[3], e2h + dt * k3[4])
        rho += dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
        d += dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
        g += dt / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])
        e1h += dt / 6.0 * (k1[3] + 2.0 * k2[3] + 2.0 * k3[3] + k4[3])
        e2h += dt / 6.0 * (k1[4] + 2.0 * k2[4] + 2.0 * k3[4] + k4[4])
        ok = (math.isfinite(rho) and math.isfinite(d) and math.isfinite(g)
              and math.isfinite(e1h) and math.isfinite(e2h) and rho > 0.0)
        if not ok:
            raise SimulationDiverged(i + 1, (i + 1) * dt, (rho, d, g, e1h, e2h))

    return Trajectory(samples, terminal)


# ---------------------------------------------------------------------------
# cost evaluation and probes


def evaluate_cost(traj: Trajectory, cfg: ControllerConfig, *, exact: bool = True) -> CostResult:
    """Trapezoidal cost of a recorded trajectory with per-term breakdown.

    Requires dense sampling (spacing <= 1e-2).  The tail 2*V(end) is an
    upper-bound diagnostic for the truncated horizon; ``converged`` flags
    whether the tail is negligible (< 1% of the accumulated cost).
    """
    samples = traj.samples
    if len(samples) < 2:
        v_end = samples[-1].V if samples else 0.0
        return CostResult(0.0, 0.0, 0.0, 2.0 * v_end, 2.0 * v_end, v_end == 0.0)
    for a, b_ in zip(samples, samples[1:]):
        if b_.t - a.t > 1e-2 + 1e-12:
            raise ValueError(f"trajectory not densely sampled: dt={b_.t - a.t:.4g} > 1e-2")

    gains = _gain_fn(cfg)
    lf1, lf2 = cfg.penalty1.lf, cfg.penalty2.lf
    eta1, eta2 = cfg.penalty1.eta, cfg.penalty2.eta
    if not exact:
        lf1, lf2 = cfg.penalty1.lf_fast, cfg.penalty2.lf_fast
        eta1, eta2 = cfg.penalty1.eta_fast, cfg.penalty2.eta_fast

    state_cost = 0.0
    control_cost = 0.0
    prev_s = prev_c = 0.0
    for k, smp in enumerate(samples):
        rho, d, g = smp.xi.rho, smp.xi.delta, smp.xi.gamma
        nu1, nu2 = _nu(rho, d, g)
        e1, e2 = gains(rho, d, g)
        s_part = lf1(e1 * abs(nu1)) + lf2(e2 * abs(nu2))
        c_part = eta1(abs(smp.u.v) / (e1 * rho)) + eta2(abs(smp.u.omega) / e2)
        if k > 0:
            h = smp.t - samples[k - 1].t
            state_cost += 0.5 * h * (prev_s + s_part)
            control_cost += 0.5 * h * (prev_c + c_part)
        prev_s, prev_c = s_part, c_part

    j = state_cost + control_cost
    tail = 2.0 * samples[-1].V
    converged = tail <= 0.01 * j if j > 0.0 else tail == 0.0
    return CostResult(state_cost, control_cost, j, tail, j + tail, converged)


def classical_quadratic_cost(traj: Trajectory, eps1: float = 1.0, eps2: float = 1.0) -> CostResult:
    """Squared-terms trajectory cost (no 1/2 on the quadratic forms).

    Integrand (eps1*nu1)^2 + (eps2*nu2)^2 + (v/(eps1*rho))^2 + (omega/eps2)^2:
    exactly twice the canonical quadratic-penalty cost, minimized by the
    same feedback.  The doubled tail stays an upper-bound diagnostic.
    """
    cfg = ControllerConfig(Quadratic(), Quadratic(), eps1, eps2, variant="optimal")
    c = evaluate_cost(traj, cfg)
    return CostResult(2.0 * c.state_cost, 2.0 * c.control_cost, 2.0 * c.J,
                      2.0 * c.tail, 2.0 * c.total, c.converged)


def check_adaptive_bound(traj: Trajectory, b: SlipParams, a0: AdaptiveState) -> BoundCheck:
    """Verify the transient bound on the augmented norm along an adaptive run.

    Upsilon(t) = |(rho, delta, gamma, 1/b1 - eps1_hat, 1/b2 - eps2_hat)| is
    compared at every sample against the bound computed from Upsilon(0).
    Returns the worst (smallest) margin bound - Upsilon(t).
    """
    if not traj.samples or traj.samples[0].eps_hat is None:
        raise ValueError("trajectory carries no estimates; run integrate_adaptive")
    inv1, inv2 = 1.0 / b.b1, 1.0 / b.b2

    def upsilon(smp: TrajectorySample) -> float:
        e1h, e2h = smp.eps_hat
        t1, t2 = inv1 - e1h, inv2 - e2h
        xi = smp.xi
        return math.sqrt(xi.rho ** 2 + xi.delta ** 2 + xi.gamma ** 2 + t1 * t1 + t2 * t2)

    bound = adaptive_bound(upsilon(traj.samples[0]), b, a0)
    worst = math.inf
    for smp in traj.samples:
        margin = bound - upsilon(smp)
        if margin < worst:
            worst = margin
    return BoundCheck(worst >= 0.0, worst, bound)


def optimality_probe(xi0: PolarState, cfg: ControllerConfig, kappa_grid: Sequence[float],
                     p: SimParams | None = None) -> list[ProbeEntry]:
    """Cost of the kappa-scaled law over a gain grid; the grid must include 1.

    Each entry reports the cost of applying kappa times the configured
    feedback, evaluated against the unscaled configuration's cost.  Entries
    whose tail is not negligible are flagged not converged; their J is then
    a lower bound on the infinite-horizon cost.
    """
    if not any(k == 1.0 for k in kappa_grid):
        raise ValueError("kappa grid must include 1.0")
    if any(k <= 0.0 for k in kappa_grid):
        raise ValueError("kappa grid entries must be positive")
    p = p or SimParams()
    entries = []
    for k in kappa_grid:
        traj = integrate(xi0, cfg, p, kappa=k)
        cost = evaluate_cost(traj, cfg)
        entries.append(ProbeEntry(k, cost.J, cost.tail, cost.total,
                                  cost.converged, traj.terminal_reason))
    return entries
