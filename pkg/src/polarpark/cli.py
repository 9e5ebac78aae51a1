"""Scenario runner: simulate / sweep / compare / adaptive / probe.

Scenarios live in flat INI-style config files, one section per scenario.
Trajectory CSVs carry the fixed column order

    t,x,y,theta,rho,delta,gamma,v,omega,V,Vdot,cost_integrand,J_running,
    eps1_hat,eps2_hat

with floats printed to 17 significant digits (lossless round-trip); the
estimate columns are empty for non-adaptive runs.  Every invocation also
writes ``summary.csv`` into the output directory.  Identical configs
produce byte-identical CSVs.

Exit codes: 0 success, 2 config error, 3 non-convergence when a scenario
set ``require_convergence``, 1 integrator divergence.

Config keys (section = scenario name):

    kind = trajectory | adaptive | penalty_grid   (default trajectory)
    penalty = <name>          or penalty1 = / penalty2 =
    variant = optimal | continuous
    eps1 = / eps2 =           constant gains (default 1.0)
    v_bar = / omega_bar = / sigma =    bounded-penalty saturation schedule
    ic_polar = rho delta gamma         or ic_cartesian = x y theta
    ic_polar_grid / ic_cartesian_grid  multiline, one state per line
    dt = / t_max = / stop_norm = / rho_floor =
    require_convergence = true|false
    kappa_grid = k1 k2 ...             (probe)
    b1 = / b2 = / mu1 = / mu2 = / eps1_hat0 = / eps2_hat0 =   (adaptive)
    normalization = identity | linear:<n0>                     (adaptive)
    r_max = / points =                 (penalty_grid)

Bundled scenario files (``--config`` accepts their name in place of a
path): run ``polarpark list`` to enumerate them.
"""

from __future__ import annotations

import argparse
import configparser
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .control import AdaptiveState, ControllerConfig, Saturation
from .model import CartesianPose, PolarState, SlipParams, to_polar
from .penalty import builtin_penalty
from .sim import (
    _QUAD_COST_CFG,
    SimParams,
    Trajectory,
    evaluate_cost,
    integrate,
    integrate_adaptive,
    optimality_probe,
)

TRAJECTORY_HEADER = ("t,x,y,theta,rho,delta,gamma,v,omega,V,Vdot,"
                     "cost_integrand,J_running,eps1_hat,eps2_hat")
GRID_HEADER = "r,eta,eta_prime,inv_eta_prime,lf,lf_over_r"
SUMMARY_HEADER = ("scenario,terminal_reason,t_end,J,J_tail,J_total,"
                  "peak_v,peak_omega,settling_time,eps1_hat_end,eps2_hat_end")
PROBE_HEADER = "kappa,J,J_tail,J_total,converged,terminal_reason"

SETTLING_FRACTION = 0.05


class ConfigError(Exception):
    pass


@dataclass
class Scenario:
    name: str
    kind: str
    cfg: ControllerConfig | None
    ics: list[PolarState]
    grid_ics: bool
    sim: SimParams
    require_convergence: bool
    kappa_grid: list[float] | None
    adaptive0: AdaptiveState | None
    slip: SlipParams | None
    grid_spec: tuple[str, float, int] | None


def _fmt(x: float) -> str:
    return format(x, ".17g")


def _floats(raw: str, n: int, what: str) -> list[float]:
    parts = raw.replace(",", " ").split()
    if len(parts) != n:
        raise ConfigError(f"{what}: expected {n} numbers, got {raw!r}")
    try:
        return [float(p) for p in parts]
    except ValueError as e:
        raise ConfigError(f"{what}: {e}") from None


def _parse_ics(sec, name) -> tuple[list[PolarState], bool]:
    keys = [k for k in ("ic_polar", "ic_cartesian", "ic_polar_grid", "ic_cartesian_grid")
            if sec.get(k) is not None]
    if len(keys) != 1:
        raise ConfigError(f"[{name}] needs exactly one of ic_polar / ic_cartesian / "
                          f"ic_polar_grid / ic_cartesian_grid")
    key = keys[0]
    raw = sec.get(key)
    lines = [ln for ln in raw.splitlines() if ln.strip()] if key.endswith("_grid") else [raw]
    ics = []
    for ln in lines:
        vals = _floats(ln, 3, f"[{name}] {key}")
        try:
            if "cartesian" in key:
                ics.append(to_polar(CartesianPose(*vals)))
            else:
                ics.append(PolarState(*vals))
        except ValueError as e:
            raise ConfigError(f"[{name}] {key}: {e}") from None
    return ics, key.endswith("_grid")


def _parse_scenario(name: str, sec) -> Scenario:
    kind = sec.get("kind", "trajectory").strip()
    if kind not in ("trajectory", "adaptive", "penalty_grid"):
        raise ConfigError(f"[{name}] unknown kind {kind!r}")

    if kind == "penalty_grid":
        pname = sec.get("penalty")
        if pname is None:
            raise ConfigError(f"[{name}] penalty_grid needs a penalty name")
        try:
            builtin_penalty(pname.strip())
        except ValueError as e:
            raise ConfigError(f"[{name}] {e}") from None
        r_max = sec.getfloat("r_max", 3.0)
        points = sec.getint("points", 301)
        if r_max <= 0.0 or points < 2:
            raise ConfigError(f"[{name}] r_max must be > 0 and points >= 2")
        return Scenario(name, kind, None, [], False, SimParams(), False, None, None, None,
                        (pname.strip(), r_max, points))

    try:
        sim = SimParams(dt=sec.getfloat("dt", 1e-3), t_max=sec.getfloat("t_max", 50.0),
                        stop_norm=sec.getfloat("stop_norm", 1e-3),
                        rho_floor=sec.getfloat("rho_floor", 1e-9))
    except ValueError as e:
        raise ConfigError(f"[{name}] {e}") from None

    ics, grid_ics = _parse_ics(sec, name)
    require_conv = sec.getboolean("require_convergence", False)

    if kind == "adaptive":
        norm = sec.get("normalization", "identity").strip()
        if norm == "identity":
            n_fn, np_fn = (lambda v: v), (lambda v: 1.0)
        elif norm.startswith("linear:"):
            try:
                n0 = float(norm.split(":", 1)[1])
            except ValueError:
                raise ConfigError(f"[{name}] bad normalization {norm!r}") from None
            if n0 <= 0.0:
                raise ConfigError(f"[{name}] normalization slope must be positive")
            n_fn, np_fn = (lambda v: n0 * v), (lambda v: n0)
        else:
            raise ConfigError(f"[{name}] unknown normalization {norm!r}")
        try:
            a0 = AdaptiveState(eps1_hat=sec.getfloat("eps1_hat0", 0.0),
                               eps2_hat=sec.getfloat("eps2_hat0", 0.0),
                               mu1=sec.getfloat("mu1", 0.5), mu2=sec.getfloat("mu2", 0.5),
                               n=n_fn, n_prime=np_fn)
            slip = SlipParams(sec.getfloat("b1", 1.0), sec.getfloat("b2", 1.0))
        except ValueError as e:
            raise ConfigError(f"[{name}] {e}") from None
        return Scenario(name, kind, None, ics, grid_ics, sim, require_conv, None, a0, slip, None)

    p1name = sec.get("penalty1", sec.get("penalty", "Quadratic")).strip()
    p2name = sec.get("penalty2", sec.get("penalty", "Quadratic")).strip()
    try:
        p1, p2 = builtin_penalty(p1name), builtin_penalty(p2name)
    except ValueError as e:
        raise ConfigError(f"[{name}] {e}") from None

    sat_keys = [k for k in ("v_bar", "omega_bar", "sigma") if sec.get(k) is not None]
    saturation = None
    if sat_keys:
        missing = [k for k in ("v_bar", "omega_bar", "sigma") if sec.get(k) is None]
        if missing:
            raise ConfigError(f"[{name}] saturation needs v_bar, omega_bar and sigma; "
                              f"missing {', '.join(missing)}")
        try:
            saturation = Saturation(sec.getfloat("v_bar"), sec.getfloat("omega_bar"),
                                    sec.getfloat("sigma"))
        except ValueError as e:
            raise ConfigError(f"[{name}] {e}") from None

    variant = sec.get("variant", "continuous").strip()
    try:
        cfg = ControllerConfig(p1, p2, eps1=sec.getfloat("eps1", 1.0),
                               eps2=sec.getfloat("eps2", 1.0),
                               variant=variant, saturation=saturation)
    except ValueError as e:
        raise ConfigError(f"[{name}] {e}") from None

    kgrid = None
    if sec.get("kappa_grid") is not None:
        kgrid = [float(t) for t in sec.get("kappa_grid").replace(",", " ").split()]
        if not kgrid:
            raise ConfigError(f"[{name}] empty kappa_grid")
    return Scenario(name, kind, cfg, ics, grid_ics, sim, require_conv, kgrid, None, None, None)


def parse_config(path: Path) -> list[Scenario]:
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as e:
        raise ConfigError(f"cannot read config: {e}") from None
    except configparser.Error as e:
        raise ConfigError(f"config parse error: {e}") from None
    scenarios = [_parse_scenario(name, parser[name]) for name in parser.sections()]
    if not scenarios:
        raise ConfigError(f"no scenario sections in {path}")
    return scenarios


def bundled_scenarios() -> list[str]:
    base = resources.files("polarpark").joinpath("scenarios")
    return sorted(p.name[:-4] for p in base.iterdir() if p.name.endswith(".cfg"))


def resolve_config(spec: str) -> Path:
    p = Path(spec)
    if p.exists():
        return p
    base = resources.files("polarpark").joinpath("scenarios")
    candidate = base.joinpath(spec if spec.endswith(".cfg") else spec + ".cfg")
    if candidate.is_file():
        return Path(str(candidate))
    raise ConfigError(f"config {spec!r} not found (bundled: {', '.join(bundled_scenarios())})")


# ---------------------------------------------------------------------------
# output


def _settling_time(traj: Trajectory) -> float | None:
    norms = [s.xi.norm() for s in traj.samples]
    threshold = SETTLING_FRACTION * norms[0]
    last_above = None
    for i, v in enumerate(norms):
        if v > threshold:
            last_above = i
    if last_above is None:
        return traj.samples[0].t
    if last_above + 1 >= len(norms):
        return None
    return traj.samples[last_above + 1].t


def write_trajectory_csv(path: Path, traj: Trajectory) -> None:
    rows = [TRAJECTORY_HEADER]
    for s in traj.samples:
        eps1 = _fmt(s.eps_hat[0]) if s.eps_hat is not None else ""
        eps2 = _fmt(s.eps_hat[1]) if s.eps_hat is not None else ""
        rows.append(",".join((
            _fmt(s.t), _fmt(s.pose.x), _fmt(s.pose.y), _fmt(s.pose.theta),
            _fmt(s.xi.rho), _fmt(s.xi.delta), _fmt(s.xi.gamma),
            _fmt(s.u.v), _fmt(s.u.omega), _fmt(s.V), _fmt(s.Vdot),
            _fmt(s.cost_integrand), _fmt(s.J_running), eps1, eps2)))
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")


def write_penalty_grid_csv(path: Path, pname: str, r_max: float, points: int) -> None:
    p = builtin_penalty(pname)
    rows = [GRID_HEADER]
    a = p.domain_limit
    for i in range(points):
        r = r_max * i / (points - 1)
        inside = r < a
        eta = _fmt(p.eta(r)) if inside else ""
        etap = _fmt(p.eta_prime(r)) if inside else ""
        rows.append(",".join((_fmt(r), eta, etap, _fmt(p.inv_eta_prime(r)),
                              _fmt(p.lf(r)), _fmt(p.lf_over_r(r)))))
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")


def _summary_row(name: str, traj: Trajectory, cost) -> str:
    settle = _settling_time(traj)
    last = traj.final
    eps1 = _fmt(last.eps_hat[0]) if last.eps_hat is not None else ""
    eps2 = _fmt(last.eps_hat[1]) if last.eps_hat is not None else ""
    return ",".join((name, traj.terminal_reason, _fmt(traj.t_end),
                     _fmt(cost.J), _fmt(cost.tail), _fmt(cost.total),
                     _fmt(traj.peak_v()), _fmt(traj.peak_omega()),
                     _fmt(settle) if settle is not None else "", eps1, eps2))


# ---------------------------------------------------------------------------
# subcommands


def _run_one(sc: Scenario, xi0: PolarState, sim: SimParams) -> Trajectory:
    if sc.kind == "adaptive":
        return integrate_adaptive(xi0, sc.adaptive0, sc.slip, sim)
    return integrate(xi0, sc.cfg, sim)


def _cost_for(sc: Scenario, traj: Trajectory):
    # Adaptive runs are costed with the quadratic eps=1 yardstick their
    # samples already carry.
    if sc.kind == "adaptive":
        return evaluate_cost(traj, _QUAD_COST_CFG)
    return evaluate_cost(traj, sc.cfg)


def _apply_overrides(sim: SimParams, args) -> SimParams:
    dt = args.dt if args.dt is not None else sim.dt
    t_max = args.t_max if args.t_max is not None else sim.t_max
    try:
        return SimParams(dt=dt, t_max=t_max, stop_norm=sim.stop_norm, rho_floor=sim.rho_floor)
    except ValueError as e:
        raise ConfigError(str(e)) from None


def _run_scenarios(scenarios: list[Scenario], out: Path, args, allowed_kinds,
                   need_grid: bool | None = None) -> int:
    summary = [SUMMARY_HEADER]
    exit_code = 0
    for sc in scenarios:
        if sc.kind not in allowed_kinds:
            raise ConfigError(f"[{sc.name}] kind {sc.kind!r} not supported by this subcommand")
        if sc.kind == "penalty_grid":
            path = out / f"{sc.name}.csv"
            write_penalty_grid_csv(path, *sc.grid_spec)
            if not args.quiet:
                print(f"{sc.name}: wrote {path}")
            continue
        if need_grid is True and not sc.grid_ics:
            raise ConfigError(f"[{sc.name}] sweep needs an ic_*_grid")
        if need_grid is False and sc.grid_ics:
            raise ConfigError(f"[{sc.name}] this subcommand takes single-state scenarios; "
                              f"use sweep for grids")
        sim = _apply_overrides(sc.sim, args)
        for idx, xi0 in enumerate(sc.ics):
            run_name = f"{sc.name}__ic{idx:02d}" if sc.grid_ics else sc.name
            traj = _run_one(sc, xi0, sim)
            cost = _cost_for(sc, traj)
            path = out / f"{run_name}.csv"
            write_trajectory_csv(path, traj)
            summary.append(_summary_row(run_name, traj, cost))
            if not args.quiet:
                print(f"{run_name}: {traj.terminal_reason} at t={traj.t_end:g}, "
                      f"J_total={cost.total:.6g}, wrote {path}")
            if sc.require_convergence and traj.terminal_reason != "converged":
                exit_code = 3
    (out / "summary.csv").write_text("\n".join(summary) + "\n", encoding="utf-8")
    return exit_code


def cmd_simulate(scenarios, out, args):
    return _run_scenarios(scenarios, out, args, ("trajectory", "penalty_grid"), need_grid=False)


def cmd_sweep(scenarios, out, args):
    return _run_scenarios(scenarios, out, args, ("trajectory", "adaptive"), need_grid=True)


def cmd_compare(scenarios, out, args):
    return _run_scenarios(scenarios, out, args, ("trajectory", "adaptive"), need_grid=False)


def cmd_adaptive(scenarios, out, args):
    if not any(sc.kind == "adaptive" for sc in scenarios):
        raise ConfigError("adaptive subcommand needs at least one kind = adaptive scenario")
    return _run_scenarios(scenarios, out, args, ("trajectory", "adaptive"), need_grid=False)


def cmd_probe(scenarios, out, args):
    probes = [sc for sc in scenarios if sc.kappa_grid]
    if len(probes) != 1:
        raise ConfigError("probe needs exactly one scenario with a kappa_grid")
    sc = probes[0]
    if sc.kind != "trajectory" or sc.grid_ics:
        raise ConfigError(f"[{sc.name}] probe needs a single-state trajectory scenario")
    sim = _apply_overrides(sc.sim, args)
    try:
        entries = optimality_probe(sc.ics[0], sc.cfg, sc.kappa_grid, sim)
    except ValueError as e:
        raise ConfigError(f"[{sc.name}] {e}") from None
    rows = [PROBE_HEADER]
    for e in entries:
        rows.append(",".join((_fmt(e.kappa), _fmt(e.J), _fmt(e.tail), _fmt(e.total),
                              "true" if e.converged else "false", e.terminal_reason)))
        if not args.quiet:
            print(f"kappa={e.kappa:g}: J={e.J:.6g} (tail {e.tail:.3g}) "
                  f"converged={e.converged}")
    (out / "summary.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")
    best = min(entries, key=lambda e: e.J)
    if not args.quiet:
        print(f"argmin kappa = {best.kappa:g}")
    if any(sc_.require_convergence for sc_ in scenarios) and \
            any(not e.converged for e in entries):
        return 3
    return 0


def cmd_list(args) -> int:
    for name in bundled_scenarios():
        print(name)
    return 0


COMMANDS = {
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "compare": cmd_compare,
    "adaptive": cmd_adaptive,
    "probe": cmd_probe,
}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="polarpark",
                                 description="Polar parking scenario runner")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in (*COMMANDS, "list"):
        sp = sub.add_parser(name)
        if name == "list":
            continue
        sp.add_argument("--config", required=True,
                        help="config file path or bundled scenario name")
        sp.add_argument("--out", required=True, help="output directory")
        sp.add_argument("--dt", type=float, default=None, help="override step size")
        sp.add_argument("--t-max", type=float, default=None, help="override horizon")
        sp.add_argument("--quiet", action="store_true")
    args = ap.parse_args(argv)

    if args.command == "list":
        return cmd_list(args)

    try:
        cfg_path = resolve_config(args.config)
        scenarios = parse_config(cfg_path)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        return COMMANDS[args.command](scenarios, out, args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
