import math
import random

import pytest

from polarpark import (
    CartesianPose,
    ControlInput,
    ControllerConfig,
    PolarState,
    Quadratic,
    SimParams,
    SlipParams,
    cartesian_dynamics,
    from_polar,
    integrate,
    optimal_feedback,
    polar_dynamics,
    slip_dynamics,
    to_polar,
)
from polarpark.model import wrap_angle

PI = math.pi


class TestToPolar:
    def test_on_positive_x_axis(self):
        xi = to_polar(CartesianPose(1.0, 0.0, 0.0))
        assert xi.rho == pytest.approx(1.0, abs=1e-15)
        assert xi.delta == pytest.approx(-PI, abs=1e-15)
        assert xi.gamma == pytest.approx(-PI, abs=1e-15)

    def test_on_positive_y_axis(self):
        xi = to_polar(CartesianPose(0.0, 1.0, 0.0))
        assert xi.rho == pytest.approx(1.0, abs=1e-15)
        assert xi.delta == pytest.approx(-PI / 2, abs=1e-15)
        assert xi.gamma == pytest.approx(-PI / 2, abs=1e-15)

    def test_heading_aligned_with_bearing(self):
        xi = to_polar(CartesianPose(0.0, 1.0, PI / 2))
        assert xi.rho == pytest.approx(1.0, abs=1e-15)
        assert xi.delta == pytest.approx(-PI / 2, abs=1e-15)
        assert xi.gamma == pytest.approx(-PI, abs=1e-15)

    def test_rejects_origin(self):
        with pytest.raises(ValueError):
            to_polar(CartesianPose(0.0, 0.0, 1.0))

    def test_angle_ranges_on_random_poses(self):
        rng = random.Random(987)
        for _ in range(100_000):
            x = rng.uniform(-10, 10)
            y = rng.uniform(-10, 10)
            if x * x + y * y < 1e-12:
                continue
            xi = to_polar(CartesianPose(x, y, rng.uniform(-4 * PI, 4 * PI)))
            assert -PI <= xi.delta < PI
            assert -PI <= xi.gamma < PI

    def test_round_trip(self):
        rng = random.Random(321)
        for _ in range(10_000):
            x = rng.uniform(-10, 10)
            y = rng.uniform(-10, 10)
            if x * x + y * y < 1e-12:
                continue
            pose = CartesianPose(x, y, rng.uniform(-4 * PI, 4 * PI))
            back = from_polar(to_polar(pose))
            assert back.x == pytest.approx(pose.x, abs=1e-12)
            assert back.y == pytest.approx(pose.y, abs=1e-12)
            assert wrap_angle(back.theta - pose.theta) == pytest.approx(0.0, abs=1e-12)


class TestDynamics:
    def test_polar_straight_approach(self):
        d = polar_dynamics(PolarState(1.0, 0.0, 0.0), u1=1.0, omega=0.0)
        assert d == pytest.approx((-1.0, 0.0, 0.0), abs=1e-15)

    def test_polar_perpendicular_sight_line(self):
        d = polar_dynamics(PolarState(2.0, 0.0, PI / 2), u1=1.0, omega=0.0)
        assert d == pytest.approx((0.0, 1.0, 1.0), abs=1e-15)

    def test_polar_steering_enters_gamma_only(self):
        d = polar_dynamics(PolarState(2.0, 0.0, PI / 2), u1=1.0, omega=1.0)
        assert d == pytest.approx((0.0, 1.0, 0.0), abs=1e-15)

    def test_state_type_rejects_nonpositive_rho(self):
        with pytest.raises(ValueError):
            PolarState(0.0, 0.0, 0.0)
        with pytest.raises(ValueError):
            PolarState(-1.0, 0.0, 0.0)

    def test_slip_reduces_to_nominal_at_unit_coefficients(self):
        d = slip_dynamics(PolarState(1.0, 0.0, 0.0), ControlInput(1.0, 0.0), SlipParams(1.0, 1.0))
        assert d == pytest.approx((-1.0, 0.0, 0.0), abs=1e-15)

    def test_slip_linear_in_b1(self):
        d = slip_dynamics(PolarState(1.0, 0.0, 0.0), ControlInput(1.0, 0.0), SlipParams(0.5, 1.0))
        assert d == pytest.approx((-0.5, 0.0, 0.0), abs=1e-15)

    def test_slip_divides_velocity_by_rho(self):
        d = slip_dynamics(PolarState(2.0, 0.0, PI / 2), ControlInput(2.0, 1.0), SlipParams(1.0, 0.5))
        assert d == pytest.approx((0.0, 1.0, 0.5), abs=1e-15)

    def test_slip_rejects_nonpositive_coefficients(self):
        with pytest.raises(ValueError):
            SlipParams(0.0, 1.0)
        with pytest.raises(ValueError):
            SlipParams(1.0, -2.0)

    def test_slip_against_polar_on_random_states(self):
        rng = random.Random(55)
        ones = SlipParams(1.0, 1.0)
        for _ in range(1000):
            xi = PolarState(rng.uniform(0.1, 5.0), rng.uniform(-3, 3), rng.uniform(-3, 3))
            v, om = rng.uniform(-2, 2), rng.uniform(-2, 2)
            ds = slip_dynamics(xi, ControlInput(v, om), ones)
            dp = polar_dynamics(xi, v / xi.rho, om)
            for a, b in zip(ds, dp):
                assert abs(a - b) <= 1e-15 * max(1.0, abs(a))

    def test_cartesian_examples(self):
        assert cartesian_dynamics(CartesianPose(0, 0, 0), ControlInput(1, 0)) == \
            pytest.approx((1.0, 0.0, 0.0))
        assert cartesian_dynamics(CartesianPose(0, 0, PI / 2), ControlInput(1, 0)) == \
            pytest.approx((0.0, 1.0, 0.0), abs=1e-15)
        assert cartesian_dynamics(CartesianPose(0, 0, 0), ControlInput(0, 1)) == \
            pytest.approx((0.0, 0.0, 1.0))


def test_cartesian_and_polar_closed_loops_agree():
    """Integrating the pose and converting must track the polar integration."""
    cfg = ControllerConfig(Quadratic(), Quadratic(), 1.0, 1.0, variant="optimal")
    xi0 = PolarState(1.0, -PI / 2, -PI / 2)
    dt, t_max = 1e-3, 10.0
    traj = integrate(xi0, cfg, SimParams(dt=dt, t_max=t_max, stop_norm=0.0))

    pose = from_polar(xi0)
    x, y, th = pose.x, pose.y, pose.theta

    def rhs(x, y, th):
        u = optimal_feedback(to_polar(CartesianPose(x, y, th)), cfg)
        return (u.v * math.cos(th), u.v * math.sin(th), u.omega)

    n = int(round(t_max / dt))
    for _ in range(n):
        k1 = rhs(x, y, th)
        k2 = rhs(x + 0.5 * dt * k1[0], y + 0.5 * dt * k1[1], th + 0.5 * dt * k1[2])
        k3 = rhs(x + 0.5 * dt * k2[0], y + 0.5 * dt * k2[1], th + 0.5 * dt * k2[2])
        k4 = rhs(x + dt * k3[0], y + dt * k3[1], th + dt * k3[2])
        x += dt / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        y += dt / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        th += dt / 6 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])

    xi_cart = to_polar(CartesianPose(x, y, th))
    xi_polar = traj.final.xi
    assert xi_cart.rho == pytest.approx(xi_polar.rho, abs=1e-6)
    assert wrap_angle(xi_cart.delta - xi_polar.delta) == pytest.approx(0.0, abs=1e-6)
    assert wrap_angle(xi_cart.gamma - xi_polar.gamma) == pytest.approx(0.0, abs=1e-6)
