"""Kinematics tests: wheel mapping, derivative frame, integrator accuracy."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from la_nav import (
    Action,
    RobotParams,
    RobotPose,
    action_to_wheels,
    integrate_action,
    pose_derivative,
)

PARAMS = RobotParams()  # c=2.8 cm, b=12 cm, omega=2 rad/s, T=0.5 s


def full_circle_params(substeps=100):
    # One driven wheel turns the robot on a circle of radius b/2; a full
    # revolution takes T = 2*pi*b / (c*omega).
    duration = 2 * math.pi * PARAMS.axle_length / (PARAMS.wheel_radius * PARAMS.wheel_speed)
    return RobotParams(action_duration=duration, substeps=substeps)


def rk4_oracle(pose, action, params):
    """Textbook fixed-step RK4 over the full (x, y, theta) state."""
    omega_r, omega_l = action_to_wheels(action, params)
    h = params.action_duration / params.substeps
    x, y, theta = pose.x, pose.y, pose.theta

    def f(state):
        return pose_derivative(RobotPose(*state), omega_l, omega_r, params)

    for _ in range(params.substeps):
        s = (x, y, theta)
        k1 = f(s)
        k2 = f(tuple(v + 0.5 * h * k for v, k in zip(s, k1)))
        k3 = f(tuple(v + 0.5 * h * k for v, k in zip(s, k2)))
        k4 = f(tuple(v + h * k for v, k in zip(s, k3)))
        x, y, theta = (
            v + h / 6.0 * (a + 2 * b_ + 2 * c + d)
            for v, a, b_, c, d in zip(s, k1, k2, k3, k4)
        )
    return RobotPose(x, y, theta)


class TestActionCatalogue:
    def test_ids_and_labels(self):
        assert [a.value for a in Action] == [1, 2, 3, 4, 5, 6]
        assert Action(2).label == "RightForward"
        assert Action(6).label == "LeftBackward"

    @pytest.mark.parametrize(
        "action,expected",
        [
            (Action.FORWARD, (2.0, 2.0)),
            (Action.RIGHT_FORWARD, (0.0, 2.0)),
            (Action.LEFT_FORWARD, (2.0, 0.0)),
            (Action.BACKWARD, (-2.0, -2.0)),
            (Action.RIGHT_BACKWARD, (0.0, -2.0)),
            (Action.LEFT_BACKWARD, (-2.0, 0.0)),
        ],
    )
    def test_wheel_mapping(self, action, expected):
        assert action_to_wheels(action, PARAMS) == expected

    def test_accepts_raw_ids(self):
        assert action_to_wheels(1, PARAMS) == (2.0, 2.0)

    @pytest.mark.parametrize("bad", [0, 7, -1])
    def test_rejects_unknown_ids(self, bad):
        with pytest.raises(ValueError):
            action_to_wheels(bad, PARAMS)


class TestPoseDerivative:
    def test_straight_translation_along_plus_y(self):
        dx, dy, dtheta = pose_derivative(RobotPose(0, 0, 0), 2.0, 2.0, PARAMS)
        assert dx == 0.0
        assert dy == pytest.approx(PARAMS.wheel_radius * 2.0, abs=1e-12)
        assert dtheta == 0.0

    def test_counter_rotation_spins_in_place(self):
        dx, dy, dtheta = pose_derivative(RobotPose(0, 0, 0.7), -1.5, 1.5, PARAMS)
        assert dx == pytest.approx(0.0, abs=1e-12)
        assert dy == pytest.approx(0.0, abs=1e-12)
        assert dtheta == pytest.approx(2 * PARAMS.wheel_radius * 1.5 / PARAMS.axle_length, abs=1e-12)

    def test_quarter_turn_heading_moves_along_minus_x(self):
        dx, dy, dtheta = pose_derivative(RobotPose(0, 0, math.pi / 2), 1.0, 1.0, PARAMS)
        assert dx == pytest.approx(-PARAMS.wheel_radius, abs=1e-12)
        assert dy == pytest.approx(0.0, abs=1e-12)
        assert dtheta == 0.0

    @given(
        theta=st.floats(-10, 10),
        omega_l=st.floats(-5, 5),
        omega_r=st.floats(-5, 5),
    )
    def test_linearity_in_wheel_speeds(self, theta, omega_l, omega_r):
        pose = RobotPose(0, 0, theta)
        dx, dy, dt = pose_derivative(pose, omega_l, omega_r, PARAMS)
        lx, ly, lt = pose_derivative(pose, 1.0, 0.0, PARAMS)
        rx, ry, rt = pose_derivative(pose, 0.0, 1.0, PARAMS)
        assert dx == pytest.approx(omega_l * lx + omega_r * rx, abs=1e-12)
        assert dy == pytest.approx(omega_l * ly + omega_r * ry, abs=1e-12)
        assert dt == pytest.approx(omega_l * lt + omega_r * rt, abs=1e-12)


class TestIntegrateAction:
    def test_straight_line_is_exact(self):
        params = RobotParams(
            wheel_radius=2.8, axle_length=12.0, wheel_speed=1.0, action_duration=1.0, substeps=100
        )
        end = integrate_action(RobotPose(0, 0, 0), Action.FORWARD, params)
        assert end.x == pytest.approx(0.0, abs=1e-9)
        assert end.y == pytest.approx(2.8, abs=1e-9)
        assert end.theta == 0.0

    def test_full_circle_closes(self):
        params = full_circle_params()
        end = integrate_action(RobotPose(0, 0, 0), Action.RIGHT_FORWARD, params)
        assert math.hypot(end.x, end.y) < 1e-6
        assert end.theta == pytest.approx(-2 * math.pi, abs=1e-9)

    def test_zero_wheel_speed_freezes_pose(self):
        params = RobotParams(wheel_speed=0.0)
        start = RobotPose(3.0, -4.0, 1.25)
        assert integrate_action(start, Action.FORWARD, params) == start

    def test_backward_reverses_forward(self):
        start = RobotPose(1.0, 2.0, 0.4)
        mid = integrate_action(start, Action.FORWARD, PARAMS)
        back = integrate_action(mid, Action.BACKWARD, PARAMS)
        assert back.x == pytest.approx(start.x, abs=1e-9)
        assert back.y == pytest.approx(start.y, abs=1e-9)
        assert back.theta == pytest.approx(start.theta, abs=1e-9)

    def test_step_halving_converges_at_fourth_order(self):
        # Quarter-arc endpoint error shrinks ~16x per halving of the step.
        # (A full revolution is unusable here: its quadrature error
        # telescopes to machine noise at any step count.)
        radius = PARAMS.axle_length / 2
        spin = -(PARAMS.wheel_radius / PARAMS.axle_length) * PARAMS.wheel_speed
        duration = (math.pi / 2) / abs(spin)
        errors = {}
        for substeps in (25, 50, 100):
            params = RobotParams(action_duration=duration, substeps=substeps)
            phi = spin * params.action_duration
            exact_x = radius * (1 - math.cos(phi))
            exact_y = -radius * math.sin(phi)
            end = integrate_action(RobotPose(0, 0, 0), Action.RIGHT_FORWARD, params)
            errors[substeps] = math.hypot(end.x - exact_x, end.y - exact_y)
        assert 10 < errors[25] / errors[50] < 24
        assert 10 < errors[50] / errors[100] < 24

    @pytest.mark.parametrize("action", list(Action))
    @pytest.mark.parametrize("theta", [0.0, 0.9, -2.4])
    def test_matches_textbook_rk4(self, action, theta):
        params = RobotParams(substeps=50)
        start = RobotPose(1.5, -0.5, theta)
        fast = integrate_action(start, action, params)
        slow = rk4_oracle(start, action, params)
        assert fast.x == pytest.approx(slow.x, abs=1e-12)
        assert fast.y == pytest.approx(slow.y, abs=1e-12)
        assert fast.theta == pytest.approx(slow.theta, abs=1e-12)

    @given(
        theta=st.floats(-6, 6),
        action=st.sampled_from(list(Action)),
    )
    def test_displacement_bounded_by_drive_speed(self, theta, action):
        end = integrate_action(RobotPose(0, 0, theta), action, PARAMS)
        limit = PARAMS.wheel_radius * PARAMS.wheel_speed * PARAMS.action_duration
        assert math.hypot(end.x, end.y) <= limit + 1e-9


class TestPoseAndParams:
    def test_wrapped_theta(self):
        assert RobotPose(0, 0, 3 * math.pi).wrapped_theta() == pytest.approx(math.pi, abs=1e-12)
        assert RobotPose(0, 0, -0.1).wrapped_theta() == pytest.approx(-0.1, abs=1e-12)
        assert RobotPose(0, 0, math.pi).wrapped_theta() == pytest.approx(math.pi, abs=1e-12)
        assert RobotPose(0, 0, 7 * math.pi / 2).wrapped_theta() == pytest.approx(
            -math.pi / 2, abs=1e-12
        )

    def test_pose_requires_finite_components(self):
        with pytest.raises(ValueError):
            RobotPose(math.nan, 0, 0)
        with pytest.raises(ValueError):
            RobotPose(0, math.inf, 0)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"wheel_radius": 0.0},
            {"axle_length": -1.0},
            {"wheel_speed": -0.5},
            {"action_duration": 0.0},
            {"substeps": 0},
        ],
    )
    def test_params_validation(self, kwargs):
        with pytest.raises(ValueError):
            RobotParams(**kwargs)
