"""Differential-drive kinematics and the discrete action catalogue.

The robot is a two-wheel differential drive. With wheel radius ``c``,
axle length ``b``, heading ``theta`` and wheel angular velocities
``omega_l`` / ``omega_r``, the pose evolves as

    dx/dt     = -(c * sin(theta) / 2) * (omega_l + omega_r)
    dy/dt     =  (c * cos(theta) / 2) * (omega_l + omega_r)
    dtheta/dt =  (c / b) * (omega_r - omega_l)

so forward motion at theta = 0 points along +y and positive theta turns
to the left. Six discrete actions drive the wheels at a fixed speed for a
fixed duration each.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from functools import lru_cache

import numpy as np

ACTION_COUNT = 6


@dataclass(frozen=True, slots=True)
class RobotPose:
    """Planar pose: position in cm, heading in radians (accumulated, unwrapped)."""

    x: float
    y: float
    theta: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.theta)):
            raise ValueError(f"pose components must be finite, got {self!r}")

    def wrapped_theta(self) -> float:
        """Heading folded into (-pi, pi]."""
        w = self.theta % (2.0 * math.pi)
        if w > math.pi:
            w -= 2.0 * math.pi
        return w


@dataclass(frozen=True, slots=True)
class RobotParams:
    """Physical and integration parameters.

    ``wheel_radius`` and ``axle_length`` are in cm, ``wheel_speed`` in
    rad/s (magnitude used by every driven wheel), ``action_duration`` in
    seconds, ``substeps`` is the fixed Runge-Kutta step count per action.
    """

    wheel_radius: float = 2.8
    axle_length: float = 12.0
    wheel_speed: float = 2.0
    action_duration: float = 0.5
    substeps: int = 100

    def __post_init__(self) -> None:
        if self.wheel_radius <= 0:
            raise ValueError(f"wheel radius must be positive, got {self.wheel_radius!r}")
        if self.axle_length <= 0:
            raise ValueError(f"axle length must be positive, got {self.axle_length!r}")
        if self.wheel_speed < 0:
            raise ValueError(f"wheel speed must be non-negative, got {self.wheel_speed!r}")
        if self.action_duration <= 0:
            raise ValueError(f"action duration must be positive, got {self.action_duration!r}")
        if not isinstance(self.substeps, int) or self.substeps < 1:
            raise ValueError(f"substeps must be a positive integer, got {self.substeps!r}")


class Action(IntEnum):
    """The six drive actions; ids are the 1-based catalogue order."""

    FORWARD = 1
    RIGHT_FORWARD = 2
    LEFT_FORWARD = 3
    BACKWARD = 4
    RIGHT_BACKWARD = 5
    LEFT_BACKWARD = 6

    @property
    def label(self) -> str:
        return _LABELS[self]


_LABELS = {
    Action.FORWARD: "Forward",
    Action.RIGHT_FORWARD: "RightForward",
    Action.LEFT_FORWARD: "LeftForward",
    Action.BACKWARD: "Backward",
    Action.RIGHT_BACKWARD: "RightBackward",
    Action.LEFT_BACKWARD: "LeftBackward",
}

# (right wheel sign, left wheel sign) per action: a 0 freezes that wheel,
# driving one wheel alone turns toward the frozen side.
_WHEEL_SIGNS = {
    Action.FORWARD: (1.0, 1.0),
    Action.RIGHT_FORWARD: (0.0, 1.0),
    Action.LEFT_FORWARD: (1.0, 0.0),
    Action.BACKWARD: (-1.0, -1.0),
    Action.RIGHT_BACKWARD: (0.0, -1.0),
    Action.LEFT_BACKWARD: (-1.0, 0.0),
}


def action_to_wheels(action: Action | int, params: RobotParams) -> tuple[float, float]:
    """Signed wheel velocities ``(omega_r, omega_l)`` in rad/s for an action."""
    try:
        action = Action(action)
    except ValueError:
        raise ValueError(f"unknown action id {action!r}") from None
    right, left = _WHEEL_SIGNS[action]
    return right * params.wheel_speed, left * params.wheel_speed


def pose_derivative(
    pose: RobotPose, omega_l: float, omega_r: float, params: RobotParams
) -> tuple[float, float, float]:
    """Instantaneous ``(dx, dy, dtheta)`` in cm/s and rad/s."""
    half_radius = 0.5 * params.wheel_radius
    drive = omega_l + omega_r
    dx = -half_radius * math.sin(pose.theta) * drive
    dy = half_radius * math.cos(pose.theta) * drive
    dtheta = (params.wheel_radius / params.axle_length) * (omega_r - omega_l)
    return dx, dy, dtheta


@lru_cache(maxsize=128)
def _stage_tables(spin_step: float, step: float, substeps: int) -> tuple[np.ndarray, np.ndarray]:
    # Heading offsets and quadrature weights shared by every classic RK4
    # substep: stage headings sit at half-step spacing, and the stage
    # combination reduces to Simpson weights because the translational
    # derivative depends on the heading only.
    offsets = (0.5 * spin_step) * np.arange(2 * substeps + 1)
    weights = np.full(2 * substeps + 1, 2.0)
    weights[1::2] = 4.0
    weights[0] = 1.0
    weights[-1] = 1.0
    weights *= step / 6.0
    return offsets, weights


def integrate_action(pose: RobotPose, action: Action | int, params: RobotParams) -> RobotPose:
    """Advance the pose by one action applied for ``params.action_duration``.

    Fixed-step 4th-order Runge-Kutta with ``params.substeps`` equal steps;
    the heading rate is constant during an action, so the stage values are
    evaluated on the exact heading profile. Deterministic for fixed inputs.
    """
    omega_r, omega_l = action_to_wheels(action, params)
    spin = (params.wheel_radius / params.axle_length) * (omega_r - omega_l)
    speed = 0.5 * params.wheel_radius * (omega_l + omega_r)
    step = params.action_duration / params.substeps
    offsets, weights = _stage_tables(spin * step, step, params.substeps)
    angles = pose.theta + offsets
    dx = -speed * float(np.dot(weights, np.sin(angles)))
    dy = speed * float(np.dot(weights, np.cos(angles)))
    return RobotPose(
        pose.x + dx,
        pose.y + dy,
        pose.theta + spin * params.action_duration,
    )
