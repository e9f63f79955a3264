"""Workspace geometry, goal feedback and motion blocking.

The world is an axis-aligned rectangular workspace holding one goal point,
a goal tolerance, and optional obstacles (circles and axis-aligned
rectangles). Feedback is a binary flag derived from whether a step reduced
the straight-line distance to the goal. Moves that would cross an obstacle
or leave the workspace are rejected wholesale: the robot stays put.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .automata import FAILURE, SUCCESS, PModelFeedback
from .errors import InfeasibleWorldError
from .kinematics import RobotPose

GOAL_TOLERANCE_CM = 2.0
DEFAULT_MIN_START_DISTANCE_CM = 20.0
_MAX_SAMPLE_ATTEMPTS = 10_000

# Interior chord samples for obstacle tests; the final fraction lands on the
# proposed endpoint, which is additionally checked with exact coordinates.
_CHORD_FRACTIONS = np.arange(1, 33) / 32.0


@dataclass(frozen=True, slots=True)
class Bounds:
    """Axis-aligned workspace rectangle in cm; membership is boundary-inclusive."""

    x_min: float = -100.0
    y_min: float = -100.0
    x_max: float = 100.0
    y_max: float = 100.0

    def __post_init__(self) -> None:
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError(f"degenerate bounds {self!r}")

    def contains(self, x: float, y: float) -> bool:
        return self.x_min <= x <= self.x_max and self.y_min <= y <= self.y_max

    def to_dict(self) -> dict:
        return {"min": [self.x_min, self.y_min], "max": [self.x_max, self.y_max]}


@dataclass(frozen=True, slots=True)
class CircleObstacle:
    """Solid disc; points strictly inside the radius are blocked."""

    center: tuple[float, float]
    radius: float

    def __post_init__(self) -> None:
        if self.radius <= 0:
            raise ValueError(f"circle radius must be positive, got {self.radius!r}")
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))

    def contains(self, x: float, y: float) -> bool:
        dx = x - self.center[0]
        dy = y - self.center[1]
        return dx * dx + dy * dy < self.radius * self.radius

    def any_contains(self, xs: np.ndarray, ys: np.ndarray) -> bool:
        dx = xs - self.center[0]
        dy = ys - self.center[1]
        return bool(np.any(dx * dx + dy * dy < self.radius * self.radius))

    def exterior_clearance(self, x: float, y: float) -> float:
        """Distance from a point to the disc surface; 0 on or inside."""
        return max(0.0, math.hypot(x - self.center[0], y - self.center[1]) - self.radius)

    def to_dict(self) -> dict:
        return {"shape": "circle", "center": list(self.center), "radius": self.radius}


@dataclass(frozen=True, slots=True)
class RectObstacle:
    """Solid axis-aligned box; points strictly inside are blocked."""

    min_corner: tuple[float, float]
    max_corner: tuple[float, float]

    def __post_init__(self) -> None:
        object.__setattr__(self, "min_corner", (float(self.min_corner[0]), float(self.min_corner[1])))
        object.__setattr__(self, "max_corner", (float(self.max_corner[0]), float(self.max_corner[1])))
        if not (self.min_corner[0] < self.max_corner[0] and self.min_corner[1] < self.max_corner[1]):
            raise ValueError(f"degenerate rectangle {self!r}")

    def contains(self, x: float, y: float) -> bool:
        return (
            self.min_corner[0] < x < self.max_corner[0]
            and self.min_corner[1] < y < self.max_corner[1]
        )

    def any_contains(self, xs: np.ndarray, ys: np.ndarray) -> bool:
        inside = (
            (xs > self.min_corner[0])
            & (xs < self.max_corner[0])
            & (ys > self.min_corner[1])
            & (ys < self.max_corner[1])
        )
        return bool(np.any(inside))

    def exterior_clearance(self, x: float, y: float) -> float:
        """Distance from a point to the box surface; 0 on or inside."""
        dx = max(self.min_corner[0] - x, 0.0, x - self.max_corner[0])
        dy = max(self.min_corner[1] - y, 0.0, y - self.max_corner[1])
        return math.hypot(dx, dy)

    def to_dict(self) -> dict:
        return {"shape": "rect", "min": list(self.min_corner), "max": list(self.max_corner)}


Obstacle = CircleObstacle | RectObstacle


@dataclass(frozen=True, slots=True)
class World:
    """Immutable workspace: goal point, tolerance, obstacles, bounds."""

    goal: tuple[float, float]
    goal_tolerance: float = GOAL_TOLERANCE_CM
    obstacles: tuple[Obstacle, ...] = ()
    bounds: Bounds = field(default_factory=Bounds)

    def __post_init__(self) -> None:
        object.__setattr__(self, "goal", (float(self.goal[0]), float(self.goal[1])))
        object.__setattr__(self, "obstacles", tuple(self.obstacles))
        if self.goal_tolerance <= 0:
            raise ValueError(f"goal tolerance must be positive, got {self.goal_tolerance!r}")
        gx, gy = self.goal
        if not self.bounds.contains(gx, gy):
            raise ValueError(f"goal {self.goal} outside bounds {self.bounds!r}")
        for obs in self.obstacles:
            if obs.contains(gx, gy):
                raise ValueError(f"goal {self.goal} lies inside obstacle {obs!r}")

    def to_dict(self) -> dict:
        return {
            "goal": [self.goal[0], self.goal[1]],
            "tolerance": self.goal_tolerance,
            "bounds": self.bounds.to_dict(),
            "obstacles": [obs.to_dict() for obs in self.obstacles],
        }


def random_goal(
    bounds: Bounds,
    obstacles: tuple[Obstacle, ...] | list,
    rng: np.random.Generator,
    min_start_distance: float = DEFAULT_MIN_START_DISTANCE_CM,
) -> tuple[float, float]:
    """Sample a goal uniformly over the bounds.

    Candidates inside an obstacle or closer than ``min_start_distance`` to
    the origin (the robot's start) are rejected and redrawn. Deterministic
    for a given generator state.
    """
    for _ in range(_MAX_SAMPLE_ATTEMPTS):
        x = rng.uniform(bounds.x_min, bounds.x_max)
        y = rng.uniform(bounds.y_min, bounds.y_max)
        if math.hypot(x, y) < min_start_distance:
            continue
        if any(obs.contains(x, y) for obs in obstacles):
            continue
        return float(x), float(y)
    raise InfeasibleWorldError(
        f"no feasible goal after {_MAX_SAMPLE_ATTEMPTS} samples "
        f"(bounds {bounds!r}, {len(tuple(obstacles))} obstacles, "
        f"min start distance {min_start_distance})"
    )


def distance_to_goal(pose: RobotPose, world: World) -> float:
    """Euclidean distance in cm from the pose position to the goal."""
    return math.hypot(pose.x - world.goal[0], pose.y - world.goal[1])


def compute_feedback(d_now: float, d_prev: float, literal: bool = False) -> PModelFeedback:
    """Binary flag for one step: success when the goal distance shrank.

    ``literal`` inverts the comparison (success when the distance did not
    shrink); it exists for comparison runs and is off by default. Ties are
    never a success in the default mode: standing still earns a failure.
    """
    if d_now < 0 or d_prev < 0:
        raise ValueError(f"distances must be non-negative, got {d_now!r}, {d_prev!r}")
    improved = d_now < d_prev
    if literal:
        return FAILURE if improved else SUCCESS
    return SUCCESS if improved else FAILURE


def goal_reached(pose: RobotPose, world: World) -> bool:
    """True when the pose is within the goal tolerance (boundary inclusive)."""
    return distance_to_goal(pose, world) <= world.goal_tolerance


def resolve_motion(
    start: RobotPose, proposed: RobotPose, world: World
) -> tuple[RobotPose, bool]:
    """Accept or wholly reject a proposed move.

    The straight chord from ``start`` to ``proposed`` is sampled at 32
    points plus the exact endpoint; if any sample falls inside an obstacle,
    or the endpoint leaves the bounds, the move is rejected and the robot
    stays at ``start``. The bounds are convex, so only the endpoint needs a
    bounds test.
    """
    for obs in world.obstacles:
        if obs.contains(start.x, start.y):
            raise ValueError(f"start pose ({start.x}, {start.y}) lies inside obstacle {obs!r}")
    if not world.bounds.contains(proposed.x, proposed.y):
        return start, True
    if world.obstacles:
        xs = start.x + _CHORD_FRACTIONS * (proposed.x - start.x)
        ys = start.y + _CHORD_FRACTIONS * (proposed.y - start.y)
        for obs in world.obstacles:
            if obs.contains(proposed.x, proposed.y) or obs.any_contains(xs, ys):
                return start, True
    return proposed, False
