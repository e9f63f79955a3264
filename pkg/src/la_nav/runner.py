"""Episode orchestration, experiment presets and batch campaigns.

One episode runs the learn/act loop: select an action from the current
probabilities, drive the robot for one action duration, resolve collisions,
grade the step by the change in goal distance, update the probabilities,
repeat until the goal is reached or the step budget runs out. Episodes are
fully determined by their configuration and seed; batches replay a config
template across a seed list.
"""

from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .automata import (
    LearningScheme,
    PModelFeedback,
    ProbabilityVector,
    SchemeKind,
    apply_feedback,
    init_uniform,
    select_action,
)
from .errors import ConfigError, InfeasibleWorldError, SimulationError
from .kinematics import ACTION_COUNT, Action, RobotParams, RobotPose, integrate_action
from .world import (
    Bounds,
    CircleObstacle,
    Obstacle,
    World,
    compute_feedback,
    distance_to_goal,
    goal_reached,
    random_goal,
    resolve_motion,
)

RNG_ALGORITHM = "pcg64"
DEFAULT_MAX_STEPS = 5000

# Derived obstacle layout for the blocked-path preset: two discs straddling
# the straight origin-to-goal line at one third and two thirds of the way.
_BLOCKING_RADIUS_CM = 10.0
_BLOCKING_LATERAL_OFFSET_CM = 5.0
_START_CLEARANCE_CM = 0.5
_MAX_WORLD_ATTEMPTS = 10_000


@dataclass(frozen=True, slots=True)
class WorldSpec:
    """World recipe: either an explicit goal or a random-goal directive.

    ``auto_blocking_pair`` derives the two-disc blocking layout from the
    goal instead of using ``obstacles``.
    """

    goal: tuple[float, float] | None = None
    tolerance: float = 2.0
    bounds: Bounds = field(default_factory=Bounds)
    obstacles: tuple[Obstacle, ...] = ()
    min_start_distance: float = 20.0
    auto_blocking_pair: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "obstacles", tuple(self.obstacles))
        if self.goal is not None:
            object.__setattr__(self, "goal", (float(self.goal[0]), float(self.goal[1])))
        if self.tolerance <= 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance!r}")
        if self.min_start_distance < 0:
            raise ValueError(
                f"min start distance must be non-negative, got {self.min_start_distance!r}"
            )
        if self.auto_blocking_pair and self.obstacles:
            raise ValueError("auto_blocking_pair replaces the obstacle list; give one or the other")

    def to_dict(self) -> dict:
        out: dict = {}
        if self.goal is not None:
            out["goal"] = [self.goal[0], self.goal[1]]
        else:
            out["random_goal"] = {"min_start_distance": self.min_start_distance}
        out["tolerance"] = self.tolerance
        out["bounds"] = self.bounds.to_dict()
        out["obstacles"] = "auto" if self.auto_blocking_pair else [o.to_dict() for o in self.obstacles]
        return out


@dataclass(frozen=True, slots=True)
class ExperimentConfig:
    """Everything that determines a run: scheme, robot, world recipe, seed."""

    scheme: LearningScheme
    seed: int
    robot: RobotParams = field(default_factory=RobotParams)
    world: WorldSpec = field(default_factory=WorldSpec)
    max_steps: int = DEFAULT_MAX_STEPS
    feedback_literal_eq10: bool = False
    preset: int | None = None

    def __post_init__(self) -> None:
        if self.max_steps < 1:
            raise ValueError(f"max_steps must be >= 1, got {self.max_steps!r}")
        if self.seed < 0:
            raise ValueError(f"seed must be non-negative, got {self.seed!r}")

    def to_dict(self) -> dict:
        return {
            "preset": self.preset,
            "seed": self.seed,
            "scheme": {
                "kind": self.scheme.kind.value,
                "a": self.scheme.reward_rate,
                "b": self.scheme.penalty_rate,
            },
            "robot": {
                "c": self.robot.wheel_radius,
                "b": self.robot.axle_length,
                "omega": self.robot.wheel_speed,
                "T": self.robot.action_duration,
                "substeps": self.robot.substeps,
            },
            "world": self.world.to_dict(),
            "max_steps": self.max_steps,
            "feedback_literal_eq10": self.feedback_literal_eq10,
        }


def config_digest(config: ExperimentConfig) -> str:
    """Stable hash of the full configuration, seed included."""
    canonical = json.dumps(config.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("ascii")).hexdigest()


class Termination(str, Enum):
    GOAL_REACHED = "goal_reached"
    MAX_STEPS_EXCEEDED = "max_steps_exceeded"


@dataclass(slots=True)
class StepRecord:
    """Telemetry for one loop iteration (1-based step index ``n``)."""

    n: int
    pose_before: RobotPose
    pose_after: RobotPose
    action: Action
    z_draw: float
    flag: PModelFeedback
    d_before: float
    d_after: float
    probs_after: ProbabilityVector
    blocked: bool


@dataclass(frozen=True, slots=True)
class RunRecord:
    """Complete, reproducible trace of one episode."""

    steps: tuple[StepRecord, ...]
    terminated: Termination
    total_steps: int
    seed: int
    config_digest: str
    config: ExperimentConfig
    world: World
    rng_algorithm: str = RNG_ALGORITHM

    @property
    def success(self) -> bool:
        return self.terminated is Termination.GOAL_REACHED

    @property
    def final_pose(self) -> RobotPose:
        if self.steps:
            return self.steps[-1].pose_after
        return RobotPose(0.0, 0.0, 0.0)


def _blocking_pair(goal: tuple[float, float]) -> tuple[CircleObstacle, CircleObstacle]:
    gx, gy = goal
    span = math.hypot(gx, gy)
    ux, uy = gx / span, gy / span
    px, py = -uy, ux
    off = _BLOCKING_LATERAL_OFFSET_CM
    near = CircleObstacle((gx / 3.0 + off * px, gy / 3.0 + off * py), _BLOCKING_RADIUS_CM)
    far = CircleObstacle((2.0 * gx / 3.0 - off * px, 2.0 * gy / 3.0 - off * py), _BLOCKING_RADIUS_CM)
    return near, far


def _pair_fits(goal: tuple[float, float], obstacles: tuple[Obstacle, ...], tolerance: float) -> bool:
    # The start must sit outside both discs and the whole goal-tolerance
    # disc must stay reachable, otherwise the episode can never finish.
    for obs in obstacles:
        if obs.exterior_clearance(0.0, 0.0) <= _START_CLEARANCE_CM:
            return False
        if obs.exterior_clearance(goal[0], goal[1]) <= tolerance:
            return False
    return True


def build_world(spec: WorldSpec, rng: np.random.Generator) -> World:
    """Materialize a :class:`World` from a recipe, consuming ``rng`` draws.

    Random goals are rejection-sampled; with the derived blocking layout the
    goal is resampled until the discs swallow neither the start nor the goal
    tolerance disc.
    """
    if spec.goal is not None:
        obstacles = _blocking_pair(spec.goal) if spec.auto_blocking_pair else spec.obstacles
        if spec.auto_blocking_pair and not _pair_fits(spec.goal, obstacles, spec.tolerance):
            raise InfeasibleWorldError(
                f"blocking pair derived from goal {spec.goal} traps the start or the goal"
            )
        try:
            return World(spec.goal, spec.tolerance, obstacles, spec.bounds)
        except ValueError as exc:
            raise ConfigError("world.goal", str(exc)) from None
    if spec.auto_blocking_pair:
        for _ in range(_MAX_WORLD_ATTEMPTS):
            goal = random_goal(spec.bounds, (), rng, spec.min_start_distance)
            obstacles = _blocking_pair(goal)
            if _pair_fits(goal, obstacles, spec.tolerance):
                return World(goal, spec.tolerance, obstacles, spec.bounds)
        raise InfeasibleWorldError(
            f"no goal admitting the blocking layout after {_MAX_WORLD_ATTEMPTS} samples"
        )
    goal = random_goal(spec.bounds, spec.obstacles, rng, spec.min_start_distance)
    return World(goal, spec.tolerance, spec.obstacles, spec.bounds)


def _check_runnable(config: ExperimentConfig, world: World) -> None:
    if config.scheme.kind is SchemeKind.S_MODEL:
        raise ConfigError(
            "scheme.kind", "the continuous-feedback scheme cannot drive the flag-feedback loop"
        )
    if not world.bounds.contains(0.0, 0.0):
        raise ConfigError("world.bounds", "bounds must contain the start position (0, 0)")
    for obs in world.obstacles:
        if obs.contains(0.0, 0.0):
            raise ConfigError("world.obstacles", "start position (0, 0) lies inside an obstacle")


def run_episode(config: ExperimentConfig) -> RunRecord:
    """Run one full episode; deterministic for a given config and seed."""
    rng = np.random.Generator(np.random.PCG64(config.seed))
    world = build_world(config.world, rng)
    _check_runnable(config, world)

    scheme = config.scheme
    params = config.robot
    literal = config.feedback_literal_eq10
    probs = init_uniform(ACTION_COUNT)
    pose = RobotPose(0.0, 0.0, 0.0)
    d_prev = distance_to_goal(pose, world)
    steps: list[StepRecord] = []
    terminated = Termination.MAX_STEPS_EXCEEDED

    if goal_reached(pose, world):
        terminated = Termination.GOAL_REACHED
    else:
        draw = rng.random
        for n in range(1, config.max_steps + 1):
            z = float(draw())
            action = Action(select_action(probs, z))
            proposed = integrate_action(pose, action, params)
            final, blocked = resolve_motion(pose, proposed, world)
            d_after = distance_to_goal(final, world)
            flag = compute_feedback(d_after, d_prev, literal=literal)
            probs = apply_feedback(probs, int(action), flag, scheme)
            steps.append(
                StepRecord(
                    n=n,
                    pose_before=pose,
                    pose_after=final,
                    action=action,
                    z_draw=z,
                    flag=flag,
                    d_before=d_prev,
                    d_after=d_after,
                    probs_after=probs,
                    blocked=blocked,
                )
            )
            pose = final
            d_prev = d_after
            if goal_reached(pose, world):
                terminated = Termination.GOAL_REACHED
                break

    return RunRecord(
        steps=tuple(steps),
        terminated=terminated,
        total_steps=len(steps),
        seed=config.seed,
        config_digest=config_digest(config),
        config=config,
        world=world,
    )


@dataclass(frozen=True, slots=True)
class SeedFailure:
    """A seed whose world could not be materialized; the batch continues."""

    seed: int
    error: str


@dataclass(frozen=True, slots=True)
class BatchSummary:
    runs: int
    config_failures: int
    success_count: int
    success_rate: float
    steps_mean: float | None
    steps_median: float | None
    steps_p10: float | None
    steps_p25: float | None
    steps_p75: float | None
    steps_p90: float | None
    steps_min: int | None
    steps_max: int | None

    def to_dict(self) -> dict:
        return {
            "runs": self.runs,
            "config_failures": self.config_failures,
            "success_count": self.success_count,
            "success_rate": self.success_rate,
            "steps": {
                "mean": self.steps_mean,
                "median": self.steps_median,
                "p10": self.steps_p10,
                "p25": self.steps_p25,
                "p75": self.steps_p75,
                "p90": self.steps_p90,
                "min": self.steps_min,
                "max": self.steps_max,
            },
        }


@dataclass(frozen=True, slots=True)
class BatchResult:
    records: tuple[RunRecord, ...]
    failures: tuple[SeedFailure, ...]
    summary: BatchSummary


def summarize(records: tuple[RunRecord, ...], failures: tuple[SeedFailure, ...] = ()) -> BatchSummary:
    """Aggregate step-count statistics over completed runs."""
    if records:
        counts = np.array([rec.total_steps for rec in records], dtype=float)
        successes = sum(1 for rec in records if rec.success)
        p10, p25, p75, p90 = (float(v) for v in np.percentile(counts, [10, 25, 75, 90]))
        stats = {
            "steps_mean": float(counts.mean()),
            "steps_median": float(np.median(counts)),
            "steps_p10": p10,
            "steps_p25": p25,
            "steps_p75": p75,
            "steps_p90": p90,
            "steps_min": int(counts.min()),
            "steps_max": int(counts.max()),
        }
        rate = successes / len(records)
    else:
        successes = 0
        rate = 0.0
        stats = {k: None for k in (
            "steps_mean", "steps_median", "steps_p10", "steps_p25",
            "steps_p75", "steps_p90", "steps_min", "steps_max",
        )}
    return BatchSummary(
        runs=len(records),
        config_failures=len(failures),
        success_count=successes,
        success_rate=rate,
        **stats,
    )


def run_batch(
    config_template: ExperimentConfig, seeds: list[int], parallelism: int = 1
) -> BatchResult:
    """Run one episode per seed, order-stable in the seed list's order.

    Each episode owns its generator, so results are independent of the
    worker count. Seeds whose world cannot be built become
    :class:`SeedFailure` entries instead of aborting the batch.
    """
    if not seeds:
        raise ValueError("seed list must not be empty")
    if parallelism < 1:
        raise ValueError(f"parallelism must be >= 1, got {parallelism!r}")

    def one(seed: int) -> RunRecord | SeedFailure:
        try:
            return run_episode(replace(config_template, seed=seed))
        except SimulationError as exc:
            return SeedFailure(seed=seed, error=str(exc))

    if parallelism == 1:
        outcomes = [one(s) for s in seeds]
    else:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            outcomes = list(pool.map(one, seeds))

    records = tuple(o for o in outcomes if isinstance(o, RunRecord))
    failures = tuple(o for o in outcomes if isinstance(o, SeedFailure))
    return BatchResult(records=records, failures=failures, summary=summarize(records, failures))


_PRESET_SCHEMES = {
    1: LearningScheme.lrp(0.7),
    2: LearningScheme.lri(0.7),
    3: LearningScheme.penalty_only(0.7),
    4: LearningScheme.lrp(0.7),
}

PRESET_DESCRIPTIONS = {
    1: "reward and penalty, open workspace",
    2: "reward only (failures ignored), open workspace",
    3: "penalty only (successes ignored), open workspace",
    4: "reward and penalty, two discs blocking the direct path",
}

PRESET_IDS = (1, 2, 3, 4)


def preset_config(
    preset: int,
    seed: int,
    *,
    max_steps: int = DEFAULT_MAX_STEPS,
    feedback_literal_eq10: bool = False,
    robot: RobotParams | None = None,
) -> ExperimentConfig:
    """Expand one of the four built-in experiment presets."""
    if preset not in _PRESET_SCHEMES:
        raise ConfigError("preset", f"unknown preset {preset!r}; valid presets are 1-4")
    return ExperimentConfig(
        scheme=_PRESET_SCHEMES[preset],
        seed=seed,
        robot=robot if robot is not None else RobotParams(),
        world=WorldSpec(auto_blocking_pair=(preset == 4)),
        max_steps=max_steps,
        feedback_literal_eq10=feedback_literal_eq10,
        preset=preset,
    )
