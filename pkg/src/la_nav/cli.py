"""Command-line surface: JSON configs, presets, artifact emission.

Verbs:

* ``run``     one episode, writing trajectory.csv, probs.csv, summary.json
              and plot.svg into the output directory
* ``batch``   one episode per seed into per-seed subdirectories plus a
              batch_summary.json
* ``presets`` list the built-in experiment presets

Identical invocations (flags + config + seed) produce byte-identical CSV
and JSON outputs; floats are written with shortest round-trip formatting.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .automata import LearningScheme, SchemeKind
from .errors import ConfigError, SimulationError
from .kinematics import ACTION_COUNT, RobotParams
from .runner import (
    PRESET_DESCRIPTIONS,
    PRESET_IDS,
    ExperimentConfig,
    RunRecord,
    WorldSpec,
    preset_config,
    run_batch,
    run_episode,
)
from .world import (
    DEFAULT_MIN_START_DISTANCE_CM,
    Bounds,
    CircleObstacle,
    RectObstacle,
    distance_to_goal,
)

SEED_ENV_VAR = "LA_NAV_SEED"

_TOP_KEYS = {"preset", "seed", "scheme", "robot", "world", "max_steps", "feedback_literal_eq10"}
_SCHEME_KEYS = {"kind", "a", "b"}
_ROBOT_KEYS = {"c", "b", "omega", "T", "substeps"}
_WORLD_KEYS = {"goal", "random_goal", "tolerance", "bounds", "obstacles"}
_BOUNDS_KEYS = {"min", "max"}
_CIRCLE_KEYS = {"shape", "center", "radius"}
_RECT_KEYS = {"shape", "min", "max"}


@dataclass(frozen=True, slots=True)
class RunArtifacts:
    """Paths of the four files emitted for one run."""

    trajectory_csv: Path
    probs_csv: Path
    summary_json: Path
    plot_svg: Path


# ---------------------------------------------------------------------------
# config parsing

def _reject_unknown(mapping: dict, allowed: set, path: str) -> None:
    for key in mapping:
        if key not in allowed:
            where = f"{path}.{key}" if path else str(key)
            raise ConfigError(where, f"unknown key (allowed: {', '.join(sorted(allowed))})")


def _as_number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(path, f"expected a number, got {value!r}")
    return float(value)


def _as_int(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(path, f"expected an integer, got {value!r}")
    return value


def _as_bool(value, path: str) -> bool:
    if not isinstance(value, bool):
        raise ConfigError(path, f"expected true/false, got {value!r}")
    return value


def _as_point(value, path: str) -> tuple[float, float]:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ConfigError(path, f"expected [x, y], got {value!r}")
    return _as_number(value[0], f"{path}[0]"), _as_number(value[1], f"{path}[1]")


def _deep_merge(base: dict, override: dict) -> dict:
    out = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _deep_merge(out[key], value)
        else:
            out[key] = value
    return out


def _build_scheme(data: dict) -> LearningScheme:
    _reject_unknown(data, _SCHEME_KEYS, "scheme")
    kind_raw = data.get("kind", "general")
    try:
        kind = SchemeKind(kind_raw)
    except ValueError:
        valid = ", ".join(k.value for k in SchemeKind)
        raise ConfigError("scheme.kind", f"unknown kind {kind_raw!r} (valid: {valid})") from None

    a = _as_number(data["a"], "scheme.a") if "a" in data else None
    b = _as_number(data["b"], "scheme.b") if "b" in data else None
    if a is not None and not 0.0 <= a <= 1.0:
        raise ConfigError("scheme.a", f"must be within [0, 1], got {a}")
    if b is not None and not 0.0 <= b <= 1.0:
        raise ConfigError("scheme.b", f"must be within [0, 1], got {b}")

    if kind is SchemeKind.LRP:
        if a is None and b is None:
            raise ConfigError("scheme.a", "reward-penalty scheme needs a rate")
        a = a if a is not None else b
        b = b if b is not None else a
    elif kind is SchemeKind.LRI:
        if a is None:
            raise ConfigError("scheme.a", "reward-inaction scheme needs a reward rate")
        b = b if b is not None else 0.0
    elif kind is SchemeKind.PENALTY_ONLY:
        if b is None:
            raise ConfigError("scheme.b", "penalty-only scheme needs a penalty rate")
        a = a if a is not None else 0.0
    elif kind is SchemeKind.S_MODEL:
        if a is None:
            raise ConfigError("scheme.a", "continuous-feedback scheme needs a learning rate")
        b = 0.0
    else:
        if a is None or b is None:
            raise ConfigError("scheme", "general scheme needs both 'a' and 'b'")
    try:
        return LearningScheme(kind, a, b)
    except ValueError as exc:
        raise ConfigError("scheme", str(exc)) from None


def _build_robot(data: dict) -> RobotParams:
    _reject_unknown(data, _ROBOT_KEYS, "robot")
    defaults = RobotParams()
    try:
        return RobotParams(
            wheel_radius=_as_number(data["c"], "robot.c") if "c" in data else defaults.wheel_radius,
            axle_length=_as_number(data["b"], "robot.b") if "b" in data else defaults.axle_length,
            wheel_speed=_as_number(data["omega"], "robot.omega") if "omega" in data else defaults.wheel_speed,
            action_duration=_as_number(data["T"], "robot.T") if "T" in data else defaults.action_duration,
            substeps=_as_int(data["substeps"], "robot.substeps") if "substeps" in data else defaults.substeps,
        )
    except ValueError as exc:
        raise ConfigError("robot", str(exc)) from None


def _build_obstacle(data, index: int):
    path = f"world.obstacles[{index}]"
    if not isinstance(data, dict):
        raise ConfigError(path, f"expected an object, got {data!r}")
    shape = data.get("shape")
    try:
        if shape == "circle":
            _reject_unknown(data, _CIRCLE_KEYS, path)
            return CircleObstacle(
                center=_as_point(data.get("center"), f"{path}.center"),
                radius=_as_number(data.get("radius"), f"{path}.radius"),
            )
        if shape == "rect":
            _reject_unknown(data, _RECT_KEYS, path)
            return RectObstacle(
                min_corner=_as_point(data.get("min"), f"{path}.min"),
                max_corner=_as_point(data.get("max"), f"{path}.max"),
            )
    except ValueError as exc:
        raise ConfigError(path, str(exc)) from None
    raise ConfigError(f"{path}.shape", f"expected 'circle' or 'rect', got {shape!r}")


def _build_bounds(data: dict) -> Bounds:
    _reject_unknown(data, _BOUNDS_KEYS, "world.bounds")
    if "min" not in data or "max" not in data:
        raise ConfigError("world.bounds", "needs both 'min' and 'max' corners")
    lo = _as_point(data["min"], "world.bounds.min")
    hi = _as_point(data["max"], "world.bounds.max")
    try:
        return Bounds(lo[0], lo[1], hi[0], hi[1])
    except ValueError as exc:
        raise ConfigError("world.bounds", str(exc)) from None


def _build_world_spec(data: dict) -> WorldSpec:
    _reject_unknown(data, _WORLD_KEYS, "world")
    if "goal" in data and "random_goal" in data:
        raise ConfigError("world", "give either 'goal' or 'random_goal', not both")

    goal = _as_point(data["goal"], "world.goal") if "goal" in data else None
    min_start = DEFAULT_MIN_START_DISTANCE_CM
    if "random_goal" in data:
        directive = data["random_goal"]
        if isinstance(directive, dict):
            _reject_unknown(directive, {"min_start_distance"}, "world.random_goal")
            if "min_start_distance" in directive:
                min_start = _as_number(
                    directive["min_start_distance"], "world.random_goal.min_start_distance"
                )
        elif directive is not True:
            raise ConfigError("world.random_goal", f"expected true or an object, got {directive!r}")

    tolerance = _as_number(data["tolerance"], "world.tolerance") if "tolerance" in data else 2.0
    bounds = _build_bounds(data["bounds"]) if "bounds" in data else Bounds()

    auto = False
    obstacles: tuple = ()
    raw_obstacles = data.get("obstacles", [])
    if raw_obstacles == "auto":
        auto = True
    elif isinstance(raw_obstacles, list):
        obstacles = tuple(_build_obstacle(o, i) for i, o in enumerate(raw_obstacles))
    else:
        raise ConfigError("world.obstacles", f"expected a list or 'auto', got {raw_obstacles!r}")

    try:
        return WorldSpec(
            goal=goal,
            tolerance=tolerance,
            bounds=bounds,
            obstacles=obstacles,
            min_start_distance=min_start,
            auto_blocking_pair=auto,
        )
    except ValueError as exc:
        raise ConfigError("world", str(exc)) from None


def _resolve_seed(data: dict, env: dict) -> int:
    if "seed" in data:
        seed = _as_int(data["seed"], "seed")
    elif SEED_ENV_VAR in env:
        try:
            seed = int(env[SEED_ENV_VAR])
        except ValueError:
            raise ConfigError("seed", f"{SEED_ENV_VAR} must be an integer, got {env[SEED_ENV_VAR]!r}") from None
    else:
        raise ConfigError("seed", f"required (config key, --seed flag, or {SEED_ENV_VAR})")
    if seed < 0:
        raise ConfigError("seed", f"must be non-negative, got {seed}")
    return seed


def parse_config(
    path: str | Path | None = None,
    overrides: dict | None = None,
    env: dict | None = None,
) -> ExperimentConfig:
    """Load, merge and validate a run configuration.

    ``overrides`` (typically CLI flags) win over file keys, which win over
    preset defaults. Unknown keys are rejected with their field path.
    """
    env = os.environ if env is None else env
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(
                    str(path), f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
                ) from None
        if not isinstance(data, dict):
            raise ConfigError(str(path), "top level must be a JSON object")
    else:
        data = {}

    if overrides:
        data = {**data, **{k: v for k, v in overrides.items() if v is not None}}
    _reject_unknown(data, _TOP_KEYS, "")

    preset = None
    if "preset" in data:
        preset = _as_int(data["preset"], "preset")
        if preset not in PRESET_IDS:
            raise ConfigError("preset", f"unknown preset {preset}; valid presets are 1-4")
        base = preset_config(preset, seed=0).to_dict()
        del base["seed"]
        user_world = data.get("world", {})
        data = _deep_merge(base, data)
        if "goal" in user_world:
            data["world"].pop("random_goal", None)

    if "scheme" not in data:
        raise ConfigError("scheme", "required unless a preset is given")

    scheme = _build_scheme(_as_section(data["scheme"], "scheme"))
    robot = _build_robot(_as_section(data.get("robot", {}), "robot"))
    world = _build_world_spec(_as_section(data.get("world", {}), "world"))
    seed = _resolve_seed(data, env)
    max_steps = _as_int(data.get("max_steps", 5000), "max_steps")
    if max_steps < 1:
        raise ConfigError("max_steps", f"must be >= 1, got {max_steps}")
    literal = _as_bool(data.get("feedback_literal_eq10", False), "feedback_literal_eq10")

    return ExperimentConfig(
        scheme=scheme,
        seed=seed,
        robot=robot,
        world=world,
        max_steps=max_steps,
        feedback_literal_eq10=literal,
        preset=preset,
    )


def _as_section(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigError(path, f"expected an object, got {value!r}")
    return value


# ---------------------------------------------------------------------------
# artifact emission

def _fmt(value: float) -> str:
    # Shortest decimal string that round-trips to the same float.
    return repr(float(value))


def _write_text(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _trajectory_csv(record: RunRecord) -> str:
    lines = ["n,x,y,theta,action,flag,d,blocked"]
    for s in record.steps:
        p = s.pose_after
        lines.append(
            f"{s.n},{_fmt(p.x)},{_fmt(p.y)},{_fmt(p.theta)},"
            f"{int(s.action)},{s.flag.flag},{_fmt(s.d_after)},{int(s.blocked)}"
        )
    return "\n".join(lines) + "\n"


def _probs_csv(record: RunRecord) -> str:
    r = len(record.steps[0].probs_after) if record.steps else ACTION_COUNT
    lines = ["n," + ",".join(f"p{i}" for i in range(1, r + 1))]
    for s in record.steps:
        lines.append(f"{s.n}," + ",".join(_fmt(v) for v in s.probs_after))
    return "\n".join(lines) + "\n"


def _summary_dict(record: RunRecord) -> dict:
    final = record.final_pose
    return {
        "terminated": record.terminated.value,
        "success": record.success,
        "total_steps": record.total_steps,
        "seed": record.seed,
        "final_pose": {"x": final.x, "y": final.y, "theta": final.theta},
        "final_distance": distance_to_goal(final, record.world),
        "world": record.world.to_dict(),
        "config": record.config.to_dict(),
        "config_digest": record.config_digest,
        "rng_algorithm": record.rng_algorithm,
    }


def _svg_coord(v: float) -> str:
    return format(v, ".6g")


def build_svg(record: RunRecord) -> str:
    """Static trajectory plot: polyline, start marker, goal disc, obstacles.

    World y points up; SVG y points down, so y is negated in place and the
    viewBox covers the mirrored bounds.
    """
    b = record.world.bounds
    margin = 0.05 * max(b.x_max - b.x_min, b.y_max - b.y_min)
    x0, y0 = b.x_min - margin, -(b.y_max + margin)
    width = (b.x_max - b.x_min) + 2 * margin
    height = (b.y_max - b.y_min) + 2 * margin
    px_w = 640
    px_h = int(round(px_w * height / width))

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{px_w}" height="{px_h}" '
        f'viewBox="{_svg_coord(x0)} {_svg_coord(y0)} {_svg_coord(width)} {_svg_coord(height)}">',
        f'<rect class="workspace" x="{_svg_coord(b.x_min)}" y="{_svg_coord(-b.y_max)}" '
        f'width="{_svg_coord(b.x_max - b.x_min)}" height="{_svg_coord(b.y_max - b.y_min)}" '
        f'fill="white" stroke="black" stroke-width="0.4"/>',
    ]
    for obs in record.world.obstacles:
        if isinstance(obs, CircleObstacle):
            parts.append(
                f'<circle class="obstacle" cx="{_svg_coord(obs.center[0])}" '
                f'cy="{_svg_coord(-obs.center[1])}" r="{_svg_coord(obs.radius)}" '
                f'fill="#d0d0d0" stroke="#606060" stroke-width="0.4"/>'
            )
        else:
            w = obs.max_corner[0] - obs.min_corner[0]
            h = obs.max_corner[1] - obs.min_corner[1]
            parts.append(
                f'<rect class="obstacle" x="{_svg_coord(obs.min_corner[0])}" '
                f'y="{_svg_coord(-obs.max_corner[1])}" width="{_svg_coord(w)}" '
                f'height="{_svg_coord(h)}" fill="#d0d0d0" stroke="#606060" stroke-width="0.4"/>'
            )
    gx, gy = record.world.goal
    parts.append(
        f'<circle class="goal" cx="{_svg_coord(gx)}" cy="{_svg_coord(-gy)}" '
        f'r="{_svg_coord(record.world.goal_tolerance)}" fill="none" stroke="#2a7e2a" stroke-width="0.5"/>'
    )
    parts.append(
        f'<circle class="goal-center" cx="{_svg_coord(gx)}" cy="{_svg_coord(-gy)}" '
        f'r="0.6" fill="#2a7e2a"/>'
    )
    if record.steps:
        points = ["0,0"]
        points += [
            f"{_svg_coord(s.pose_after.x)},{_svg_coord(-s.pose_after.y)}" for s in record.steps
        ]
        parts.append(
            f'<polyline class="trajectory" points="{" ".join(points)}" '
            f'fill="none" stroke="#1f4fa0" stroke-width="0.5"/>'
        )
    parts.append('<rect class="start" x="-1" y="-1" width="2" height="2" fill="#b03030"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_artifacts(record: RunRecord, out_dir: str | Path) -> RunArtifacts:
    """Write the four per-run files into ``out_dir`` (created if missing)."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    artifacts = RunArtifacts(
        trajectory_csv=out / "trajectory.csv",
        probs_csv=out / "probs.csv",
        summary_json=out / "summary.json",
        plot_svg=out / "plot.svg",
    )
    _write_text(artifacts.trajectory_csv, _trajectory_csv(record))
    _write_text(artifacts.probs_csv, _probs_csv(record))
    _write_text(
        artifacts.summary_json, json.dumps(_summary_dict(record), sort_keys=True, indent=2) + "\n"
    )
    _write_text(artifacts.plot_svg, build_svg(record))
    return artifacts


# ---------------------------------------------------------------------------
# commands

def _parse_seed_range(text: str) -> list[int]:
    try:
        if ".." in text:
            lo_s, hi_s = text.split("..", 1)
            lo, hi = int(lo_s), int(hi_s)
            if hi < lo:
                raise ConfigError("seeds", f"range {text!r} is empty")
            return list(range(lo, hi + 1))
        return [int(text)]
    except ValueError:
        raise ConfigError("seeds", f"expected A..B or a single integer, got {text!r}") from None


def _cli_overrides(args: argparse.Namespace) -> dict:
    overrides: dict = {
        "preset": args.preset,
        "max_steps": args.max_steps,
    }
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if args.literal_eq10:
        overrides["feedback_literal_eq10"] = True
    return overrides


def _cmd_run(args: argparse.Namespace) -> int:
    config = parse_config(args.config, _cli_overrides(args))
    record = run_episode(config)
    out = Path(args.out)
    emit_artifacts(record, out)
    print(
        f"seed {record.seed}: {record.terminated.value} after {record.total_steps} steps"
        f" (artifacts in {out})"
    )
    return 0


def _cmd_batch(args: argparse.Namespace) -> int:
    seeds = _parse_seed_range(args.seeds)
    overrides = _cli_overrides(args)
    overrides.setdefault("seed", seeds[0])
    template = parse_config(args.config, overrides)
    result = run_batch(template, seeds, parallelism=args.parallelism)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for record in result.records:
        emit_artifacts(record, out / f"seed_{record.seed}")
    template_echo = template.to_dict()
    template_echo["seed"] = None
    batch_doc = {
        "seeds": seeds,
        "config": template_echo,
        "failures": [{"seed": f.seed, "error": f.error} for f in result.failures],
        "summary": result.summary.to_dict(),
    }
    _write_text(out / "batch_summary.json", json.dumps(batch_doc, sort_keys=True, indent=2) + "\n")

    s = result.summary
    print(
        f"{s.runs} runs, {s.success_count} reached the goal "
        f"(rate {s.success_rate:.2f}), median steps {s.steps_median}"
    )
    for failure in result.failures:
        print(f"seed {failure.seed}: configuration failure: {failure.error}", file=sys.stderr)
    return 0 if not result.failures else 1


def _cmd_presets(_args: argparse.Namespace) -> int:
    print("preset  kind          a    b    obstacles  description")
    for pid in PRESET_IDS:
        cfg = preset_config(pid, seed=0)
        scheme = cfg.scheme
        obstacles = "2 discs" if cfg.world.auto_blocking_pair else "none"
        print(
            f"{pid:<7} {scheme.kind.value:<13} {scheme.reward_rate:<4} "
            f"{scheme.penalty_rate:<4} {obstacles:<10} {PRESET_DESCRIPTIONS[pid]}"
        )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="la-nav",
        description="Learning-automaton goal seeking for a differential-drive robot.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--preset", type=int, choices=PRESET_IDS, help="built-in experiment preset")
        p.add_argument("--out", default="out", help="output directory (default: out)")
        p.add_argument("--max-steps", type=int, dest="max_steps", help="step budget per episode")
        p.add_argument(
            "--literal-eq10",
            action="store_true",
            dest="literal_eq10",
            help="invert the success test (reward steps that do not reduce the goal distance)",
        )

    run_p = sub.add_parser("run", help="run one episode and write its artifacts")
    add_common(run_p)
    run_p.add_argument("--seed", type=int, help=f"RNG seed (fallback: {SEED_ENV_VAR})")
    run_p.set_defaults(func=_cmd_run)

    batch_p = sub.add_parser("batch", help="run one episode per seed")
    add_common(batch_p)
    batch_p.add_argument("--seeds", required=True, help="seed range A..B (inclusive) or a single seed")
    batch_p.add_argument("--parallelism", type=int, default=1, help="worker threads (default: 1)")
    batch_p.set_defaults(func=_cmd_batch)

    presets_p = sub.add_parser("presets", help="list the built-in experiment presets")
    presets_p.set_defaults(func=_cmd_presets)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SimulationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
