"""Scenario configs: strict JSON schema for the simulate subcommand.

A config fully determines one walking run. Unknown keys are rejected so a
typo cannot silently fall back to a default, and every module precondition
is checked here with a field-path-anchored message before anything runs.
The velocity gain b may be given symbolically ("b_min", "b_cp", "b_db",
"b_max") and is resolved against the model and step period at load time.
Angles cross this boundary in degrees.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .analysis import special_b
from .control import Gait3DParams, LegParams
from .errors import LipwalkError
from .model import ModelParams, step_constants
from .simulate import PushEvent, WorldState

__all__ = ["ConfigError", "ScenarioConfig", "load_config", "parse_config"]

SYMBOLIC_GAINS = ("b_min", "b_cp", "b_db", "b_max")


class ConfigError(LipwalkError):
    """A scenario config is syntactically or semantically invalid."""


def _fail(path: str, message: str) -> None:
    raise ConfigError(f"{path}: {message}")


def _require_keys(obj: dict, path: str, required: tuple[str, ...], optional: tuple[str, ...] = ()) -> None:
    if not isinstance(obj, dict):
        _fail(path, f"expected an object, got {type(obj).__name__}")
    for key in required:
        if key not in obj:
            _fail(path, f"missing required field '{key}'")
    unknown = set(obj) - set(required) - set(optional)
    if unknown:
        _fail(path, f"unknown field(s): {', '.join(sorted(unknown))}")


def _number(obj: dict, path: str, key: str, default: float | None = None) -> float:
    if key not in obj:
        if default is None:
            _fail(path, f"missing required field '{key}'")
        return default
    val = obj[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        _fail(f"{path}.{key}", f"expected a number, got {val!r}")
    if not math.isfinite(float(val)):
        _fail(f"{path}.{key}", f"must be finite, got {val!r}")
    return float(val)


def _integer(obj: dict, path: str, key: str, default: int | None = None) -> int:
    if key not in obj:
        if default is None:
            _fail(path, f"missing required field '{key}'")
        return default
    val = obj[key]
    if isinstance(val, bool) or not isinstance(val, int):
        _fail(f"{path}.{key}", f"expected an integer, got {val!r}")
    return val


def _gain(obj: dict, path: str, key: str, model: ModelParams, period: float) -> float:
    if key not in obj:
        _fail(path, f"missing required field '{key}'")
    val = obj[key]
    if isinstance(val, str):
        if val not in SYMBOLIC_GAINS:
            _fail(f"{path}.{key}", f"unknown symbolic gain {val!r}; use one of {SYMBOLIC_GAINS}")
        gains = special_b(step_constants(period, model), model)
        return getattr(gains, val)
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        _fail(f"{path}.{key}", f"expected a number or symbolic gain, got {val!r}")
    return float(val)


@dataclass(frozen=True)
class ScenarioConfig:
    """A validated walking scenario, ready to hand to the simulators."""

    mode: str
    model: ModelParams
    n_steps: int
    sample_rate: float
    initial: WorldState
    pushes: tuple[PushEvent, ...]
    output_stem: str
    period: float | None = None                                 # 2d
    legs: tuple[LegParams, LegParams] | None = None             # 2d
    schedule: tuple[tuple[int, Gait3DParams], ...] | None = None  # 3d
    raw: dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict[str, Any]:
        """Canonical JSON form: defaults filled in, symbolic gains resolved."""
        out: dict[str, Any] = {
            "mode": self.mode,
            "model": {"g": self.model.g, "h": self.model.h},
            "n_steps": self.n_steps,
            "sample_rate": self.sample_rate,
            "pushes": [
                {"at_time": p.at_time, "dvx": p.dvx, "dvy": p.dvy} for p in self.pushes
            ],
            "output_stem": self.output_stem,
        }
        if self.mode == "2d":
            out["period"] = self.period
            out["initial"] = {
                "x": self.initial.com[0],
                "v": self.initial.vel[0],
                "stance_leg": self.initial.stance_leg,
            }
            out["legs"] = [{"a": leg.a, "b": leg.b} for leg in self.legs]
        else:
            out["initial"] = {
                "x": self.initial.com[0],
                "y": self.initial.com[1],
                "vx": self.initial.vel[0],
                "vy": self.initial.vel[1],
                "stance_leg": self.initial.stance_leg,
            }
            out["schedule"] = [
                {
                    "from_step": step,
                    "a_l": g.a_l,
                    "a_w": g.a_w,
                    "theta_deg": math.degrees(g.theta),
                    "b": g.b,
                    "period": g.period,
                }
                for step, g in self.schedule
            ]
        return out


def parse_config(data: dict, default_stem: str = "scenario") -> ScenarioConfig:
    """Validate a raw config dict and resolve it into model objects."""
    _require_keys(
        data,
        "config",
        required=("mode", "model", "n_steps"),
        optional=("period", "legs", "schedule", "initial", "pushes", "sample_rate", "output_stem"),
    )
    mode = data["mode"]
    if mode not in ("2d", "3d"):
        _fail("config.mode", f"must be '2d' or '3d', got {mode!r}")

    _require_keys(data["model"], "config.model", required=("g", "h"))
    g = _number(data["model"], "config.model", "g")
    h = _number(data["model"], "config.model", "h")
    if g <= 0.0 or h <= 0.0:
        _fail("config.model", f"g and h must be positive, got g={g}, h={h}")
    model = ModelParams(g, h)

    n_steps = _integer(data, "config", "n_steps")
    if n_steps < 1:
        _fail("config.n_steps", f"must be >= 1, got {n_steps}")
    sample_rate = _number(data, "config", "sample_rate", default=100.0)
    if sample_rate < 0.0:
        _fail("config.sample_rate", f"must be >= 0, got {sample_rate}")

    pushes: list[PushEvent] = []
    for i, entry in enumerate(data.get("pushes", [])):
        path = f"config.pushes[{i}]"
        _require_keys(entry, path, required=("at_time",), optional=("dvx", "dvy"))
        at_time = _number(entry, path, "at_time")
        if at_time < 0.0:
            _fail(f"{path}.at_time", f"must be >= 0, got {at_time}")
        pushes.append(
            PushEvent(at_time, _number(entry, path, "dvx", 0.0), _number(entry, path, "dvy", 0.0))
        )

    stem = data.get("output_stem", default_stem)
    if not isinstance(stem, str) or not stem:
        _fail("config.output_stem", f"must be a non-empty string, got {stem!r}")

    if mode == "2d":
        for key in ("schedule",):
            if key in data:
                _fail(f"config.{key}", "not allowed in 2d mode")
        period = _number(data, "config", "period")
        if period <= 0.0:
            _fail("config.period", f"must be > 0, got {period}")
        legs_raw = data.get("legs")
        if not isinstance(legs_raw, list) or len(legs_raw) != 2:
            _fail("config.legs", "must be a list of exactly two leg parameter objects")
        legs = []
        for i, entry in enumerate(legs_raw):
            path = f"config.legs[{i}]"
            _require_keys(entry, path, required=("a", "b"))
            legs.append(LegParams(_number(entry, path, "a"), _gain(entry, path, "b", model, period)))
        init_raw = data.get("initial", {})
        _require_keys(init_raw, "config.initial", required=(), optional=("x", "v", "stance_leg"))
        stance_leg = _integer(init_raw, "config.initial", "stance_leg", 2)
        if stance_leg not in (1, 2):
            _fail("config.initial.stance_leg", f"must be 1 or 2, got {stance_leg}")
        initial = WorldState.initial_2d(
            _number(init_raw, "config.initial", "x", 0.0),
            _number(init_raw, "config.initial", "v", 0.0),
            stance_leg,
        )
        return ScenarioConfig(
            mode="2d",
            model=model,
            n_steps=n_steps,
            sample_rate=sample_rate,
            initial=initial,
            pushes=tuple(pushes),
            output_stem=stem,
            period=period,
            legs=(legs[0], legs[1]),
            raw=data,
        )

    for key in ("period", "legs"):
        if key in data:
            _fail(f"config.{key}", "not allowed in 3d mode")
    sched_raw = data.get("schedule")
    if not isinstance(sched_raw, list) or not sched_raw:
        _fail("config.schedule", "must be a non-empty list of gait entries")
    schedule: list[tuple[int, Gait3DParams]] = []
    for i, entry in enumerate(sched_raw):
        path = f"config.schedule[{i}]"
        _require_keys(
            entry, path, required=("from_step", "a_l", "a_w", "theta_deg", "b", "period")
        )
        from_step = _integer(entry, path, "from_step")
        if from_step < 0:
            _fail(f"{path}.from_step", f"must be >= 0, got {from_step}")
        period = _number(entry, path, "period")
        if period <= 0.0:
            _fail(f"{path}.period", f"must be > 0, got {period}")
        gait = Gait3DParams(
            a_l=_number(entry, path, "a_l"),
            a_w=_number(entry, path, "a_w"),
            theta=math.radians(_number(entry, path, "theta_deg")),
            b=_gain(entry, path, "b", model, period),
            period=period,
        )
        schedule.append((from_step, gait))
    if schedule[0][0] != 0:
        _fail("config.schedule[0].from_step", f"schedule must start at step 0, got {schedule[0][0]}")
    for i in range(1, len(schedule)):
        if schedule[i][0] <= schedule[i - 1][0]:
            _fail(
                f"config.schedule[{i}].from_step",
                f"must be strictly increasing, got {schedule[i - 1][0]} then {schedule[i][0]}",
            )
    init_raw = data.get("initial", {})
    _require_keys(
        init_raw, "config.initial", required=(), optional=("x", "y", "vx", "vy", "stance_leg")
    )
    stance_leg = _integer(init_raw, "config.initial", "stance_leg", 2)
    if stance_leg not in (1, 2):
        _fail("config.initial.stance_leg", f"must be 1 or 2, got {stance_leg}")
    initial = WorldState.initial_3d(
        _number(init_raw, "config.initial", "x", 0.0),
        _number(init_raw, "config.initial", "y", 0.0),
        _number(init_raw, "config.initial", "vx", 0.0),
        _number(init_raw, "config.initial", "vy", 0.0),
        stance_leg,
    )
    return ScenarioConfig(
        mode="3d",
        model=model,
        n_steps=n_steps,
        sample_rate=sample_rate,
        initial=initial,
        pushes=tuple(pushes),
        output_stem=stem,
        schedule=tuple(schedule),
        raw=data,
    )


def load_config(path: str | Path) -> ScenarioConfig:
    """Read and validate a JSON scenario file."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{p}: cannot read config: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{p}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from exc
    return parse_config(data, default_stem=p.stem)
