"""Multi-step walking in world coordinates, for 2D and 3D gaits.

The engine coasts the CoM on the closed-form pendulum flow between
touchdowns (no integration drift), triggers a touchdown every step period,
asks a placement law where to put the swing foot, and swaps support with
continuous velocity. Pushes are instantaneous velocity increments applied by
splitting the flow at the push instant. Everything is deterministic: the
same inputs produce bit-identical traces.

2D walks along the x axis. 3D runs both horizontal axes as independent
pendulums under the per-leg heading controller; the walk direction and gait
shape may be re-scheduled at any touchdown.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .control import FootPlacement, Gait3DParams, LegParams, lfpc_2d, lfpc_3d
from .errors import InvalidParameterError
from .model import ModelParams, PendulumState, flow

__all__ = [
    "WorldState",
    "PushEvent",
    "StepRecord",
    "TraceSamples",
    "WalkTrace",
    "WalkEngine",
    "GaitMeasure",
    "simulate_2d",
    "simulate_3d",
    "measure_gait",
]

# Bearing of the +x axis in the heading convention (angle from +y toward +x);
# 2D traces record it so gait measurement shares one frame with 3D.
X_AXIS_HEADING = math.pi / 2.0


@dataclass(frozen=True)
class WorldState:
    """World-frame snapshot: CoM position/velocity, stance foot, and counters."""

    time: float
    step_index: int
    com: tuple[float, float]
    vel: tuple[float, float]
    stance_foot: tuple[float, float]
    stance_leg: int

    def __post_init__(self) -> None:
        vals = (*self.com, *self.vel, *self.stance_foot, self.time)
        if not all(math.isfinite(v) for v in vals):
            raise InvalidParameterError(f"world state must be finite, got {self}")
        if self.stance_leg not in (1, 2):
            raise InvalidParameterError(f"stance_leg must be 1 or 2, got {self.stance_leg}")

    @classmethod
    def initial_2d(cls, x: float, v: float, stance_leg: int = 2) -> "WorldState":
        """Stance foot at the origin, CoM at the stance-relative state (x, v)."""
        return cls(0.0, 0, (x, 0.0), (v, 0.0), (0.0, 0.0), stance_leg)

    @classmethod
    def initial_3d(
        cls,
        x: float = 0.0,
        y: float = 0.0,
        vx: float = 0.0,
        vy: float = 0.0,
        stance_leg: int = 2,
    ) -> "WorldState":
        return cls(0.0, 0, (x, y), (vx, vy), (0.0, 0.0), stance_leg)


@dataclass(frozen=True)
class PushEvent:
    """Impulsive velocity increment (dvx, dvy) applied to the CoM at a given time."""

    at_time: float
    dvx: float
    dvy: float = 0.0

    def __post_init__(self) -> None:
        if not (self.at_time >= 0.0):
            raise InvalidParameterError(f"push time must be >= 0, got {self.at_time}")
        if not (math.isfinite(self.dvx) and math.isfinite(self.dvy)):
            raise InvalidParameterError(f"push increment must be finite, got {self}")


@dataclass(frozen=True)
class StepRecord:
    """One touchdown: stance-relative state before/after the support exchange,
    the commanded placement, and the resulting world-frame footprint."""

    index: int
    time: float
    leg: int
    pos_before: tuple[float, float]
    vel_before: tuple[float, float]
    pos_after: tuple[float, float]
    vel_after: tuple[float, float]
    placement: FootPlacement
    footprint: tuple[float, float]
    heading: float
    infeasible: bool = False


@dataclass(frozen=True)
class TraceSamples:
    """Dense world-frame samples, one row per sample time."""

    t: np.ndarray
    com_x: np.ndarray
    com_y: np.ndarray
    vx: np.ndarray
    vy: np.ndarray
    stance_x: np.ndarray
    stance_y: np.ndarray
    stance_leg: np.ndarray
    step_index: np.ndarray

    @classmethod
    def from_rows(cls, rows: list[tuple]) -> "TraceSamples":
        cols = list(zip(*rows)) if rows else [[] for _ in range(9)]
        return cls(
            t=np.array(cols[0], dtype=float),
            com_x=np.array(cols[1], dtype=float),
            com_y=np.array(cols[2], dtype=float),
            vx=np.array(cols[3], dtype=float),
            vy=np.array(cols[4], dtype=float),
            stance_x=np.array(cols[5], dtype=float),
            stance_y=np.array(cols[6], dtype=float),
            stance_leg=np.array(cols[7], dtype=int),
            step_index=np.array(cols[8], dtype=int),
        )


@dataclass(frozen=True)
class WalkTrace:
    """Everything one walking run produced: per-touchdown records, dense samples,
    and any warnings (e.g. pushes past the horizon)."""

    mode: str
    model: ModelParams
    initial: WorldState
    records: tuple[StepRecord, ...]
    samples: TraceSamples
    warnings: tuple[str, ...] = ()

    def footprints(self) -> np.ndarray:
        """World footholds, initial stance first, one per touchdown after. Shape (n+1, 2)."""
        pts = [self.initial.stance_foot] + [r.footprint for r in self.records]
        return np.array(pts, dtype=float)

    def touchdown_velocities(self) -> np.ndarray:
        """Pre-transition CoM velocity at each touchdown. Shape (n, 2)."""
        return np.array([r.vel_before for r in self.records], dtype=float)


class WalkEngine:
    """Incremental stepping core shared by the batch simulators and the live session.

    State between touchdowns is stored as a flow segment: the stance-relative
    state at the segment start plus its local time offset within the step.
    Samples and pushes re-evaluate the closed form from the segment start, so
    no numerical drift accumulates within a step.
    """

    def __init__(self, model: ModelParams, world: WorldState):
        self.model = model
        self.stance_x, self.stance_y = world.stance_foot
        self.stance_leg = world.stance_leg
        self.step_index = world.step_index
        self.step_start_time = world.time
        self.seg_qx = PendulumState(world.com[0] - world.stance_foot[0], world.vel[0])
        self.seg_qy = PendulumState(world.com[1] - world.stance_foot[1], world.vel[1])
        self.seg_tau = 0.0

    def _relative_at(self, tau: float) -> tuple[PendulumState, PendulumState]:
        dt = tau - self.seg_tau
        return flow(self.seg_qx, dt, self.model), flow(self.seg_qy, dt, self.model)

    def sample(self, tau: float) -> tuple:
        """World-frame sample row at local time tau within the current step."""
        qx, qy = self._relative_at(tau)
        return (
            self.step_start_time + tau,
            self.stance_x + qx.x,
            self.stance_y + qy.x,
            qx.v,
            qy.v,
            self.stance_x,
            self.stance_y,
            self.stance_leg,
            self.step_index,
        )

    def world_state(self, tau: float) -> WorldState:
        qx, qy = self._relative_at(tau)
        return WorldState(
            time=self.step_start_time + tau,
            step_index=self.step_index,
            com=(self.stance_x + qx.x, self.stance_y + qy.x),
            vel=(qx.v, qy.v),
            stance_foot=(self.stance_x, self.stance_y),
            stance_leg=self.stance_leg,
        )

    def push(self, tau: float, dvx: float, dvy: float) -> None:
        """Add an impulsive velocity increment at local time tau (splits the flow)."""
        qx, qy = self._relative_at(tau)
        self.seg_qx = PendulumState(qx.x, qx.v + dvx)
        self.seg_qy = PendulumState(qy.x, qy.v + dvy)
        self.seg_tau = tau

    def touchdown(
        self,
        period: float,
        place: Callable[[float, float, int], FootPlacement],
        heading: float,
        max_reach: float | None = None,
    ) -> StepRecord:
        """Finish the step at local time `period`: place the swing foot and swap support."""
        qx, qy = self._relative_at(period)
        swing_leg = 3 - self.stance_leg
        placement = place(qx.v, qy.v, swing_leg)
        com_x = self.stance_x + qx.x
        com_y = self.stance_y + qy.x
        foot = (com_x + placement.x_f, com_y + placement.y_f)
        infeasible = bool(
            max_reach is not None
            and math.hypot(placement.x_f, placement.y_f) > max_reach
        )
        record = StepRecord(
            index=self.step_index + 1,
            time=self.step_start_time + period,
            leg=swing_leg,
            pos_before=(qx.x, qy.x),
            vel_before=(qx.v, qy.v),
            pos_after=(-placement.x_f, -placement.y_f),
            vel_after=(qx.v, qy.v),
            placement=placement,
            footprint=foot,
            heading=heading,
            infeasible=infeasible,
        )
        self.stance_x, self.stance_y = foot
        self.stance_leg = swing_leg
        self.step_index += 1
        self.step_start_time += period
        self.seg_qx = PendulumState(-placement.x_f, qx.v)
        self.seg_qy = PendulumState(-placement.y_f, qy.v)
        self.seg_tau = 0.0
        return record


def _run_steps(
    engine: WalkEngine,
    n_steps: int,
    period_for_step: Callable[[int], float],
    place_for_touchdown: Callable[[int], Callable[[float, float, int], FootPlacement]],
    heading_for_touchdown: Callable[[int], float],
    pushes: Sequence[PushEvent],
    sample_rate: float,
    max_reach: float | None,
) -> tuple[list[StepRecord], list[tuple], list[str]]:
    """Drive the engine for n_steps, interleaving pushes and dense samples in time order."""
    if n_steps < 1:
        raise InvalidParameterError(f"n_steps must be >= 1, got {n_steps}")
    if sample_rate < 0.0:
        raise InvalidParameterError(f"sample_rate must be >= 0, got {sample_rate}")

    warnings: list[str] = []
    pending = sorted(pushes, key=lambda p: p.at_time)  # stable: ties keep input order
    for p in pending:
        if p.at_time < engine.step_start_time:
            warnings.append(f"push at t={p.at_time} precedes the simulation start; ignored")
    pending = [p for p in pending if p.at_time >= engine.step_start_time]

    records: list[StepRecord] = []
    rows: list[tuple] = []
    for i in range(n_steps):
        period = period_for_step(i)
        step_end = engine.step_start_time + period
        # pushes landing within this step, as local offsets
        step_pushes = []
        while pending and pending[0].at_time < step_end:
            p = pending.pop(0)
            step_pushes.append((p.at_time - engine.step_start_time, p))
        push_i = 0
        k = 0
        while sample_rate > 0.0:
            tau = k / sample_rate
            if tau >= period:
                break
            while push_i < len(step_pushes) and step_pushes[push_i][0] <= tau:
                local, p = step_pushes[push_i]
                engine.push(local, p.dvx, p.dvy)
                push_i += 1
            rows.append(engine.sample(tau))
            k += 1
        while push_i < len(step_pushes):
            local, p = step_pushes[push_i]
            engine.push(local, p.dvx, p.dvy)
            push_i += 1
        records.append(
            engine.touchdown(
                period,
                place_for_touchdown(i + 1),
                heading_for_touchdown(i + 1),
                max_reach,
            )
        )
    for p in pending:
        warnings.append(f"push at t={p.at_time} is beyond the simulation horizon; ignored")
    return records, rows, warnings


def simulate_2d(
    initial: WorldState,
    legs: tuple[LegParams, LegParams],
    period: float,
    n_steps: int,
    pushes: Sequence[PushEvent] = (),
    sample_rate: float = 100.0,
    *,
    model: ModelParams,
    max_reach: float | None = None,
) -> WalkTrace:
    """Walk along the x axis with per-leg placement laws.

    Legs alternate; the leg opposite the initial stance leg swings first (so
    with the default stance on leg 2, leg 1 places the first foothold). The
    placement law acts only at touchdowns: the first step's flight is
    whatever the initial state dictates.
    """
    if not (period > 0.0):
        raise InvalidParameterError(f"step period must be positive, got {period}")
    engine = WalkEngine(model, initial)

    def place(index: int):
        def inner(vx: float, vy: float, leg_id: int) -> FootPlacement:
            return lfpc_2d(vx, legs[leg_id - 1])
        return inner

    records, rows, warnings = _run_steps(
        engine,
        n_steps,
        period_for_step=lambda i: period,
        place_for_touchdown=place,
        heading_for_touchdown=lambda i: X_AXIS_HEADING,
        pushes=pushes,
        sample_rate=sample_rate,
        max_reach=max_reach,
    )
    return WalkTrace(
        mode="2d",
        model=model,
        initial=initial,
        records=tuple(records),
        samples=TraceSamples.from_rows(rows),
        warnings=tuple(warnings),
    )


def _validate_schedule(schedule: Sequence[tuple[int, Gait3DParams]]) -> list[tuple[int, Gait3DParams]]:
    if not schedule:
        raise InvalidParameterError("gait schedule must not be empty")
    entries = list(schedule)
    if entries[0][0] != 0:
        raise InvalidParameterError(f"gait schedule must start at step 0, got {entries[0][0]}")
    for (prev, _), (cur, _) in zip(entries, entries[1:]):
        if cur <= prev:
            raise InvalidParameterError(
                f"gait schedule steps must be strictly increasing, got {prev} then {cur}"
            )
    return entries


def gait_for_step(schedule: Sequence[tuple[int, Gait3DParams]], step: int) -> Gait3DParams:
    """The schedule entry in effect at a given step (touchdowns use their new step's entry)."""
    active = schedule[0][1]
    for from_step, gait in schedule:
        if from_step <= step:
            active = gait
        else:
            break
    return active


def simulate_3d(
    initial: WorldState,
    gait_schedule: Sequence[tuple[int, Gait3DParams]],
    n_steps: int,
    pushes: Sequence[PushEvent] = (),
    sample_rate: float = 100.0,
    *,
    model: ModelParams,
    max_reach: float | None = None,
) -> WalkTrace:
    """Walk in the plane under the per-leg heading controller.

    Both axes evolve as independent pendulums. The schedule maps step indices
    to gait parameters; an entry (k, gait) governs the placement made at
    touchdown k and the flight of step k that follows it.
    """
    entries = _validate_schedule(gait_schedule)
    engine = WalkEngine(model, initial)

    def place(index: int):
        gait = gait_for_step(entries, index)
        def inner(vx: float, vy: float, leg_id: int) -> FootPlacement:
            return lfpc_3d(vx, vy, leg_id, gait)
        return inner

    records, rows, warnings = _run_steps(
        engine,
        n_steps,
        period_for_step=lambda i: gait_for_step(entries, i).period,
        place_for_touchdown=place,
        heading_for_touchdown=lambda i: gait_for_step(entries, i).theta,
        pushes=pushes,
        sample_rate=sample_rate,
        max_reach=max_reach,
    )
    return WalkTrace(
        mode="3d",
        model=model,
        initial=initial,
        records=tuple(records),
        samples=TraceSamples.from_rows(rows),
        warnings=tuple(warnings),
    )


@dataclass(frozen=True)
class GaitMeasure:
    """Per-touchdown gait description, index-aligned with the trace records.

    lengths/widths decompose each foothold-to-foothold displacement along and
    across the heading active at that touchdown (signed; negative length means
    stepping against the heading). headings is the realized walk bearing from
    the two-step displacement between same-leg footholds; the first entry is
    NaN since it needs two preceding footholds.
    """

    lengths: np.ndarray
    widths: np.ndarray
    headings: np.ndarray


def measure_gait(trace: WalkTrace) -> GaitMeasure:
    """Step lengths, step widths, and realized headings from a trace's footprints."""
    if len(trace.records) < 3:
        raise InvalidParameterError(
            f"gait measurement needs at least 3 steps, got {len(trace.records)}"
        )
    pts = trace.footprints()
    lengths = np.empty(len(trace.records))
    widths = np.empty(len(trace.records))
    headings = np.full(len(trace.records), np.nan)
    for i, rec in enumerate(trace.records):
        dx = pts[i + 1, 0] - pts[i, 0]
        dy = pts[i + 1, 1] - pts[i, 1]
        sin_t, cos_t = math.sin(rec.heading), math.cos(rec.heading)
        lengths[i] = dx * sin_t + dy * cos_t
        widths[i] = dx * cos_t - dy * sin_t
        if i >= 1:
            dx2 = pts[i + 1, 0] - pts[i - 1, 0]
            dy2 = pts[i + 1, 1] - pts[i - 1, 1]
            headings[i] = math.atan2(dx2, dy2)
    return GaitMeasure(lengths=lengths, widths=widths, headings=headings)
