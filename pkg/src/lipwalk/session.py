"""Live steering session: the walking engine behind a JSON line protocol.

A session owns one walker. Clients send single-variant command objects
(set_gait / push / run / pause / step_once / reset) and receive a stream of
state snapshots. All dynamics happen in :class:`SessionCore`, which is pure
and deterministic: the wire layer only paces ticks against the wall clock
and shuttles JSON lines, so a recorded command script replays to an
identical update stream (wall_time aside).

Timing rules: commands apply at the tick boundary where they are processed;
gait parameters latch at the next touchdown; pushes act immediately at the
arrival tick. The step period must span a whole number of ticks so that
touchdowns land exactly on tick boundaries (this keeps a session run
sample-for-sample equal to the batch simulator at the same rate).
"""

from __future__ import annotations

import asyncio
import json
import logging
import math
import time
from pathlib import Path
from typing import Any

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .analysis import special_b
from .control import Gait3DParams, lfpc_3d
from .errors import InvalidParameterError
from .model import ModelParams, step_constants
from .simulate import WalkEngine, WorldState

__all__ = ["PROTOCOL_VERSION", "SessionCore", "build_app", "serve"]

log = logging.getLogger("lipwalk.session")

PROTOCOL_VERSION = "1"
COMMANDS = ("set_gait", "push", "run", "pause", "step_once", "reset")
TICK_ALIGNMENT_TOL = 1e-6


def _ticks_per_step(period: float, tick_rate: float) -> int:
    n = round(period * tick_rate)
    if n < 1 or abs(period * tick_rate - n) > TICK_ALIGNMENT_TOL:
        raise InvalidParameterError(
            f"step period {period} must span a whole number of ticks at {tick_rate} Hz"
        )
    return n


def _gait_wire(gait: Gait3DParams) -> dict[str, float]:
    return {
        "a_l": gait.a_l,
        "a_w": gait.a_w,
        "theta_deg": math.degrees(gait.theta),
        "b": gait.b,
        "T": gait.period,
    }


def _number(payload: dict, key: str, default: float | None = None) -> float:
    if key not in payload:
        if default is None:
            raise ValueError(f"missing field '{key}'")
        return default
    val = payload[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)) or not math.isfinite(val):
        raise ValueError(f"field '{key}' must be a finite number, got {val!r}")
    return float(val)


class SessionCore:
    """Deterministic session state machine; one instance per client."""

    def __init__(
        self,
        model: ModelParams,
        gait: Gait3DParams,
        tick_rate: float,
        footprint_cap: int = 256,
        initial: WorldState | None = None,
    ):
        if not (tick_rate > 0.0):
            raise InvalidParameterError(f"tick_rate must be positive, got {tick_rate}")
        self.model = model
        self.tick_rate = tick_rate
        self.footprint_cap = footprint_cap
        self.active_gait = gait
        self.pending_gait: Gait3DParams | None = None
        self.ticks_per_step = _ticks_per_step(gait.period, tick_rate)
        self.running = False
        self.speed = 1.0
        self._reset_engine(initial or WorldState.initial_3d())

    def _reset_engine(self, world: WorldState) -> None:
        self.engine = WalkEngine(self.model, world)
        self.tick_in_step = 0
        self.footprints = [
            {
                "step": world.step_index,
                "leg": world.stance_leg,
                "x": world.stance_foot[0],
                "y": world.stance_foot[1],
            }
        ]

    # -- outbound frames ------------------------------------------------

    def hello(self) -> dict[str, Any]:
        consts = step_constants(self.active_gait.period, self.model)
        gains = special_b(consts, self.model)
        return {
            "type": "hello",
            "protocol": PROTOCOL_VERSION,
            "model": {"g": self.model.g, "h": self.model.h, "t_c": self.model.t_c},
            "gait": _gait_wire(self.active_gait),
            "special_b": {
                "b_min": gains.b_min,
                "b_cp": gains.b_cp,
                "b_db": gains.b_db,
                "b_max": gains.b_max,
            },
            "tick_rate": self.tick_rate,
            "footprint_cap": self.footprint_cap,
        }

    def _local_tau(self) -> float:
        return self.tick_in_step / self.tick_rate

    def update(self, last_event: str = "none") -> dict[str, Any]:
        world = self.engine.world_state(self._local_tau())
        return {
            "type": "update",
            "t": world.time,
            "step_index": world.step_index,
            "com": [world.com[0], world.com[1]],
            "vel": [world.vel[0], world.vel[1]],
            "stance_foot": [world.stance_foot[0], world.stance_foot[1]],
            "stance_leg": world.stance_leg,
            "gait": _gait_wire(self.active_gait),
            "pending_gait": None if self.pending_gait is None else _gait_wire(self.pending_gait),
            "last_event": last_event,
            "footprints": list(self.footprints),
            "running": self.running,
            "speed": self.speed,
            "wall_time": time.time(),
        }

    @staticmethod
    def error(reason: str) -> dict[str, Any]:
        return {"type": "error", "reason": reason}

    # -- dynamics -------------------------------------------------------

    def tick(self) -> dict[str, Any]:
        """Advance one tick; process the touchdown when the step completes."""
        self.tick_in_step += 1
        if self.tick_in_step < self.ticks_per_step:
            return self.update("none")
        flight_period = self.active_gait.period
        if self.pending_gait is not None:
            self.active_gait = self.pending_gait
            self.pending_gait = None
        gait = self.active_gait
        record = self.engine.touchdown(
            flight_period,
            lambda vx, vy, leg: lfpc_3d(vx, vy, leg, gait),
            gait.theta,
        )
        self.footprints.append(
            {"step": record.index, "leg": record.leg, "x": record.footprint[0], "y": record.footprint[1]}
        )
        if len(self.footprints) > self.footprint_cap:
            del self.footprints[: len(self.footprints) - self.footprint_cap]
        self.ticks_per_step = _ticks_per_step(gait.period, self.tick_rate)
        self.tick_in_step = 0
        return self.update("touchdown")

    # -- commands -------------------------------------------------------

    def handle(self, msg: Any) -> list[dict[str, Any]]:
        """Apply one decoded command; returns the frames to send."""
        if not isinstance(msg, dict) or len(msg) != 1:
            return [self.error("command must be an object with exactly one variant key")]
        variant, payload = next(iter(msg.items()))
        if variant not in COMMANDS:
            return [self.error(f"unknown command '{variant}'")]
        if payload is None:
            payload = {}
        if not isinstance(payload, dict):
            return [self.error(f"'{variant}' payload must be an object")]
        try:
            return getattr(self, f"_cmd_{variant}")(payload)
        except (ValueError, InvalidParameterError) as exc:
            return [self.error(f"{variant}: {exc}")]

    def _cmd_set_gait(self, payload: dict) -> list[dict]:
        gait = Gait3DParams(
            a_l=_number(payload, "a_l"),
            a_w=_number(payload, "a_w"),
            theta=math.radians(_number(payload, "theta_deg")),
            b=_number(payload, "b"),
            period=_number(payload, "T"),
        )
        _ticks_per_step(gait.period, self.tick_rate)  # reject unalignable periods now
        self.pending_gait = gait
        return [self.update("gait_change")]

    def _cmd_push(self, payload: dict) -> list[dict]:
        dvx = _number(payload, "dvx", 0.0)
        dvy = _number(payload, "dvy", 0.0)
        self.engine.push(self._local_tau(), dvx, dvy)
        return [self.update("push")]

    def _cmd_run(self, payload: dict) -> list[dict]:
        speed = _number(payload, "speed", 1.0)
        if speed <= 0.0:
            raise ValueError(f"speed must be positive, got {speed}")
        self.speed = speed
        self.running = True
        return [self.update("none")]

    def _cmd_pause(self, payload: dict) -> list[dict]:
        self.running = False
        return [self.update("none")]

    def _cmd_step_once(self, payload: dict) -> list[dict]:
        """Advance through the next touchdown, emitting every tick on the way."""
        remaining = self.ticks_per_step - self.tick_in_step
        return [self.tick() for _ in range(remaining)]

    def _cmd_reset(self, payload: dict) -> list[dict]:
        com = payload.get("com", [0.0, 0.0])
        vel = payload.get("vel", [0.0, 0.0])
        stance = payload.get("stance_foot", [0.0, 0.0])
        for name, pair in (("com", com), ("vel", vel), ("stance_foot", stance)):
            if not (isinstance(pair, list) and len(pair) == 2):
                raise ValueError(f"field '{name}' must be a [x, y] pair")
        stance_leg = payload.get("stance_leg", 2)
        step_index = payload.get("step_index", 0)
        world = WorldState(
            time=_number(payload, "time", 0.0),
            step_index=int(step_index),
            com=(float(com[0]), float(com[1])),
            vel=(float(vel[0]), float(vel[1])),
            stance_foot=(float(stance[0]), float(stance[1])),
            stance_leg=int(stance_leg),
        )
        self.running = False
        self._reset_engine(world)
        return [self.update("reset")]


# -- wire layer ----------------------------------------------------------


def build_app(
    model: ModelParams,
    initial_gait: Gait3DParams,
    tick_rate: float = 50.0,
    footprint_cap: int = 256,
    ui_dir: str | Path | None = None,
):
    """FastAPI app exposing the session socket at /session (one client each)."""
    # fail fast on an unservable configuration
    SessionCore(model, initial_gait, tick_rate, footprint_cap)

    app = FastAPI(title="lipwalk session")

    @app.websocket("/session")
    async def session_endpoint(ws: WebSocket) -> None:
        await ws.accept()
        core = SessionCore(model, initial_gait, tick_rate, footprint_cap)

        async def send(frame: dict) -> None:
            await ws.send_text(json.dumps(frame) + "\n")

        await send(core.hello())
        await send(core.update("none"))

        queue: asyncio.Queue = asyncio.Queue()
        closed = object()

        async def reader() -> None:
            try:
                while True:
                    text = await ws.receive_text()
                    for line in text.splitlines():
                        line = line.strip()
                        if not line:
                            continue
                        try:
                            queue.put_nowait(json.loads(line))
                        except json.JSONDecodeError as exc:
                            queue.put_nowait(SessionCore.error(f"malformed JSON: {exc.msg}"))
            except WebSocketDisconnect:
                pass
            finally:
                queue.put_nowait(closed)

        reader_task = asyncio.create_task(reader())
        loop = asyncio.get_running_loop()
        next_tick: float | None = None
        try:
            while True:
                if core.running:
                    if next_tick is None:
                        next_tick = loop.time()
                    timeout = max(0.0, next_tick - loop.time())
                    try:
                        msg = await asyncio.wait_for(queue.get(), timeout)
                    except asyncio.TimeoutError:
                        await send(core.tick())
                        next_tick += (1.0 / tick_rate) / core.speed
                        continue
                else:
                    next_tick = None
                    msg = await queue.get()
                if msg is closed:
                    break
                if isinstance(msg, dict) and msg.get("type") == "error":
                    await send(msg)  # reader-side decode failure
                    continue
                for frame in core.handle(msg):
                    await send(frame)
        except WebSocketDisconnect:
            pass
        finally:
            reader_task.cancel()
            log.info("session closed at t=%.3f, %d steps", core.engine.step_start_time,
                     core.engine.step_index)

    resolved_ui = _resolve_ui_dir(ui_dir)
    if resolved_ui is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(resolved_ui), html=True), name="ui")
    else:

        @app.get("/")
        async def index() -> dict:
            return {
                "service": "lipwalk session",
                "protocol": PROTOCOL_VERSION,
                "websocket": "/session",
                "ui": "not built; see frontend/README",
            }

    return app


def _resolve_ui_dir(ui_dir: str | Path | None) -> Path | None:
    if ui_dir is not None:
        p = Path(ui_dir)
        return p if p.is_dir() else None
    candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    return candidate if candidate.is_dir() else None


def serve(
    port: int,
    model: ModelParams,
    initial_gait: Gait3DParams,
    tick_rate: float = 50.0,
    host: str = "127.0.0.1",
    footprint_cap: int = 256,
    ui_dir: str | Path | None = None,
) -> None:
    """Run the session server until interrupted (one session per connection)."""
    import uvicorn

    app = build_app(model, initial_gait, tick_rate, footprint_cap, ui_dir)
    log.info("serving session on ws://%s:%d/session", host, port)
    uvicorn.run(app, host=host, port=port, log_level="warning")
