"""Live session: deterministic core, simulator equivalence, and the wire protocol."""

import json
import math

import numpy as np
import pytest

from lipwalk import (
    Gait3DParams,
    InvalidParameterError,
    ModelParams,
    PushEvent,
    WorldState,
    simulate_3d,
    special_b,
    step_constants,
)
from lipwalk.session import PROTOCOL_VERSION, SessionCore, build_app

MODEL = ModelParams(10.0, 1.0)
GAINS = special_b(step_constants(0.3, MODEL), MODEL)
TICK_RATE = 50.0
TICKS_PER_STEP = 15


def gait(**kw) -> Gait3DParams:
    base = dict(a_l=0.2, a_w=0.1, theta=0.0, b=GAINS.b_db, period=0.3)
    base.update(kw)
    return Gait3DParams(**base)


def gait_wire(g: Gait3DParams) -> dict:
    return {"a_l": g.a_l, "a_w": g.a_w, "theta_deg": math.degrees(g.theta),
            "b": g.b, "T": g.period}


def strip_clock(frame: dict) -> dict:
    return {k: v for k, v in frame.items() if k != "wall_time"}


class TestSessionCore:
    def test_handshake_advertises_model_and_gains(self):
        core = SessionCore(MODEL, gait(), TICK_RATE)
        hello = core.hello()
        assert hello["protocol"] == PROTOCOL_VERSION
        assert hello["model"]["t_c"] == MODEL.t_c
        assert hello["special_b"]["b_db"] == GAINS.b_db

    def test_rejects_unaligned_period(self):
        with pytest.raises(InvalidParameterError):
            SessionCore(MODEL, gait(period=0.31), TICK_RATE)

    def test_step_once_emits_every_tick(self):
        core = SessionCore(MODEL, gait(), TICK_RATE)
        frames = core.handle({"step_once": {}})
        assert len(frames) == TICKS_PER_STEP
        assert [f["last_event"] for f in frames[:-1]] == ["none"] * (TICKS_PER_STEP - 1)
        assert frames[-1]["last_event"] == "touchdown"
        assert frames[-1]["step_index"] == 1
        assert len(frames[-1]["footprints"]) == 2

    def test_gait_latches_at_touchdown(self):
        core = SessionCore(MODEL, gait(a_l=0.0, a_w=0.0), TICK_RATE)
        for _ in range(7):
            core.tick()
        new = gait(a_l=0.3)
        (ack,) = core.handle({"set_gait": gait_wire(new)})
        assert ack["last_event"] == "gait_change"
        assert ack["gait"]["a_l"] == 0.0  # still active
        assert ack["pending_gait"]["a_l"] == 0.3
        frames = core.handle({"step_once": {}})
        td = frames[-1]
        assert td["gait"]["a_l"] == 0.3
        assert td["pending_gait"] is None
        # the touchdown placement already used the latched gait: from rest the
        # foot lands a_l behind the CoM so the walker tips forward
        assert td["footprints"][-1]["y"] == pytest.approx(-0.3, abs=1e-12)

    def test_push_applies_at_current_tick(self):
        core = SessionCore(MODEL, gait(a_l=0.0, a_w=0.0), TICK_RATE)
        for _ in range(5):
            before = core.tick()
        (ack,) = core.handle({"push": {"dvx": 0.5, "dvy": -0.25}})
        assert ack["last_event"] == "push"
        assert ack["t"] == before["t"]
        assert ack["vel"][0] == pytest.approx(before["vel"][0] + 0.5, abs=1e-15)
        assert ack["vel"][1] == pytest.approx(before["vel"][1] - 0.25, abs=1e-15)

    def test_deadbeat_push_recovery(self):
        core = SessionCore(MODEL, gait(a_l=0.0, a_w=0.0), TICK_RATE)
        core.handle({"step_once": {}})
        core.tick()
        core.handle({"push": {"dvx": 0.5}})
        first = core.handle({"step_once": {}})[-1]
        second = core.handle({"step_once": {}})[-1]
        assert abs(first["vel"][0]) > 1e-3
        assert abs(second["vel"][0]) < 1e-9
        assert abs(second["vel"][1]) < 1e-9

    def test_reset_restores_rest(self):
        core = SessionCore(MODEL, gait(), TICK_RATE)
        core.handle({"run": {"speed": 2.0}})
        core.handle({"step_once": {}})
        (frame,) = core.handle({"reset": {"com": [1.0, 2.0], "stance_foot": [1.0, 2.0]}})
        assert frame["last_event"] == "reset"
        assert frame["t"] == 0.0
        assert frame["step_index"] == 0
        assert frame["com"] == [1.0, 2.0]
        assert frame["running"] is False
        assert len(frame["footprints"]) == 1

    def test_malformed_commands_yield_error_frames(self):
        core = SessionCore(MODEL, gait(), TICK_RATE)
        cases = [
            42,
            {},
            {"run": {}, "pause": {}},
            {"warp": {}},
            {"push": {"dvx": "fast"}},
            {"set_gait": {"a_l": 0.1}},
            {"set_gait": gait_wire(gait(period=0.317))},
            {"run": {"speed": -1.0}},
        ]
        for msg in cases:
            frames = core.handle(msg)
            assert len(frames) == 1 and frames[0]["type"] == "error", msg
        # the session still works afterwards
        assert core.handle({"step_once": {}})[-1]["last_event"] == "touchdown"

    def test_footprint_ring_is_bounded(self):
        core = SessionCore(MODEL, gait(), TICK_RATE, footprint_cap=5)
        for _ in range(12):
            frames = core.handle({"step_once": {}})
        prints = frames[-1]["footprints"]
        assert len(prints) == 5
        assert prints[-1]["step"] == 12  # newest last

    def test_command_script_replays_identically(self):
        script = [
            {"reset": {}},
            {"step_once": {}},
            {"push": {"dvx": 0.4, "dvy": 0.1}},
            {"step_once": {}},
            {"set_gait": gait_wire(gait(theta=math.radians(20.0)))},
            {"step_once": {}},
            {"step_once": {}},
        ]

        def run():
            core = SessionCore(MODEL, gait(), TICK_RATE)
            frames = [core.hello(), core.update()]
            for cmd in script:
                frames.extend(core.handle(cmd))
            return [strip_clock(f) for f in frames]

        assert run() == run()


class TestSimulatorEquivalence:
    def test_session_matches_batch_run(self):
        g0 = gait()
        g1 = gait(theta=math.radians(45.0), a_l=0.25)
        n_steps = 6
        push_step, push_tick = 2, 7
        push = PushEvent(push_step * 0.3 + push_tick / TICK_RATE, 0.4, -0.2)

        core = SessionCore(MODEL, g0, TICK_RATE)
        tick_frames = [core.update()]
        for step in range(n_steps):
            for tick in range(1, TICKS_PER_STEP + 1):
                if step == push_step and tick == push_tick + 1:
                    # the ack carries the post-push state at the same boundary
                    # and supersedes that boundary's tick frame
                    (ack,) = core.handle({"push": {"dvx": push.dvx, "dvy": push.dvy}})
                    tick_frames[-1] = ack
                if step == 2 and tick == 3:  # latched at touchdown 3
                    core.handle({"set_gait": gait_wire(g1)})
                tick_frames.append(core.tick())

        trace = simulate_3d(
            WorldState.initial_3d(),
            [(0, g0), (3, g1)],
            n_steps,
            pushes=[push],
            sample_rate=TICK_RATE,
            model=MODEL,
        )
        s = trace.samples
        assert len(tick_frames) == len(s.t) + 1  # final touchdown frame is extra
        for i in range(len(s.t)):
            f = tick_frames[i]
            assert f["t"] == pytest.approx(s.t[i], abs=1e-12)
            assert f["com"][0] == pytest.approx(s.com_x[i], abs=1e-12)
            assert f["com"][1] == pytest.approx(s.com_y[i], abs=1e-12)
            assert f["vel"][0] == pytest.approx(s.vx[i], abs=1e-12)
            assert f["vel"][1] == pytest.approx(s.vy[i], abs=1e-12)
            assert f["stance_foot"][0] == pytest.approx(s.stance_x[i], abs=1e-12)
            assert f["stance_foot"][1] == pytest.approx(s.stance_y[i], abs=1e-12)
            assert f["step_index"] == s.step_index[i]
        final = tick_frames[-1]
        last_rec = trace.records[-1]
        assert final["step_index"] == last_rec.index
        session_prints = np.array([[p["x"], p["y"]] for p in final["footprints"]])
        assert np.allclose(session_prints, trace.footprints(), atol=1e-12)

    def test_in_place_session_keeps_com_centered(self):
        core = SessionCore(MODEL, gait(a_l=0.0, a_w=0.1), TICK_RATE)
        frames = []
        for _ in range(16):
            frames.extend(core.handle({"step_once": {}}))
        ys = [f["com"][1] for f in frames]
        assert max(abs(y) for y in ys) < 1e-12  # no progression along the heading
        feet = [p["x"] for p in frames[-1]["footprints"]]
        assert max(feet) > 0.0 > min(feet)  # alternating side-to-side footholds


class TestWireProtocol:
    @pytest.fixture
    def client(self):
        from starlette.testclient import TestClient

        app = build_app(MODEL, gait(), TICK_RATE)
        with TestClient(app) as client:
            yield client

    def recv(self, ws) -> dict:
        return json.loads(ws.receive_text())

    def test_handshake_then_static_update(self, client):
        with client.websocket_connect("/session") as ws:
            hello = self.recv(ws)
            assert hello["type"] == "hello"
            assert hello["protocol"] == PROTOCOL_VERSION
            assert hello["special_b"]["b_db"] == GAINS.b_db
            first = self.recv(ws)
            assert first["type"] == "update"
            assert first["t"] == 0.0
            assert first["running"] is False

    def test_step_once_over_wire(self, client):
        with client.websocket_connect("/session") as ws:
            self.recv(ws), self.recv(ws)
            ws.send_text(json.dumps({"step_once": {}}) + "\n")
            frames = [self.recv(ws) for _ in range(TICKS_PER_STEP)]
            assert frames[-1]["last_event"] == "touchdown"
            assert frames[-1]["step_index"] == 1

    def test_malformed_line_keeps_session_alive(self, client):
        with client.websocket_connect("/session") as ws:
            self.recv(ws), self.recv(ws)
            ws.send_text("this is not json\n")
            err = self.recv(ws)
            assert err["type"] == "error" and "malformed" in err["reason"]
            ws.send_text(json.dumps({"pause": {}}))
            assert self.recv(ws)["type"] == "update"

    def test_run_streams_updates(self, client):
        with client.websocket_connect("/session") as ws:
            self.recv(ws), self.recv(ws)
            ws.send_text(json.dumps({"run": {"speed": 20.0}}))
            ack = self.recv(ws)
            assert ack["running"] is True
            ticks = [self.recv(ws) for _ in range(3)]
            assert [f["type"] for f in ticks] == ["update"] * 3
            assert ticks[0]["t"] < ticks[1]["t"] < ticks[2]["t"]
            ws.send_text(json.dumps({"pause": {}}))
            # drain until the pause ack (ticks may still be in flight)
            while True:
                frame = self.recv(ws)
                if frame["running"] is False:
                    break
