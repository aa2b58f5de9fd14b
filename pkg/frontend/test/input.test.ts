import { describe, expect, it } from "vitest";

import { SessionClient, type SocketLike } from "../src/client.js";
import { commandFor } from "../src/input.js";
import type { HelloMsg } from "../src/protocol.js";
import { initialState, reduce, replay, type ViewState } from "../src/store.js";

const hello: HelloMsg = {
  type: "hello",
  protocol: "1",
  model: { g: 10, h: 1, t_c: 0.31622776601683794 },
  gait: { a_l: 0.2, a_w: 0.1, theta_deg: 0, b: 0.42780518974368154, T: 0.3 },
  special_b: {
    b_min: 0.1396779949639673,
    b_cp: 0.31622776601683794,
    b_db: 0.42780518974368154,
    b_max: 0.7159323845233958,
  },
  tick_rate: 50,
  footprint_cap: 256,
};

function connectedState(): ViewState {
  return replay([{ kind: "frame", msg: hello }]);
}

describe("input mapping", () => {
  it("two left turns send two set_gait frames 10 degrees apart", () => {
    let state = connectedState();
    const first = commandFor({ kind: "turn", direction: -1 }, state);
    expect(first && "set_gait" in first && first.set_gait.theta_deg).toBe(-10);
    state = reduce(state, { kind: "sent", cmd: first! });
    const second = commandFor({ kind: "turn", direction: -1 }, state);
    expect(second && "set_gait" in second && second.set_gait.theta_deg).toBe(-20);
  });

  it("pace and width keys nudge by 0.05", () => {
    const state = connectedState();
    const faster = commandFor({ kind: "pace", direction: 1 }, state);
    expect(faster && "set_gait" in faster && faster.set_gait.a_l).toBeCloseTo(0.25, 12);
    const wider = commandFor({ kind: "width", direction: 1 }, state);
    expect(wider && "set_gait" in wider && wider.set_gait.a_w).toBeCloseTo(0.15, 12);
  });

  it("shove uses the default magnitude along a screen axis", () => {
    const cmd = commandFor({ kind: "shove", axis: "x", direction: 1 }, connectedState());
    expect(cmd).toEqual({ push: { dvx: 0.5, dvy: 0 } });
    const up = commandFor({ kind: "shove", axis: "y", direction: 1, magnitude: 1.25 }, connectedState());
    expect(up).toEqual({ push: { dvx: 0, dvy: 1.25 } });
  });

  it("dead-beat preset uses the server-advertised gain untouched", () => {
    const cmd = commandFor({ kind: "preset", gain: "b_db" }, connectedState());
    expect(cmd && "set_gait" in cmd && cmd.set_gait.b).toBe(hello.special_b.b_db);
  });

  it("no gait known yet means no gait command", () => {
    expect(commandFor({ kind: "turn", direction: 1 }, initialState())).toBeNull();
  });
});

describe("client gating", () => {
  it("does not send while disconnected", () => {
    const sent: string[] = [];
    const socket: SocketLike = {
      send: (d) => sent.push(d),
      close: () => undefined,
      set onopen(_fn: () => void) {},
      set onmessage(_fn: (d: string) => void) {},
      set onclose(_fn: () => void) {},
    };
    const client = new SessionClient("ws://x", () => socket, () => undefined);
    client.connect(); // onopen never fires on the fake socket
    expect(client.send({ step_once: {} })).toBe(false);
    expect(sent).toEqual([]);
  });
});
