import { describe, expect, it } from "vitest";

import {
  PROTOCOL_VERSION,
  ProtocolError,
  decodeServerLine,
  describeCommand,
  encodeCommand,
} from "../src/protocol.js";

const hello = {
  type: "hello",
  protocol: PROTOCOL_VERSION,
  model: { g: 10, h: 1, t_c: 0.31622776601683794 },
  gait: { a_l: 0.2, a_w: 0.1, theta_deg: 0, b: 0.42780518974368154, T: 0.3 },
  special_b: { b_min: 0.1397, b_cp: 0.3162, b_db: 0.4278, b_max: 0.7159 },
  tick_rate: 50,
  footprint_cap: 256,
};

describe("decodeServerLine", () => {
  it("accepts a matching hello", () => {
    const msg = decodeServerLine(JSON.stringify(hello));
    expect(msg.type).toBe("hello");
  });

  it("rejects a version mismatch", () => {
    const bad = { ...hello, protocol: "2" };
    expect(() => decodeServerLine(JSON.stringify(bad))).toThrow(ProtocolError);
    expect(() => decodeServerLine(JSON.stringify(bad))).toThrow(/version mismatch/);
  });

  it("rejects garbage and unknown frames", () => {
    expect(() => decodeServerLine("not json")).toThrow(ProtocolError);
    expect(() => decodeServerLine('{"no_type": 1}')).toThrow(ProtocolError);
    expect(() => decodeServerLine('{"type": "telemetry"}')).toThrow(ProtocolError);
  });

  it("passes numbers through bit-exactly", () => {
    const msg = decodeServerLine(JSON.stringify(hello));
    if (msg.type !== "hello") throw new Error("expected hello");
    expect(msg.gait.b).toBe(0.42780518974368154);
  });
});

describe("encodeCommand", () => {
  it("emits one JSON object per line", () => {
    const line = encodeCommand({ push: { dvx: 0.5, dvy: 0 } });
    expect(line.endsWith("\n")).toBe(true);
    expect(JSON.parse(line)).toEqual({ push: { dvx: 0.5, dvy: 0 } });
  });

  it("describes commands for the log pane", () => {
    expect(describeCommand({ step_once: {} })).toBe("step_once");
    expect(describeCommand({ push: { dvx: 0.5, dvy: 0 } })).toContain("dvx=0.5");
  });
});
