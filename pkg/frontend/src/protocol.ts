// Wire types for the session's newline-delimited JSON protocol, plus
// decoding with a protocol-version check. The client never computes
// dynamics: everything it renders arrives in these frames.

export const PROTOCOL_VERSION = "1";

export interface GaitWire {
  a_l: number;
  a_w: number;
  theta_deg: number;
  b: number;
  T: number;
}

export interface HelloMsg {
  type: "hello";
  protocol: string;
  model: { g: number; h: number; t_c: number };
  gait: GaitWire;
  special_b: { b_min: number; b_cp: number; b_db: number; b_max: number };
  tick_rate: number;
  footprint_cap: number;
}

export interface Footprint {
  step: number;
  leg: number;
  x: number;
  y: number;
}

export interface UpdateMsg {
  type: "update";
  t: number;
  step_index: number;
  com: [number, number];
  vel: [number, number];
  stance_foot: [number, number];
  stance_leg: number;
  gait: GaitWire;
  pending_gait: GaitWire | null;
  last_event: "touchdown" | "push" | "gait_change" | "reset" | "none";
  footprints: Footprint[];
  running: boolean;
  speed: number;
  wall_time: number;
}

export interface ErrorMsg {
  type: "error";
  reason: string;
}

export type ServerMsg = HelloMsg | UpdateMsg | ErrorMsg;

export type Command =
  | { set_gait: GaitWire }
  | { push: { dvx: number; dvy: number } }
  | { run: { speed: number } }
  | { pause: Record<string, never> }
  | { step_once: Record<string, never> }
  | { reset: Record<string, never> };

export class ProtocolError extends Error {}

export function decodeServerLine(line: string): ServerMsg {
  let obj: unknown;
  try {
    obj = JSON.parse(line);
  } catch {
    throw new ProtocolError(`not JSON: ${line.slice(0, 80)}`);
  }
  if (typeof obj !== "object" || obj === null || !("type" in obj)) {
    throw new ProtocolError("frame has no type field");
  }
  const msg = obj as ServerMsg;
  if (msg.type !== "hello" && msg.type !== "update" && msg.type !== "error") {
    throw new ProtocolError(`unknown frame type ${(msg as { type: string }).type}`);
  }
  if (msg.type === "hello" && msg.protocol !== PROTOCOL_VERSION) {
    throw new ProtocolError(
      `protocol version mismatch: server speaks ${msg.protocol}, client speaks ${PROTOCOL_VERSION}`,
    );
  }
  return msg;
}

export function encodeCommand(cmd: Command): string {
  return JSON.stringify(cmd) + "\n";
}

// Human-readable one-liner for the command log pane.
export function describeCommand(cmd: Command): string {
  if ("set_gait" in cmd) {
    const g = cmd.set_gait;
    return `set_gait a_l=${g.a_l.toFixed(2)} a_w=${g.a_w.toFixed(2)} ` +
      `theta=${g.theta_deg.toFixed(0)} b=${g.b.toFixed(4)} T=${g.T}`;
  }
  if ("push" in cmd) return `push dvx=${cmd.push.dvx} dvy=${cmd.push.dvy}`;
  if ("run" in cmd) return `run x${cmd.run.speed}`;
  if ("pause" in cmd) return "pause";
  if ("step_once" in cmd) return "step_once";
  return "reset";
}
