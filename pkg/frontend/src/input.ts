// Keyboard and button semantics: every interaction maps to one command.
// Arrows steer (theta +-10 deg) and pace (a_l +-0.05), brackets set width
// (a_w +-0.05), IJKL shoves the walker along the screen axes.

import type { Command } from "./protocol.js";
import type { ViewState } from "./store.js";

export const TURN_STEP_DEG = 10.0;
export const LENGTH_STEP = 0.05;
export const WIDTH_STEP = 0.05;
export const DEFAULT_SHOVE = 0.5;

export type InputAction =
  | { kind: "turn"; direction: 1 | -1 }
  | { kind: "pace"; direction: 1 | -1 }
  | { kind: "width"; direction: 1 | -1 }
  | { kind: "shove"; axis: "x" | "y"; direction: 1 | -1; magnitude?: number }
  | { kind: "preset"; gain: "b_db" | "b_cp" }
  | { kind: "run"; speed: number }
  | { kind: "pause" }
  | { kind: "step" }
  | { kind: "reset" };

export const KEY_BINDINGS: Record<string, InputAction> = {
  ArrowLeft: { kind: "turn", direction: -1 },
  ArrowRight: { kind: "turn", direction: 1 },
  ArrowUp: { kind: "pace", direction: 1 },
  ArrowDown: { kind: "pace", direction: -1 },
  "[": { kind: "width", direction: -1 },
  "]": { kind: "width", direction: 1 },
  i: { kind: "shove", axis: "y", direction: 1 },
  k: { kind: "shove", axis: "y", direction: -1 },
  j: { kind: "shove", axis: "x", direction: -1 },
  l: { kind: "shove", axis: "x", direction: 1 },
  " ": { kind: "run", speed: 1.0 },
  s: { kind: "step" },
  r: { kind: "reset" },
};

// Translate an action against the current view state into a wire command.
// Gait edits build on the latest target (pending if one is latched), so two
// quick turn presses produce two commands 10 degrees apart.
export function commandFor(action: InputAction, state: ViewState): Command | null {
  const gait = state.targetGait ?? state.hello?.gait ?? null;
  switch (action.kind) {
    case "turn":
      return gait && { set_gait: { ...gait, theta_deg: gait.theta_deg + action.direction * TURN_STEP_DEG } };
    case "pace":
      return gait && { set_gait: { ...gait, a_l: round3(gait.a_l + action.direction * LENGTH_STEP) } };
    case "width":
      return gait && { set_gait: { ...gait, a_w: round3(gait.a_w + action.direction * WIDTH_STEP) } };
    case "shove": {
      const dv = (action.magnitude ?? DEFAULT_SHOVE) * action.direction;
      return action.axis === "x" ? { push: { dvx: dv, dvy: 0 } } : { push: { dvx: 0, dvy: dv } };
    }
    case "preset": {
      if (!gait || !state.hello) return null;
      const b = state.hello.special_b[action.gain];
      return { set_gait: { ...gait, b } };
    }
    case "run":
      return state.latest?.running ? { pause: {} } : { run: { speed: action.speed } };
    case "pause":
      return { pause: {} };
    case "step":
      return { step_once: {} };
    case "reset":
      return { reset: {} };
  }
}

function round3(x: number): number {
  return Math.round(x * 1000) / 1000;
}
