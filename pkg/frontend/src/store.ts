// Single state store for the console. Events (socket frames, sent commands,
// connection changes) reduce into a new ViewState; rendering reads the state
// and never touches the simulation. Replaying a recorded event log therefore
// reproduces the exact same final state.

import type { Command, GaitWire, HelloMsg, UpdateMsg } from "./protocol.js";
import { describeCommand } from "./protocol.js";

export type ConnectionStatus =
  | "idle"
  | "connecting"
  | "connected"
  | "disconnected"
  | "version_mismatch";

export interface Camera {
  x: number;
  y: number;
  zoom: number; // pixels per metre
  follow: boolean;
}

export interface ViewState {
  status: ConnectionStatus;
  fatalError: string | null; // blocking banner (version mismatch)
  hello: HelloMsg | null;
  latest: UpdateMsg | null;
  trail: Array<[number, number]>; // CoM positions received so far (bounded)
  camera: Camera;
  targetGait: GaitWire | null; // what the next increment should build on
  pendingCommand: string | null;
  commandLog: string[];
  errors: string[];
}

export const TRAIL_CAP = 2000;
export const LOG_CAP = 200;

export type StoreEvent =
  | { kind: "connecting" }
  | { kind: "open" }
  | { kind: "frame"; msg: HelloMsg | UpdateMsg }
  | { kind: "server_error"; reason: string }
  | { kind: "fatal"; reason: string }
  | { kind: "closed" }
  | { kind: "sent"; cmd: Command }
  | { kind: "pan"; dx: number; dy: number }
  | { kind: "zoom"; factor: number }
  | { kind: "follow" };

export function initialState(): ViewState {
  return {
    status: "idle",
    fatalError: null,
    hello: null,
    latest: null,
    trail: [],
    camera: { x: 0, y: 0, zoom: 80, follow: true },
    targetGait: null,
    pendingCommand: null,
    commandLog: [],
    errors: [],
  };
}

function bounded<T>(items: T[], cap: number): T[] {
  return items.length > cap ? items.slice(items.length - cap) : items;
}

export function reduce(state: ViewState, event: StoreEvent): ViewState {
  switch (event.kind) {
    case "connecting":
      return { ...state, status: "connecting", fatalError: null };
    case "open":
      return { ...state, status: "connected" };
    case "frame": {
      if (event.msg.type === "hello") {
        // a fresh session: drop any state from a previous connection
        return {
          ...state,
          status: "connected",
          hello: event.msg,
          latest: null,
          trail: [],
          targetGait: { ...event.msg.gait },
          pendingCommand: null,
        };
      }
      const update = event.msg;
      const trail =
        update.last_event === "reset"
          ? [update.com]
          : bounded([...state.trail, update.com], TRAIL_CAP);
      const camera = state.camera.follow
        ? { ...state.camera, x: update.com[0], y: update.com[1] }
        : state.camera;
      return {
        ...state,
        latest: update,
        trail,
        camera,
        targetGait: { ...(update.pending_gait ?? update.gait) },
        pendingCommand: update.pending_gait ? state.pendingCommand : null,
      };
    }
    case "server_error":
      return { ...state, errors: bounded([...state.errors, event.reason], LOG_CAP) };
    case "fatal":
      return { ...state, status: "version_mismatch", fatalError: event.reason };
    case "closed":
      return state.status === "version_mismatch"
        ? state
        : { ...state, status: "disconnected" };
    case "sent": {
      const cmd = event.cmd;
      const targetGait = "set_gait" in cmd ? { ...cmd.set_gait } : state.targetGait;
      return {
        ...state,
        targetGait,
        pendingCommand: describeCommand(cmd),
        commandLog: bounded([...state.commandLog, describeCommand(cmd)], LOG_CAP),
      };
    }
    case "pan": {
      const cam = state.camera;
      return {
        ...state,
        camera: { ...cam, follow: false, x: cam.x + event.dx / cam.zoom, y: cam.y - event.dy / cam.zoom },
      };
    }
    case "zoom": {
      const zoom = Math.min(800, Math.max(10, state.camera.zoom * event.factor));
      return { ...state, camera: { ...state.camera, zoom } };
    }
    case "follow":
      return { ...state, camera: { ...state.camera, follow: true } };
  }
}

export function replay(events: StoreEvent[]): ViewState {
  return events.reduce(reduce, initialState());
}
