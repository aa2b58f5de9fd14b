// DOM wiring: one store, one client, one canvas. Socket frames and input
// events funnel through dispatch(); a render loop repaints from the state.

import { SessionClient, browserSocketFactory } from "./client.js";
import { KEY_BINDINGS, commandFor, type InputAction } from "./input.js";
import { render } from "./render.js";
import { initialState, reduce, type StoreEvent, type ViewState } from "./store.js";

let state: ViewState = initialState();

const canvas = document.getElementById("view") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const logPane = document.getElementById("command-log")!;
const statusPane = document.getElementById("status")!;
const reconnectBtn = document.getElementById("reconnect") as HTMLButtonElement;

const url = `ws://${location.host}/session`;
let client = new SessionClient(url, browserSocketFactory, dispatch);

function dispatch(event: StoreEvent): void {
  state = reduce(state, event);
  syncPanes();
}

function syncPanes(): void {
  statusPane.textContent = state.fatalError ?? state.status;
  statusPane.className = state.status;
  reconnectBtn.hidden = state.status !== "disconnected";
  const entries = [...state.commandLog].reverse();
  logPane.textContent = entries.slice(0, 50).join("\n");
  const errors = document.getElementById("errors")!;
  errors.textContent = state.errors.slice(-3).join("\n");
}

function act(action: InputAction): void {
  if (!client.isConnected) return; // input disabled while disconnected
  const cmd = commandFor(action, state);
  if (cmd) client.send(cmd);
}

window.addEventListener("keydown", (ev: KeyboardEvent) => {
  const binding = KEY_BINDINGS[ev.key];
  if (!binding) return;
  ev.preventDefault();
  act(binding);
});

for (const el of Array.from(document.querySelectorAll<HTMLElement>("[data-action]"))) {
  el.addEventListener("click", () => {
    const spec = el.dataset.action!;
    const magnitude = Number((document.getElementById("shove-mag") as HTMLInputElement).value) || undefined;
    const actions: Record<string, InputAction> = {
      "turn-left": { kind: "turn", direction: -1 },
      "turn-right": { kind: "turn", direction: 1 },
      faster: { kind: "pace", direction: 1 },
      slower: { kind: "pace", direction: -1 },
      wider: { kind: "width", direction: 1 },
      narrower: { kind: "width", direction: -1 },
      "preset-db": { kind: "preset", gain: "b_db" },
      "preset-cp": { kind: "preset", gain: "b_cp" },
      run: { kind: "run", speed: 1.0 },
      pause: { kind: "pause" },
      step: { kind: "step" },
      reset: { kind: "reset" },
      "shove-up": { kind: "shove", axis: "y", direction: 1, magnitude },
      "shove-down": { kind: "shove", axis: "y", direction: -1, magnitude },
      "shove-left": { kind: "shove", axis: "x", direction: -1, magnitude },
      "shove-right": { kind: "shove", axis: "x", direction: 1, magnitude },
    };
    const action = actions[spec];
    if (action) act(action);
  });
}

// camera: drag to pan (disables follow), wheel to zoom, F to re-follow
let dragging = false;
canvas.addEventListener("mousedown", () => (dragging = true));
window.addEventListener("mouseup", () => (dragging = false));
canvas.addEventListener("mousemove", (ev: MouseEvent) => {
  if (dragging) dispatch({ kind: "pan", dx: -ev.movementX, dy: -ev.movementY });
});
canvas.addEventListener("wheel", (ev: WheelEvent) => {
  ev.preventDefault();
  dispatch({ kind: "zoom", factor: ev.deltaY < 0 ? 1.15 : 1 / 1.15 });
});
window.addEventListener("keydown", (ev: KeyboardEvent) => {
  if (ev.key === "f") dispatch({ kind: "follow" });
});

reconnectBtn.addEventListener("click", () => {
  client = new SessionClient(url, browserSocketFactory, dispatch);
  client.connect();
});

function frame(): void {
  const dpr = window.devicePixelRatio || 1;
  const w = canvas.clientWidth;
  const h = canvas.clientHeight;
  if (canvas.width !== w * dpr || canvas.height !== h * dpr) {
    canvas.width = w * dpr;
    canvas.height = h * dpr;
  }
  ctx.setTransform(dpr, 0, 0, dpr, 0, 0);
  render(ctx, state, w, h);
  requestAnimationFrame(frame);
}

client.connect();
requestAnimationFrame(frame);
