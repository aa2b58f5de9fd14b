// Top-down canvas view: footprint dots, CoM trail polyline, stance marker.
// Pure: the canvas content is a function of (ViewState, width, height) only.

import type { ViewState } from "./store.js";

// Minimal slice of CanvasRenderingContext2D so tests can substitute a recorder.
export interface Ctx2D {
  fillStyle: string | CanvasGradient | CanvasPattern;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  font: string;
  clearRect(x: number, y: number, w: number, h: number): void;
  fillRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  stroke(): void;
  fill(): void;
  fillText(text: string, x: number, y: number): void;
}

const LEG_COLORS: Record<number, string> = { 1: "#e4572e", 2: "#2e86ab" };

export function render(ctx: Ctx2D, state: ViewState, width: number, height: number): void {
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#10141a";
  ctx.fillRect(0, 0, width, height);

  const cam = state.camera;
  const toScreen = (wx: number, wy: number): [number, number] => [
    width / 2 + (wx - cam.x) * cam.zoom,
    height / 2 - (wy - cam.y) * cam.zoom,
  ];

  drawGrid(ctx, state, width, height, toScreen);

  const update = state.latest;
  if (update) {
    // footprints exactly where the server placed them
    for (const fp of update.footprints) {
      const [sx, sy] = toScreen(fp.x, fp.y);
      ctx.fillStyle = LEG_COLORS[fp.leg] ?? "#888";
      ctx.beginPath();
      ctx.arc(sx, sy, 4, 0, 2 * Math.PI);
      ctx.fill();
    }
    // CoM trail
    if (state.trail.length > 1) {
      ctx.strokeStyle = "#d94f4f";
      ctx.lineWidth = 1.5;
      ctx.beginPath();
      const [x0, y0] = toScreen(state.trail[0][0], state.trail[0][1]);
      ctx.moveTo(x0, y0);
      for (const [wx, wy] of state.trail.slice(1)) {
        const [sx, sy] = toScreen(wx, wy);
        ctx.lineTo(sx, sy);
      }
      ctx.stroke();
    }
    // stance leg: line from foot to CoM
    const [fx, fy] = toScreen(update.stance_foot[0], update.stance_foot[1]);
    const [cx, cy] = toScreen(update.com[0], update.com[1]);
    ctx.strokeStyle = "#9aa5b1";
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.moveTo(fx, fy);
    ctx.lineTo(cx, cy);
    ctx.stroke();
    // CoM marker
    ctx.fillStyle = "#f2f4f8";
    ctx.beginPath();
    ctx.arc(cx, cy, 5, 0, 2 * Math.PI);
    ctx.fill();
    // heading arrow from the active gait
    const theta = (update.gait.theta_deg * Math.PI) / 180;
    const hx = update.com[0] + 0.4 * Math.sin(theta);
    const hy = update.com[1] + 0.4 * Math.cos(theta);
    const [ax, ay] = toScreen(hx, hy);
    ctx.strokeStyle = "#59c9a5";
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    ctx.moveTo(cx, cy);
    ctx.lineTo(ax, ay);
    ctx.stroke();
  }

  drawHud(ctx, state, width, height);
}

function drawGrid(
  ctx: Ctx2D,
  state: ViewState,
  width: number,
  height: number,
  toScreen: (x: number, y: number) => [number, number],
): void {
  const cam = state.camera;
  const halfW = width / 2 / cam.zoom;
  const halfH = height / 2 / cam.zoom;
  ctx.strokeStyle = "#232a33";
  ctx.lineWidth = 1;
  for (let gx = Math.floor(cam.x - halfW); gx <= Math.ceil(cam.x + halfW); gx++) {
    const [sx] = toScreen(gx, 0);
    ctx.beginPath();
    ctx.moveTo(sx, 0);
    ctx.lineTo(sx, height);
    ctx.stroke();
  }
  for (let gy = Math.floor(cam.y - halfH); gy <= Math.ceil(cam.y + halfH); gy++) {
    const [, sy] = toScreen(0, gy);
    ctx.beginPath();
    ctx.moveTo(0, sy);
    ctx.lineTo(width, sy);
    ctx.stroke();
  }
}

function drawHud(ctx: Ctx2D, state: ViewState, width: number, height: number): void {
  ctx.fillStyle = "#e8ebf0";
  ctx.font = "12px monospace";
  const lines: string[] = [`status: ${state.status}`];
  if (state.fatalError) lines.push(`! ${state.fatalError}`);
  const u = state.latest;
  if (u) {
    lines.push(
      `t=${u.t.toFixed(2)}s step=${u.step_index} leg=${u.stance_leg} ` +
        `${u.running ? `running x${u.speed}` : "paused"}`,
    );
    lines.push(
      `gait: a_l=${u.gait.a_l.toFixed(2)} a_w=${u.gait.a_w.toFixed(2)} ` +
        `theta=${u.gait.theta_deg.toFixed(0)} b=${u.gait.b.toFixed(4)} T=${u.gait.T}`,
    );
    if (u.pending_gait) {
      lines.push(
        `next:  a_l=${u.pending_gait.a_l.toFixed(2)} a_w=${u.pending_gait.a_w.toFixed(2)} ` +
          `theta=${u.pending_gait.theta_deg.toFixed(0)} b=${u.pending_gait.b.toFixed(4)}`,
      );
    }
  }
  if (state.pendingCommand) lines.push(`pending: ${state.pendingCommand}`);
  lines.forEach((line, i) => ctx.fillText(line, 8, 16 + 14 * i));
}
