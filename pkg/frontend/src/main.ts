/**
 * Page wiring: widgets -> FrameSource -> socket, socket -> ConsoleState
 * -> canvas + status strip.  All behavior lives in the imported modules;
 * this file only binds DOM events and runs the two loops (30 Hz outbound
 * sampling, rAF-driven redraw of the latest snapshot).
 */

import { EngineClient, SocketLike } from "./client.js";
import { FrameSource } from "./input.js";
import { drawScene, planScene } from "./render.js";
import { ConsoleState } from "./state.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const state = new ConsoleState();
const client = new EngineClient(
  state,
  (url) => new WebSocket(url) as unknown as SocketLike,
);

const canvas = el<HTMLCanvasElement>("scene");
const ctx = canvas.getContext("2d");
if (!ctx) throw new Error("2D canvas unsupported");

const urlInput = el<HTMLInputElement>("engine-url");
const connectBtn = el<HTMLButtonElement>("connect");
const statusDot = el<HTMLSpanElement>("status-dot");
const statusText = el<HTMLSpanElement>("status-text");
const stripMode = el<HTMLSpanElement>("strip-mode");
const stripDensity = el<HTMLSpanElement>("strip-density");
const stripTempo = el<HTMLSpanElement>("strip-tempo");
const stripBeat = el<HTMLSpanElement>("strip-beat");
const stripPalette = el<HTMLSpanElement>("strip-palette");
const stripCounts = el<HTMLSpanElement>("strip-counts");
const pad = el<HTMLDivElement>("pad");
const slider = el<HTMLInputElement>("slider");
const buttons: HTMLButtonElement[] = [
  el<HTMLButtonElement>("bow-b1"),
  el<HTMLButtonElement>("bow-b2"),
  el<HTMLButtonElement>("bow-b3"),
];

const source = new FrameSource({
  clock: () => performance.now(),
  send: (line) => {
    client.sendLine(line);
  },
});

function refreshStatus(): void {
  statusDot.dataset.state = state.connection;
  statusText.textContent = state.connection;
  connectBtn.textContent =
    state.connection === "disconnected" ? "connect" : "disconnect";
}
client.onStatus = refreshStatus;

connectBtn.addEventListener("click", () => {
  if (state.connection === "disconnected") {
    client.connect(urlInput.value);
  } else {
    client.disconnect();
  }
});

// --- gesture pad -----------------------------------------------------------

let padPointer: number | null = null;
let lastPadY = 0;
let lastPadT = 0;

function padCoords(ev: PointerEvent): [number, number] {
  const r = pad.getBoundingClientRect();
  const x = ((ev.clientX - r.left) / r.width) * 2 - 1;
  const y = ((ev.clientY - r.top) / r.height) * 2 - 1;
  return [x, y];
}

pad.addEventListener("pointerdown", (ev) => {
  padPointer = ev.pointerId;
  pad.setPointerCapture(ev.pointerId);
  const [x, y] = padCoords(ev);
  source.setPad(x, y);
  lastPadY = y;
  lastPadT = ev.timeStamp;
});

pad.addEventListener("pointermove", (ev) => {
  if (ev.pointerId !== padPointer) return;
  const [x, y] = padCoords(ev);
  source.setPad(x, y);
  const dtS = (ev.timeStamp - lastPadT) / 1000;
  if (dtS > 0) source.flick((y - lastPadY) / dtS);
  lastPadY = y;
  lastPadT = ev.timeStamp;
});

function padEnd(ev: PointerEvent): void {
  if (ev.pointerId !== padPointer) return;
  padPointer = null;
  source.releasePad();
}
pad.addEventListener("pointerup", padEnd);
pad.addEventListener("pointercancel", padEnd);

// --- buttons, slider, keyboard ---------------------------------------------

buttons.forEach((btn, i) => {
  const index = (i + 1) as 1 | 2 | 3;
  btn.addEventListener("pointerdown", () => source.setButton(index, true));
  btn.addEventListener("pointerup", () => source.setButton(index, false));
  btn.addEventListener("pointerleave", () => source.setButton(index, false));
});

// keys 1/2/3 mirror the three bow buttons
window.addEventListener("keydown", (ev) => {
  if (ev.repeat) return;
  if (ev.key === "1" || ev.key === "2" || ev.key === "3") {
    const index = Number(ev.key) as 1 | 2 | 3;
    source.setButton(index, true);
    buttons[index - 1]?.classList.add("held");
  }
});
window.addEventListener("keyup", (ev) => {
  if (ev.key === "1" || ev.key === "2" || ev.key === "3") {
    const index = Number(ev.key) as 1 | 2 | 3;
    source.setButton(index, false);
    buttons[index - 1]?.classList.remove("held");
  }
});

slider.addEventListener("input", () => {
  source.setSlider(Number(slider.value) / 1000);
});

// --- loops ------------------------------------------------------------------

setInterval(() => {
  if (client.isOpen) source.sample();
}, source.periodMs);

function redraw(): void {
  const snap = state.snapshot;
  const paletteIndex = state.state ? state.state.paletteIndex : 0;
  drawScene(ctx!, planScene(snap, canvas.width, canvas.height, paletteIndex));

  const s = state.strip();
  stripMode.textContent = s.mode;
  stripDensity.textContent = s.density === null ? "--" : s.density.toFixed(2);
  stripTempo.textContent = s.tempo === null ? "--" : `${s.tempo.toFixed(1)} bpm`;
  stripBeat.textContent = s.beat === null ? "--" : `beat ${s.beat + 1}/4`;
  stripPalette.textContent = s.palette === null ? "--" : `palette ${s.palette}`;
  stripCounts.textContent =
    `${state.linesReceived} lines · ${state.hitsSeen} hits · ` +
    `${state.notesSeen} notes · ${s.malformed} dropped`;

  requestAnimationFrame(redraw);
}

refreshStatus();
requestAnimationFrame(redraw);
