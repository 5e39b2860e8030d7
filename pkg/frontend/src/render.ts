/**
 * Snapshot -> draw ops -> canvas.
 *
 * planScene is pure: it turns one engine snapshot into an ordered list of
 * primitive draw operations in pixel coordinates, so geometry is testable
 * without a canvas.  drawScene just replays ops onto a 2D context.
 *
 * The unit square maps straight onto the canvas with y growing downward,
 * which matches the engine's layout: travel 0 on a vertical walker is the
 * top edge (hi-hat home), travel 1 the bottom (bass drum home).
 */

import { SnapshotMessage, WalkerLine } from "./protocol.js";

export const SEGMENT_HALF_LENGTH = 0.15;

export interface Palette {
  background: string;
  particle: string;
  line: string;
  accents: readonly string[];
}

// Display-only color sets; the wire carries indices, never colors.
export const PALETTES: readonly Palette[] = [
  {
    background: "#101418",
    particle: "#9ad1d4",
    line: "#e8e9eb",
    accents: ["#e8554e", "#f19c65", "#ffd265"],
  },
  {
    background: "#14101c",
    particle: "#c6b7f2",
    line: "#f2e9dc",
    accents: ["#5bc0eb", "#9bc53d", "#e55934"],
  },
  {
    background: "#0e1613",
    particle: "#a3e7b4",
    line: "#e4efe7",
    accents: ["#fa7921", "#2aa876", "#ffd265"],
  },
  {
    background: "#1a1212",
    particle: "#f2b5a7",
    line: "#efe6dd",
    accents: ["#0a7b83", "#e8554e", "#f19c65"],
  },
];

export function paletteFor(paletteIndex: number): Palette {
  const p = PALETTES[paletteIndex % PALETTES.length];
  return p ?? PALETTES[0]!;
}

export type DrawOp =
  | { op: "clear"; color: string }
  | { op: "dot"; x: number; y: number; r: number; color: string; alpha: number }
  | {
      op: "segment";
      x1: number;
      y1: number;
      x2: number;
      y2: number;
      width: number;
      color: string;
    }
  | { op: "circle"; x: number; y: number; r: number; color: string };

/** Endpoints of one walker's stick in unit coordinates. */
export function walkerSegment(
  line: WalkerLine,
): [number, number, number, number] {
  if (line.axis === "V") {
    const x = line.offset;
    const y = line.travel;
    return [x - SEGMENT_HALF_LENGTH, y, x + SEGMENT_HALF_LENGTH, y];
  }
  const x = line.travel;
  const y = line.offset;
  return [x, y - SEGMENT_HALF_LENGTH, x, y + SEGMENT_HALF_LENGTH];
}

export function planScene(
  snap: SnapshotMessage | null,
  width: number,
  height: number,
  paletteIndex: number,
): DrawOp[] {
  const pal = paletteFor(paletteIndex);
  const ops: DrawOp[] = [{ op: "clear", color: pal.background }];
  if (!snap) return ops;
  for (const [x, y, life] of snap.particles) {
    ops.push({
      op: "dot",
      x: x * width,
      y: y * height,
      r: 1 + 2 * life,
      color: pal.particle,
      alpha: 0.15 + 0.85 * life,
    });
  }
  for (const line of snap.lines) {
    const [x1, y1, x2, y2] = walkerSegment(line);
    ops.push({
      op: "segment",
      x1: x1 * width,
      y1: y1 * height,
      x2: x2 * width,
      y2: y2 * height,
      width: 3,
      color: pal.line,
    });
  }
  for (const c of snap.circles) {
    ops.push({
      op: "circle",
      x: c.x * width,
      y: c.y * height,
      r: c.radius * Math.min(width, height),
      color: pal.accents[c.colorIndex % pal.accents.length] ?? pal.line,
    });
  }
  return ops;
}

export function drawScene(ctx: CanvasRenderingContext2D, ops: DrawOp[]): void {
  for (const d of ops) {
    switch (d.op) {
      case "clear":
        ctx.globalAlpha = 1;
        ctx.fillStyle = d.color;
        ctx.fillRect(0, 0, ctx.canvas.width, ctx.canvas.height);
        break;
      case "dot":
        ctx.globalAlpha = d.alpha;
        ctx.fillStyle = d.color;
        ctx.beginPath();
        ctx.arc(d.x, d.y, d.r, 0, Math.PI * 2);
        ctx.fill();
        break;
      case "segment":
        ctx.globalAlpha = 1;
        ctx.strokeStyle = d.color;
        ctx.lineWidth = d.width;
        ctx.lineCap = "round";
        ctx.beginPath();
        ctx.moveTo(d.x1, d.y1);
        ctx.lineTo(d.x2, d.y2);
        ctx.stroke();
        break;
      case "circle":
        ctx.globalAlpha = 1;
        ctx.strokeStyle = d.color;
        ctx.lineWidth = 2.5;
        ctx.beginPath();
        ctx.arc(d.x, d.y, d.r, 0, Math.PI * 2);
        ctx.stroke();
        break;
    }
  }
  ctx.globalAlpha = 1;
}
