/**
 * Scene geometry against engine-generated snapshots.  The home-layout
 * golden fixture pins the four walker sticks to their kit positions:
 * hi-hat top center, bass bottom center, ride and tom on the flanks.
 */

import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";
import { parseSnapshotLine } from "../src/protocol.js";
import {
  DrawOp,
  PALETTES,
  paletteFor,
  planScene,
  walkerSegment,
} from "../src/render.js";

const W = 640;
const H = 640;

function fixture(name: string): string {
  return readFileSync(
    new URL(`./fixtures/${name}`, import.meta.url),
    "utf8",
  ).trim();
}

const homeSnap = parseSnapshotLine(fixture("golden-home-snap.txt"));
const busySnap = parseSnapshotLine(fixture("golden-snap.txt"));

function segments(ops: DrawOp[]) {
  return ops.filter((o) => o.op === "segment");
}

describe("home layout anchors", () => {
  const ops = planScene(homeSnap, W, H, 0);
  const segs = segments(ops);

  it("draws exactly four walker sticks", () => {
    expect(segs).toHaveLength(4);
  });

  it("pins the hi-hat stick to the top center", () => {
    const s = segs[0]!;
    expect((s.x1 + s.x2) / 2).toBeCloseTo(W / 2, 6);
    expect(s.y1).toBe(0);
    expect(s.y2).toBe(0);
    // horizontal stick: spans the center x band
    expect(s.x1).toBeCloseTo(0.35 * W, 6);
    expect(s.x2).toBeCloseTo(0.65 * W, 6);
  });

  it("pins the bass stick to the bottom center", () => {
    const s = segs[1]!;
    expect((s.x1 + s.x2) / 2).toBeCloseTo(W / 2, 6);
    expect(s.y1).toBe(H);
    expect(s.y2).toBe(H);
  });

  it("pins the ride stick to the left flank, vertical", () => {
    const s = segs[2]!;
    expect(s.x1).toBe(0);
    expect(s.x2).toBe(0);
    expect((s.y1 + s.y2) / 2).toBeCloseTo(H / 2, 6);
    expect(s.y1).toBeCloseTo(0.35 * H, 6);
    expect(s.y2).toBeCloseTo(0.65 * H, 6);
  });

  it("pins the tom stick to the right flank, vertical", () => {
    const s = segs[3]!;
    expect(s.x1).toBe(W);
    expect(s.x2).toBe(W);
    expect((s.y1 + s.y2) / 2).toBeCloseTo(H / 2, 6);
  });

  it("keeps every stick inside its home pixel region", () => {
    // region checks: midpoints land in the expected ninth of the canvas
    const mid = (s: { x1: number; y1: number; x2: number; y2: number }) => [
      (s.x1 + s.x2) / 2,
      (s.y1 + s.y2) / 2,
    ];
    const [hx, hy] = mid(segs[0]!);
    expect(hx).toBeGreaterThan(W / 3);
    expect(hx).toBeLessThan((2 * W) / 3);
    expect(hy).toBeLessThan(H / 3);
    const [bx, by] = mid(segs[1]!);
    expect(bx).toBeGreaterThan(W / 3);
    expect(by).toBeGreaterThan((2 * H) / 3);
    const [rx, ry] = mid(segs[2]!);
    expect(rx).toBeLessThan(W / 3);
    expect(ry).toBeGreaterThan(H / 3);
    expect(ry).toBeLessThan((2 * H) / 3);
    const [tx, ty] = mid(segs[3]!);
    expect(tx).toBeGreaterThan((2 * W) / 3);
    expect(ty).toBeGreaterThan(H / 3);
    expect(ty).toBeLessThan((2 * H) / 3);
  });
});

describe("scene composition", () => {
  it("renders a particle-free snapshot as background + 4 sticks + 3 circles", () => {
    const bare = parseSnapshotLine(
      "SNAP 0 0 V 0.5000 0.0000 1 V 0.5000 1.0000 -1 H 0.5000 0.0000 1" +
        " H 0.5000 1.0000 -1 0.3000 0.4000 0.0600 0 0.6000 0.7000 0.0600 1" +
        " 0.1000 0.2000 0.0600 2",
    );
    const ops = planScene(bare, W, H, 0);
    expect(ops.map((o) => o.op)).toEqual([
      "clear",
      "segment",
      "segment",
      "segment",
      "segment",
      "circle",
      "circle",
      "circle",
    ]);
  });

  it("renders one dot per particle, inside the canvas, life-faded", () => {
    const ops = planScene(busySnap, W, H, 0);
    const dots = ops.filter((o) => o.op === "dot");
    expect(dots).toHaveLength(busySnap.particles.length);
    for (const d of dots) {
      expect(d.x).toBeGreaterThanOrEqual(0);
      expect(d.x).toBeLessThanOrEqual(W);
      expect(d.y).toBeGreaterThanOrEqual(0);
      expect(d.y).toBeLessThanOrEqual(H);
      expect(d.alpha).toBeGreaterThan(0);
      expect(d.alpha).toBeLessThanOrEqual(1);
    }
  });

  it("scales circles by the shorter canvas side", () => {
    const ops = planScene(busySnap, 800, 400, 0);
    const circles = ops.filter((o) => o.op === "circle");
    expect(circles).toHaveLength(3);
    circles.forEach((c, i) => {
      expect(c.r).toBeCloseTo(busySnap.circles[i]!.radius * 400, 6);
    });
  });

  it("draws nothing but the background before the first snapshot", () => {
    const ops = planScene(null, W, H, 0);
    expect(ops).toHaveLength(1);
    expect(ops[0]!.op).toBe("clear");
  });
});

describe("direction is future-only", () => {
  it("a flipped direction leaves the drawn geometry unchanged", () => {
    const flipped = {
      ...homeSnap,
      lines: homeSnap.lines.map((l) => ({
        ...l,
        direction: (l.direction === 1 ? -1 : 1) as 1 | -1,
      })),
    };
    expect(planScene(flipped, W, H, 0)).toEqual(planScene(homeSnap, W, H, 0));
  });

  it("walkerSegment ignores direction entirely", () => {
    for (const l of homeSnap.lines) {
      const other = {
        ...l,
        direction: (l.direction === 1 ? -1 : 1) as 1 | -1,
      };
      expect(walkerSegment(other)).toEqual(walkerSegment(l));
    }
  });
});

describe("palettes", () => {
  it("cycles palette and accent indices instead of overflowing", () => {
    expect(paletteFor(PALETTES.length + 1)).toBe(PALETTES[1]);
    const recolored = {
      ...busySnap,
      circles: busySnap.circles.map((c, i) => ({ ...c, colorIndex: 90 + i })),
    };
    const ops = planScene(recolored, W, H, 2);
    const circles = ops.filter((o) => o.op === "circle");
    for (const c of circles) {
      expect(paletteFor(2).accents).toContain(c.color);
    }
  });

  it("different palettes paint different backgrounds", () => {
    const a = planScene(homeSnap, W, H, 0)[0]!;
    const b = planScene(homeSnap, W, H, 1)[0]!;
    expect(a.op).toBe("clear");
    expect(a).not.toEqual(b);
  });
});
