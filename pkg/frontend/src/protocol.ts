/**
 * Line protocol spoken over the engine websocket.
 *
 * Every message is one UTF-8 line of space-separated fields, first field
 * names the kind:
 *
 *   BOW   <t_ms> <ax> <ay> <az> <b1> <b2> <b3> <slider>
 *   HIT   <t_ms> <drum_id> <velocity>
 *   NOTE  <t_ms> <slot> <midi_pitch> <velocity> <duration_ms>
 *   STATE <t_ms> <mode> <density> <tempo_bpm> <palette_index>
 *   PULSE <t_ms> <beat_index>
 *   SNAP  <t_ms> <n> {x y life}*n {axis offset travel dir}*4
 *         {x y radius color_index}*3
 *
 * Floats render with exactly four decimal places; negative zero folds to
 * "0.0000".  Sensor-frame numerics clamp into range instead of failing,
 * structural problems (unknown kind, field count, bad tokens, out-of-range
 * engine fields) throw ParseError.  This mirrors the engine's parser so
 * the console can validate its own output and everything it receives.
 *
 * Numeric tokens are restricted to canonical ASCII forms (optional sign,
 * decimal digits, standard float syntax).  The engine only ever emits
 * those, so the restriction is invisible on the wire.
 */

export type Mode = "STACCATO" | "SUSTAIN" | "TREMOLO";

export const MODES: readonly Mode[] = ["STACCATO", "SUSTAIN", "TREMOLO"];

export const DENSITY_LADDER: readonly number[] = [0.25, 0.5, 0.75, 1.0];

export const TEMPO_MIN = 80.0;
export const TEMPO_MAX = 200.0;

// accelerometer axes clamp to [-4, 4] g
export const ACCEL_RANGE = 4.0;

export type ParseErrorKind = "BadToken" | "FieldCount" | "NonMonotonicTime";

export class ParseError extends Error {
  readonly kind: ParseErrorKind;

  constructor(kind: ParseErrorKind, message: string) {
    super(message);
    this.name = "ParseError";
    this.kind = kind;
  }
}

export interface SensorFrame {
  kind: "BOW";
  tMs: number;
  ax: number;
  ay: number;
  az: number;
  b1: 0 | 1;
  b2: 0 | 1;
  b3: 0 | 1;
  slider: number;
}

export interface HitEvent {
  kind: "HIT";
  tMs: number;
  drumId: number;
  velocity: number;
}

export interface NoteEvent {
  kind: "NOTE";
  tMs: number;
  slot: number;
  midiPitch: number;
  velocity: number;
  durationMs: number;
}

export interface StateEvent {
  kind: "STATE";
  tMs: number;
  mode: Mode;
  densityLevel: number;
  tempoBpm: number;
  paletteIndex: number;
}

export interface PulseEvent {
  kind: "PULSE";
  tMs: number;
  beatIndex: number;
}

/** (axis, offset, travel, direction) for one drum's walking line. */
export interface WalkerLine {
  axis: "H" | "V";
  offset: number;
  travel: number;
  direction: 1 | -1;
}

export interface CircleShape {
  x: number;
  y: number;
  radius: number;
  colorIndex: number;
}

export interface SnapshotMessage {
  kind: "SNAP";
  tMs: number;
  particles: ReadonlyArray<readonly [number, number, number]>;
  lines: readonly WalkerLine[];
  circles: readonly CircleShape[];
}

export type EngineEvent = HitEvent | NoteEvent | StateEvent | PulseEvent;
export type Message = SensorFrame | EngineEvent | SnapshotMessage;

export function clamp(v: number, lo: number, hi: number): number {
  return v < lo ? lo : v > hi ? hi : v;
}

/**
 * Collapse an analog value onto the 1e-4 wire grid, folding negative
 * zero.  The engine quantizes sensor analogs the same way at parse time,
 * so grid resolution is the only resolution either side ever acts on.
 */
export function quantize4(v: number): number {
  const q = Math.round(v * 1e4) / 1e4;
  return q === 0 ? 0 : q;
}

function repr(tok: string): string {
  const escaped = tok
    .replace(/\\/g, "\\\\")
    .replace(/'/g, "\\'")
    .replace(/\n/g, "\\n")
    .replace(/\r/g, "\\r")
    .replace(/\t/g, "\\t");
  return `'${escaped}'`;
}

function bad(tok: string, what: string): ParseError {
  return new ParseError("BadToken", `bad ${what}: ${repr(tok)}`);
}

const INT_RE = /^[+-]?[0-9]+$/;
const FLOAT_RE = /^[+-]?([0-9]+\.?[0-9]*|\.[0-9]+)([eE][+-]?[0-9]+)?$/;

function intField(tok: string, what: string): number {
  if (!INT_RE.test(tok)) throw bad(tok, what);
  const v = Number(tok);
  // Number() rounds past 2^53; the engine never gets near that.
  if (!Number.isSafeInteger(v)) throw bad(tok, what);
  return v;
}

function floatField(tok: string, what: string): number {
  if (!FLOAT_RE.test(tok)) throw bad(tok, what);
  const v = Number(tok);
  if (!Number.isFinite(v)) throw bad(tok, what);
  return v;
}

function timeField(tok: string): number {
  return Math.max(intField(tok, "t_ms"), 0);
}

function expectFields(parts: string[], n: number, kind: string): void {
  if (parts.length !== n) {
    throw new ParseError(
      "FieldCount",
      `${kind} expects ${n - 1} fields, got ${parts.length - 1}`,
    );
  }
}

function rangedInt(tok: string, lo: number, hi: number, what: string): number {
  const v = intField(tok, what);
  if (v < lo || v > hi) throw bad(tok, `${what} (expected ${lo}..${hi})`);
  return v;
}

function split(line: string): string[] {
  return line.split(/[ \t\r\n\f\v]+/).filter((s) => s.length > 0);
}

/**
 * Render a float with exactly four decimal places.  Anything that would
 * print as "-0.0000" folds into "0.0000", same as the engine, so the
 * rendering is a fixed point under parse-then-encode.
 *
 * On values already sitting on the 1e-4 grid this agrees byte-for-byte
 * with the engine's formatter; off-grid doubles can hit decimal ties where
 * toFixed rounds away from zero while the engine rounds half-even, so
 * everything the console encodes is quantized to the grid first.
 */
export function fmt4(x: number): string {
  const s = x.toFixed(4);
  return s === "-0.0000" ? "0.0000" : s;
}

export function parseSensorLine(line: string): SensorFrame {
  const parts = split(line);
  const p = (i: number): string => parts[i] ?? "";
  if (parts.length === 0 || parts[0] !== "BOW") {
    throw bad(p(0), "message kind");
  }
  expectFields(parts, 9, "BOW");
  const axis = (i: number): number =>
    quantize4(clamp(floatField(p(i), "acceleration"), -ACCEL_RANGE, ACCEL_RANGE));
  const button = (i: number): 0 | 1 =>
    intField(p(i), "button") >= 1 ? 1 : 0;
  return {
    kind: "BOW",
    tMs: timeField(p(1)),
    ax: axis(2),
    ay: axis(3),
    az: axis(4),
    b1: button(5),
    b2: button(6),
    b3: button(7),
    slider: quantize4(clamp(floatField(p(8), "slider"), 0.0, 1.0)),
  };
}

export function parseEventLine(line: string): EngineEvent {
  const parts = split(line);
  const p = (i: number): string => parts[i] ?? "";
  const kind = p(0);
  if (kind === "HIT") {
    expectFields(parts, 4, "HIT");
    return {
      kind: "HIT",
      tMs: timeField(p(1)),
      drumId: rangedInt(p(2), 1, 4, "drum_id"),
      velocity: rangedInt(p(3), 1, 127, "velocity"),
    };
  }
  if (kind === "NOTE") {
    expectFields(parts, 6, "NOTE");
    const dur = intField(p(5), "duration_ms");
    if (dur <= 0) throw bad(p(5), "duration_ms");
    return {
      kind: "NOTE",
      tMs: timeField(p(1)),
      slot: rangedInt(p(2), 0, 7, "slot"),
      midiPitch: rangedInt(p(3), 0, 127, "midi_pitch"),
      velocity: rangedInt(p(4), 1, 127, "velocity"),
      durationMs: dur,
    };
  }
  if (kind === "STATE") {
    expectFields(parts, 6, "STATE");
    const mode = p(2);
    if (!(MODES as readonly string[]).includes(mode)) throw bad(mode, "mode");
    const density = floatField(p(3), "density");
    if (!DENSITY_LADDER.includes(density)) throw bad(p(3), "density");
    const tempo = floatField(p(4), "tempo");
    if (tempo < TEMPO_MIN || tempo > TEMPO_MAX) throw bad(p(4), "tempo");
    const palette = intField(p(5), "palette_index");
    if (palette < 0) throw bad(p(5), "palette_index");
    return {
      kind: "STATE",
      tMs: timeField(p(1)),
      mode: mode as Mode,
      densityLevel: density,
      tempoBpm: tempo,
      paletteIndex: palette,
    };
  }
  if (kind === "PULSE") {
    expectFields(parts, 3, "PULSE");
    return {
      kind: "PULSE",
      tMs: timeField(p(1)),
      beatIndex: rangedInt(p(2), 0, 3, "beat_index"),
    };
  }
  throw bad(kind, "message kind");
}

function unitFloat(tok: string, what: string): number {
  return clamp(floatField(tok, what), 0.0, 1.0);
}

export function parseSnapshotLine(line: string): SnapshotMessage {
  const parts = split(line);
  const p = (i: number): string => parts[i] ?? "";
  if (parts.length === 0 || parts[0] !== "SNAP") {
    throw bad(p(0), "message kind");
  }
  if (parts.length < 3) {
    throw new ParseError("FieldCount", "SNAP header truncated");
  }
  const tMs = timeField(p(1));
  const n = intField(p(2), "particle count");
  if (n < 0) throw bad(p(2), "particle count");
  expectFields(parts, 3 + 3 * n + 4 * 4 + 4 * 3, "SNAP");
  let i = 3;
  const particles: Array<readonly [number, number, number]> = [];
  for (let k = 0; k < n; k++) {
    particles.push([
      unitFloat(p(i), "particle x"),
      unitFloat(p(i + 1), "particle y"),
      unitFloat(p(i + 2), "particle life"),
    ]);
    i += 3;
  }
  const lines: WalkerLine[] = [];
  for (let k = 0; k < 4; k++) {
    const axis = p(i);
    if (axis !== "H" && axis !== "V") throw bad(axis, "axis");
    const direction = intField(p(i + 3), "direction");
    if (direction !== 1 && direction !== -1) throw bad(p(i + 3), "direction");
    lines.push({
      axis,
      offset: unitFloat(p(i + 1), "line offset"),
      travel: unitFloat(p(i + 2), "line travel"),
      direction,
    });
    i += 4;
  }
  const circles: CircleShape[] = [];
  for (let k = 0; k < 3; k++) {
    const radius = clamp(floatField(p(i + 2), "radius"), 0.02, 0.12);
    const colorIndex = intField(p(i + 3), "color_index");
    if (colorIndex < 0) throw bad(p(i + 3), "color_index");
    circles.push({
      x: unitFloat(p(i), "circle x"),
      y: unitFloat(p(i + 1), "circle y"),
      radius,
      colorIndex,
    });
    i += 4;
  }
  return { kind: "SNAP", tMs, particles, lines, circles };
}

export function parseLine(line: string): Message {
  const parts = split(line);
  const kind = parts.length > 0 ? parts[0] : "";
  if (kind === "BOW") return parseSensorLine(line);
  if (kind === "SNAP") return parseSnapshotLine(line);
  return parseEventLine(line);
}

export function encodeSensorFrame(f: SensorFrame): string {
  return (
    `BOW ${f.tMs} ${fmt4(f.ax)} ${fmt4(f.ay)} ${fmt4(f.az)}` +
    ` ${f.b1} ${f.b2} ${f.b3} ${fmt4(f.slider)}`
  );
}

export function encodeEvent(e: EngineEvent): string {
  switch (e.kind) {
    case "HIT":
      return `HIT ${e.tMs} ${e.drumId} ${e.velocity}`;
    case "NOTE":
      return `NOTE ${e.tMs} ${e.slot} ${e.midiPitch} ${e.velocity} ${e.durationMs}`;
    case "STATE":
      return (
        `STATE ${e.tMs} ${e.mode} ${fmt4(e.densityLevel)}` +
        ` ${fmt4(e.tempoBpm)} ${e.paletteIndex}`
      );
    case "PULSE":
      return `PULSE ${e.tMs} ${e.beatIndex}`;
  }
}

export function encodeSnapshot(s: SnapshotMessage): string {
  const out = [`SNAP ${s.tMs} ${s.particles.length}`];
  for (const [x, y, life] of s.particles) {
    out.push(`${fmt4(x)} ${fmt4(y)} ${fmt4(life)}`);
  }
  for (const l of s.lines) {
    out.push(`${l.axis} ${fmt4(l.offset)} ${fmt4(l.travel)} ${l.direction}`);
  }
  for (const c of s.circles) {
    out.push(`${fmt4(c.x)} ${fmt4(c.y)} ${fmt4(c.radius)} ${c.colorIndex}`);
  }
  return out.join(" ");
}

export function encodeMessage(m: Message): string {
  if (m.kind === "BOW") return encodeSensorFrame(m);
  if (m.kind === "SNAP") return encodeSnapshot(m);
  return encodeEvent(m);
}
