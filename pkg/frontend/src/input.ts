/**
 * Virtual bow: turns widget state into a 30 Hz stream of BOW lines.
 *
 * The gesture pad maps pointer x/y to ax/ay in [-1, 1]; a vertical flick
 * contributes a decaying az envelope so the gesture spans several frames
 * the way a real accelerometer spike does.  Buttons are level-sampled,
 * with a one-frame latch so a click shorter than the sample period still
 * produces the 1-then-0 edge the engine debounces on.
 *
 * Every analog value is quantized to the 1e-4 wire grid before encoding;
 * on that grid the four-decimal rendering is exact, so frames the console
 * emits are byte-identical to what the engine would echo back.
 */

import { ACCEL_RANGE, clamp, encodeSensorFrame, quantize4 } from "./protocol.js";

export const FRAME_HZ = 30;

// pad-units/second of pointer travel -> g on the az axis
const FLICK_GAIN = 0.1;
// per-frame decay of the flick envelope
const FLICK_DECAY = 0.6;
const FLICK_FLOOR = 0.005;

export interface FrameSourceOptions {
  clock: () => number;
  send: (line: string) => void;
  hz?: number;
}

export class FrameSource {
  readonly periodMs: number;

  private readonly clock: () => number;
  private readonly send: (line: string) => void;
  private readonly t0: number;
  private lastT = 0;

  private padX = 0;
  private padY = 0;
  private azEnv = 0;
  private slider = 0;
  private down: [boolean, boolean, boolean] = [false, false, false];
  private latch: [boolean, boolean, boolean] = [false, false, false];

  framesSent = 0;

  constructor(opts: FrameSourceOptions) {
    this.clock = opts.clock;
    this.send = opts.send;
    this.periodMs = 1000 / (opts.hz ?? FRAME_HZ);
    this.t0 = this.clock();
  }

  /** Pointer position on the pad, both axes in [-1, 1]. */
  setPad(x: number, y: number): void {
    this.padX = clamp(x, -1, 1);
    this.padY = clamp(y, -1, 1);
  }

  /** Pointer left the pad: position springs back to rest. */
  releasePad(): void {
    this.padX = 0;
    this.padY = 0;
  }

  /** Vertical flick at `velocity` pad-units/s; kicks the az envelope. */
  flick(velocity: number): void {
    this.azEnv = clamp(velocity * FLICK_GAIN, -ACCEL_RANGE, ACCEL_RANGE);
  }

  setButton(index: 1 | 2 | 3, isDown: boolean): void {
    if (isDown) this.latch[index - 1] = true;
    this.down[index - 1] = isDown;
  }

  setSlider(v: number): void {
    this.slider = clamp(v, 0, 1);
  }

  /** Sample the widgets into one BOW line, send it, and return it. */
  sample(): string {
    const t = Math.max(Math.round(this.clock() - this.t0), this.lastT);
    this.lastT = t;
    const buttons = this.down.map((d, i): 0 | 1 => {
      const bit = d || this.latch[i] ? 1 : 0;
      this.latch[i] = false;
      return bit;
    }) as [0 | 1, 0 | 1, 0 | 1];
    const line = encodeSensorFrame({
      kind: "BOW",
      tMs: t,
      ax: quantize4(this.padX),
      ay: quantize4(this.padY),
      az: quantize4(this.azEnv),
      b1: buttons[0],
      b2: buttons[1],
      b3: buttons[2],
      slider: quantize4(this.slider),
    });
    this.azEnv *= FLICK_DECAY;
    if (Math.abs(this.azEnv) < FLICK_FLOOR) this.azEnv = 0;
    this.framesSent += 1;
    this.send(line);
    return line;
  }
}
