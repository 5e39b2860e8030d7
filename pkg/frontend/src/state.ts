/**
 * Console-side model of what the engine last said.
 *
 * Everything here is engine-authoritative: the console never advances
 * particles, walkers, or circles on its own, so a dropped connection
 * freezes the canvas at the last received snapshot instead of
 * extrapolating.  Incoming snapshots land in a latest-wins slot that the
 * render loop drains at its own pace.
 */

import {
  Message,
  ParseError,
  SnapshotMessage,
  StateEvent,
  parseLine,
} from "./protocol.js";

export type ConnectionStatus = "disconnected" | "connecting" | "connected";

export interface StatusStrip {
  connection: ConnectionStatus;
  mode: string;
  density: number | null;
  tempo: number | null;
  palette: number | null;
  beat: number | null;
  malformed: number;
}

export class ConsoleState {
  connection: ConnectionStatus = "disconnected";
  state: StateEvent | null = null;
  snapshot: SnapshotMessage | null = null;
  beat: number | null = null;

  linesReceived = 0;
  malformedLines = 0;
  hitsSeen = 0;
  notesSeen = 0;

  private dirty = false;

  /** Feed one received line; returns the parsed message or null if dropped. */
  applyLine(line: string): Message | null {
    this.linesReceived += 1;
    let msg: Message;
    try {
      msg = parseLine(line);
    } catch (err) {
      if (err instanceof ParseError) {
        this.malformedLines += 1;
        return null;
      }
      throw err;
    }
    switch (msg.kind) {
      case "STATE":
        this.state = msg;
        break;
      case "SNAP":
        this.snapshot = msg;
        this.dirty = true;
        break;
      case "PULSE":
        this.beat = msg.beatIndex;
        break;
      case "HIT":
        this.hitsSeen += 1;
        break;
      case "NOTE":
        this.notesSeen += 1;
        break;
      case "BOW":
        // the engine logs our own input frames back; nothing to update
        break;
    }
    return msg;
  }

  /** Latest snapshot if one arrived since the last call, else null. */
  takeSnapshot(): SnapshotMessage | null {
    if (!this.dirty) return null;
    this.dirty = false;
    return this.snapshot;
  }

  strip(): StatusStrip {
    return {
      connection: this.connection,
      mode: this.state ? this.state.mode : "--",
      density: this.state ? this.state.densityLevel : null,
      tempo: this.state ? this.state.tempoBpm : null,
      palette: this.state ? this.state.paletteIndex : null,
      beat: this.beat,
      malformed: this.malformedLines,
    };
  }
}
