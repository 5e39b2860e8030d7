/**
 * WebSocket plumbing between the engine endpoint and ConsoleState.
 *
 * The socket is built by an injected factory so tests can drive the
 * client with a scripted fake.  Incoming text may carry several lines;
 * each is fed to ConsoleState separately.  Outbound lines are sent only
 * while the socket is open: on disconnect the stream just stops and the
 * connection status changes, nothing is queued or replayed.
 */

import { ConsoleState } from "./state.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: (() => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onclose: (() => void) | null;
  onerror: (() => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export class EngineClient {
  private readonly state: ConsoleState;
  private readonly factory: SocketFactory;
  private socket: SocketLike | null = null;
  private open = false;

  /** Called after every connection status change. */
  onStatus: (() => void) | null = null;
  /** Called for every received line, after ConsoleState absorbed it. */
  onLine: ((line: string) => void) | null = null;

  constructor(state: ConsoleState, factory: SocketFactory) {
    this.state = state;
    this.factory = factory;
  }

  get isOpen(): boolean {
    return this.open;
  }

  connect(url: string): void {
    this.disconnect();
    this.state.connection = "connecting";
    this.onStatus?.();
    const sock = this.factory(url);
    this.socket = sock;
    sock.onopen = () => {
      this.open = true;
      this.state.connection = "connected";
      this.onStatus?.();
    };
    sock.onmessage = (ev) => {
      if (typeof ev.data !== "string") return;
      for (const line of ev.data.split("\n")) {
        if (line.length === 0) continue;
        this.state.applyLine(line);
        this.onLine?.(line);
      }
    };
    const drop = () => {
      if (this.socket !== sock) return;
      this.open = false;
      this.socket = null;
      this.state.connection = "disconnected";
      this.onStatus?.();
    };
    sock.onclose = drop;
    sock.onerror = drop;
  }

  disconnect(): void {
    const sock = this.socket;
    this.socket = null;
    this.open = false;
    if (sock) {
      sock.onclose = null;
      sock.onerror = null;
      sock.close();
    }
    if (this.state.connection !== "disconnected") {
      this.state.connection = "disconnected";
      this.onStatus?.();
    }
  }

  /** Send one line if connected; returns whether it went out. */
  sendLine(line: string): boolean {
    if (!this.open || !this.socket) return false;
    this.socket.send(line);
    return true;
  }
}
