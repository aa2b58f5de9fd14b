// Session binding: owns one socket, decodes newline-delimited frames into
// store events, and sends commands. The socket is injected so tests can use
// the `ws` package or a fake instead of the browser WebSocket.

import type { Command } from "./protocol.js";
import { ProtocolError, decodeServerLine, encodeCommand } from "./protocol.js";
import type { StoreEvent } from "./store.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  set onopen(fn: () => void);
  set onmessage(fn: (data: string) => void);
  set onclose(fn: () => void);
}

export type SocketFactory = (url: string) => SocketLike;

export class SessionClient {
  private socket: SocketLike | null = null;
  private connected = false;

  constructor(
    private readonly url: string,
    private readonly factory: SocketFactory,
    private readonly dispatch: (event: StoreEvent) => void,
  ) {}

  connect(): void {
    this.dispatch({ kind: "connecting" });
    const socket = this.factory(this.url);
    this.socket = socket;
    socket.onopen = () => {
      this.connected = true;
      this.dispatch({ kind: "open" });
    };
    socket.onmessage = (data: string) => {
      for (const line of data.split("\n")) {
        if (!line.trim()) continue;
        this.handleLine(line);
      }
    };
    socket.onclose = () => {
      this.connected = false;
      this.dispatch({ kind: "closed" });
    };
  }

  private handleLine(line: string): void {
    try {
      const msg = decodeServerLine(line);
      if (msg.type === "error") {
        this.dispatch({ kind: "server_error", reason: msg.reason });
      } else {
        this.dispatch({ kind: "frame", msg });
      }
    } catch (err) {
      if (err instanceof ProtocolError && err.message.startsWith("protocol version")) {
        // version mismatch is fatal: blocking banner, drop the connection
        this.dispatch({ kind: "fatal", reason: err.message });
        this.socket?.close();
      } else {
        this.dispatch({ kind: "server_error", reason: String(err) });
      }
    }
  }

  get isConnected(): boolean {
    return this.connected;
  }

  send(cmd: Command): boolean {
    if (!this.connected || !this.socket) return false;
    this.socket.send(encodeCommand(cmd));
    this.dispatch({ kind: "sent", cmd });
    return true;
  }

  close(): void {
    this.socket?.close();
  }
}

// Adapter for the browser's native WebSocket.
export function browserSocketFactory(url: string): SocketLike {
  const ws = new WebSocket(url);
  const like = {
    send: (data: string) => ws.send(data),
    close: () => ws.close(),
    set onopen(fn: () => void) {
      ws.onopen = fn;
    },
    set onmessage(fn: (data: string) => void) {
      ws.onmessage = (ev) => fn(String(ev.data));
    },
    set onclose(fn: () => void) {
      ws.onclose = fn;
    },
  };
  return like;
}
