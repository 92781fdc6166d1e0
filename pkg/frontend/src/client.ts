/**
 * TCP client for the session server. One socket, one message channel;
 * requests carry a client-chosen `seq` and the matching reply (success or
 * error envelope) settles the pending promise for that seq.
 */

import * as net from "node:net";

import { LineDecoder, encodeLine } from "./framing.js";
import type { Envelope, ErrorPayload, MessageType } from "./protocol.js";
import { isErrorEnvelope } from "./protocol.js";

export class ServerError extends Error {
  readonly requestType: string | null;

  constructor(payload: ErrorPayload) {
    super(payload.message);
    this.name = "ServerError";
    this.requestType = payload.request_type;
  }
}

interface Pending {
  resolve: (env: Envelope) => void;
  reject: (err: Error) => void;
}

export class SessionClient {
  private socket: net.Socket | null = null;
  private readonly decoder = new LineDecoder();
  private readonly pending = new Map<number, Pending>();
  private nextSeq = 0;

  connect(host: string, port: number): Promise<void> {
    return new Promise((resolve, reject) => {
      const socket = net.createConnection({ host, port }, () => {
        socket.off("error", reject);
        resolve();
      });
      socket.setEncoding("utf-8");
      socket.on("error", reject);
      socket.on("data", (chunk: string) => {
        for (const env of this.decoder.push(chunk)) this.dispatch(env);
      });
      socket.on("close", () => {
        const err = new Error("connection closed");
        for (const p of this.pending.values()) p.reject(err);
        this.pending.clear();
      });
      this.socket = socket;
    });
  }

  private dispatch(env: Envelope): void {
    const waiter = typeof env.seq === "number" ? this.pending.get(env.seq) : undefined;
    if (waiter === undefined) return;
    this.pending.delete(env.seq);
    waiter.resolve(env);
  }

  /**
   * Send one request and await its reply envelope. Error envelopes reject
   * with a ServerError carrying the server's message verbatim.
   */
  request(
    type: MessageType,
    session: string | null,
    payload: Record<string, unknown>,
  ): Promise<Envelope> {
    const socket = this.socket;
    if (socket === null) return Promise.reject(new Error("not connected"));
    const seq = this.nextSeq++;
    const envelope: Envelope = { type, session, payload, seq };
    return new Promise<Envelope>((resolve, reject) => {
      this.pending.set(seq, { resolve, reject });
      socket.write(encodeLine(envelope));
    }).then((env) => {
      if (isErrorEnvelope(env)) {
        throw new ServerError(env.payload as unknown as ErrorPayload);
      }
      return env;
    });
  }

  /** Like request(), but hands back the raw envelope even when it is an error. */
  requestRaw(
    type: MessageType,
    session: string | null,
    payload: Record<string, unknown>,
  ): Promise<Envelope> {
    const socket = this.socket;
    if (socket === null) return Promise.reject(new Error("not connected"));
    const seq = this.nextSeq++;
    const envelope: Envelope = { type, session, payload, seq };
    return new Promise<Envelope>((resolve, reject) => {
      this.pending.set(seq, { resolve, reject });
      socket.write(encodeLine(envelope));
    });
  }

  close(): void {
    this.socket?.end();
    this.socket = null;
  }
}
