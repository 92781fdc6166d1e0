/**
 * Newline-delimited JSON framing: every message, both directions, is one
 * JSON object terminated by "\n". The decoder is incremental so TCP chunk
 * boundaries never matter.
 */

import type { Envelope } from "./protocol.js";

export function encodeLine(message: Envelope | Record<string, unknown>): string {
  return JSON.stringify(message) + "\n";
}

export class LineDecoder {
  private buffer = "";

  /** Feed one chunk; returns every complete message it finished. */
  push(chunk: string | Buffer): Envelope[] {
    this.buffer += typeof chunk === "string" ? chunk : chunk.toString("utf-8");
    const out: Envelope[] = [];
    let idx: number;
    while ((idx = this.buffer.indexOf("\n")) >= 0) {
      const line = this.buffer.slice(0, idx);
      this.buffer = this.buffer.slice(idx + 1);
      if (line.trim().length === 0) continue;
      out.push(JSON.parse(line) as Envelope);
    }
    return out;
  }

  /** Bytes still waiting for their newline. */
  get pending(): string {
    return this.buffer;
  }
}
