/**
 * Per-agent interview transcripts: question/answer pairs in the order
 * they were asked, exportable as plain text.
 */

export interface TranscriptEntry {
  round: number;
  question: string;
  answer: string;
}

export class TranscriptStore {
  private readonly byAgent = new Map<string, TranscriptEntry[]>();

  append(agentId: string, entry: TranscriptEntry): void {
    const entries = this.byAgent.get(agentId) ?? [];
    entries.push(entry);
    this.byAgent.set(agentId, entries);
  }

  entries(agentId: string): TranscriptEntry[] {
    return [...(this.byAgent.get(agentId) ?? [])];
  }

  agents(): string[] {
    return [...this.byAgent.keys()].sort();
  }

  /** Plain-text export of one agent's transcript pane. */
  exportText(agentId: string): string {
    const lines: string[] = [];
    for (const entry of this.entries(agentId)) {
      lines.push(`[round ${entry.round}] Q: ${entry.question}`);
      lines.push(`[round ${entry.round}] A: ${entry.answer}`);
      lines.push("");
    }
    return lines.join("\n");
  }
}
