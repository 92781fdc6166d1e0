/**
 * Researcher console orchestration: one session, one controlled agent,
 * one message channel. The composer queues actions, stepping resolves
 * them, and the outcome shown for every submission is derived from the
 * agent's next perception — failed actions surface there as
 * "<label>: <reason>" lines, everything else executed.
 */

import {
  ActionDraft,
  canSubmit,
  composeText,
  draftProblems,
  isMoveDraft,
} from "./actions.js";
import { SessionClient, ServerError } from "./client.js";
import type {
  ActionOutcome,
  CreateSessionReply,
  Envelope,
  InterviewReply,
  PerceptionPayload,
  QuestionnaireReply,
  RunControlReply,
  StateSnapshot,
  SubmitReply,
} from "./protocol.js";
import { TranscriptStore } from "./transcript.js";
import { TrajectoryTrail, ViewState, initialViewState } from "./viewmodel.js";

export type RunState = "paused" | "running";

export interface ShownOutcome {
  /** Round the action resolved in. */
  round: number;
  /** Receipt sequence from the submit reply (free actions are negative). */
  seq: number;
  slot: "move" | "standard";
  /** Exact text that was submitted. */
  text: string;
  status: "executed" | "failed";
  reason: string | null;
  /** Free actions render in a distinct frame. */
  mode: "queued" | "free";
}

export interface SubmitResult {
  submitted: boolean;
  /** Client-side refusals or the server's rejection message, verbatim. */
  problems: string[];
  seq?: number;
}

export interface InterviewResult {
  ok: boolean;
  answer?: string;
  digestBefore?: string;
  digestAfter?: string;
  rejection?: string;
  /** Offered alongside a not-paused rejection. */
  pauseShortcut?: string;
}

interface PendingAction {
  seq: number;
  slot: "move" | "standard";
  text: string;
  /** Failure lines for this action start with exactly this prefix. */
  failurePrefix: string;
}

function normalizeName(name: string): string {
  return name.toLowerCase().split(/\s+/u).filter(Boolean).join(" ");
}

export class ResearcherConsole {
  readonly client: SessionClient;
  readonly view: ViewState;
  readonly trail = new TrajectoryTrail();
  readonly transcripts = new TranscriptStore();
  readonly outcomeLog: ShownOutcome[] = [];

  runState: RunState = "paused";
  snapshot: StateSnapshot | null = null;
  lastPerception: PerceptionPayload | null = null;

  private pendings: PendingAction[] = [];

  constructor(client: SessionClient) {
    this.client = client;
    this.view = initialViewState();
  }

  // -- session lifecycle -------------------------------------------------

  async connect(host: string, port: number): Promise<void> {
    await this.client.connect(host, port);
  }

  async createSession(
    scenario: string | Record<string, unknown>,
    options: { backend?: string; seed?: number } = {},
  ): Promise<string> {
    const env = await this.client.request("create_session", null, {
      scenario,
      backend: options.backend ?? "mock",
      seed: options.seed ?? 0,
    });
    const payload = env.payload as unknown as CreateSessionReply;
    this.view.sessionId = payload.session;
    await this.refreshSnapshot();
    return payload.session;
  }

  async openSession(sessionId: string): Promise<void> {
    this.view.sessionId = sessionId;
    await this.refreshSnapshot();
  }

  /** Take the controlled-agent handle; the reply confirms the server side. */
  async attach(agentId: string): Promise<void> {
    const env = await this.client.request("attach", this.sessionId(), {
      agent: agentId,
    });
    const payload = env.payload as { agent: string; attached: boolean };
    if (payload.agent !== agentId || !payload.attached) {
      throw new Error(`attach handle mismatch: asked ${agentId}, got ${payload.agent}`);
    }
    this.view.controlledAgent = agentId;
  }

  async detach(): Promise<void> {
    await this.client.request("detach", this.sessionId(), {});
    this.view.controlledAgent = null;
  }

  private sessionId(): string {
    const id = this.view.sessionId;
    if (id === null) throw new Error("no session open");
    return id;
  }

  private controlled(): string {
    const id = this.view.controlledAgent;
    if (id === null) throw new Error("no agent attached");
    return id;
  }

  async refreshSnapshot(): Promise<StateSnapshot> {
    const env = await this.client.request("state_snapshot", this.sessionId(), {});
    this.snapshot = env.payload as unknown as StateSnapshot;
    this.trail.record(this.snapshot);
    return this.snapshot;
  }

  // -- action composer ---------------------------------------------------

  /**
   * The engine labels a failed move with the canonical region name (or
   * the "(x, y)" cell); reproduce that label from the draft and the
   * snapshot so failure lines can be matched exactly.
   */
  private moveLabel(text: string, draft?: ActionDraft): string {
    if (draft?.area) return this.canonicalRegion(draft.area);
    if (draft?.coord) return `(${draft.coord[0]}, ${draft.coord[1]})`;
    const rest = text.slice("go to ".length).trim();
    const coordMatch = /^\(?\s*(-?\d+)\s*,\s*(-?\d+)\s*\)?$/.exec(rest);
    if (coordMatch) return `(${coordMatch[1]}, ${coordMatch[2]})`;
    return this.canonicalRegion(rest);
  }

  private canonicalRegion(name: string): string {
    const wanted = normalizeName(name);
    for (const region of this.snapshot?.regions ?? []) {
      if (normalizeName(region.name) === wanted) return region.name;
    }
    return name;
  }

  /**
   * Queue one drafted action for the next round. Refuses locally when the
   * draft is incomplete or its utterance is over the word limit; server
   * rejections come back verbatim in `problems`.
   */
  async composeAndSubmit(draft: ActionDraft): Promise<SubmitResult> {
    if (!canSubmit(draft)) {
      return { submitted: false, problems: draftProblems(draft) };
    }
    return this.submitText(composeText(draft), draft);
  }

  /** Raw-text path for the composer's free-typing mode. */
  async submitText(text: string, draft?: ActionDraft): Promise<SubmitResult> {
    const stripped = text.trim();
    let env: Envelope;
    try {
      env = await this.client.request("submit", this.sessionId(), {
        agent: this.controlled(),
        text: stripped,
      });
    } catch (err) {
      if (err instanceof ServerError) {
        return { submitted: false, problems: [err.message] };
      }
      throw err;
    }
    const payload = env.payload as unknown as SubmitReply;
    const slot = draft ? (isMoveDraft(draft) ? "move" : "standard") : this.slotOf(stripped);
    const label =
      slot === "move" ? `go to ${this.moveLabel(stripped, draft)}` : stripped;
    this.pendings.push({
      seq: payload.receipt_seq,
      slot,
      text: stripped,
      failurePrefix: `${label}: `,
    });
    return { submitted: true, problems: [], seq: payload.receipt_seq };
  }

  private slotOf(text: string): "move" | "standard" {
    return text.toLowerCase().startsWith("go to ") ? "move" : "standard";
  }

  /**
   * Execute one action immediately, outside the round slots. The reply
   * carries the engine's outcome row; it is shown in the free-action
   * frame as-is.
   */
  async submitFree(text: string): Promise<ShownOutcome> {
    const env = await this.client.request("free_action", this.sessionId(), {
      agent: this.controlled(),
      text: text.trim(),
    });
    const payload = env.payload as { agent: string; outcome: ActionOutcome };
    const outcome: ShownOutcome = {
      round: this.snapshot?.round ?? -1,
      seq: payload.outcome.seq,
      slot: payload.outcome.slot,
      text: text.trim(),
      status: payload.outcome.status,
      reason: payload.outcome.reason,
      mode: "free",
    };
    this.outcomeLog.push(outcome);
    return outcome;
  }

  // -- stepping ----------------------------------------------------------

  /**
   * Resolve one round, then read the controlled agent's perception to
   * settle every queued submission: a failure line starting with the
   * action's label means failed (reason follows the label), anything
   * else executed.
   */
  async step(): Promise<ShownOutcome[]> {
    const env = await this.client.request("run_control", this.sessionId(), {
      command: "step",
    });
    const reply = env.payload as unknown as RunControlReply;
    const resolvedRound = reply.round - 1;

    let perception: PerceptionPayload | null = null;
    if (this.view.controlledAgent !== null) {
      const penv = await this.client.request("perception", this.sessionId(), {
        agent: this.view.controlledAgent,
      });
      perception = penv.payload as unknown as PerceptionPayload;
      this.lastPerception = perception;
    }

    const outcomes: ShownOutcome[] = [];
    for (const pending of this.pendings) {
      const line = (perception?.own_failures ?? []).find((l) =>
        l.startsWith(pending.failurePrefix),
      );
      outcomes.push({
        round: resolvedRound,
        seq: pending.seq,
        slot: pending.slot,
        text: pending.text,
        status: line === undefined ? "executed" : "failed",
        reason: line === undefined ? null : line.slice(pending.failurePrefix.length),
        mode: "queued",
      });
    }
    this.pendings = [];
    this.outcomeLog.push(...outcomes);

    await this.refreshSnapshot();
    return outcomes;
  }

  /** Advance to a target round. Queued submissions must be stepped first. */
  async runUntil(round: number): Promise<RunControlReply> {
    if (this.pendings.length > 0) {
      throw new Error("queued submission awaiting a step; step before running");
    }
    this.runState = "running";
    try {
      const env = await this.client.request("run_control", this.sessionId(), {
        command: "run",
        until: round,
      });
      await this.refreshSnapshot();
      return env.payload as unknown as RunControlReply;
    } finally {
      this.runState = "paused";
    }
  }

  pause(): void {
    this.runState = "paused";
  }

  // -- measurement panes ---------------------------------------------------

  /**
   * Out-of-band question to any agent. Only available while paused; the
   * rejection carries the pause shortcut. The digest pair in the result
   * shows the probe left the run record untouched.
   */
  async interview(agentId: string, question: string): Promise<InterviewResult> {
    if (this.runState !== "paused") {
      return {
        ok: false,
        rejection: "session is running: pause before interviewing",
        pauseShortcut: "pause",
      };
    }
    const digestBefore = (await this.refreshSnapshot()).digest;
    const env = await this.client.request("interview", this.sessionId(), {
      agent: agentId,
      question,
    });
    const payload = env.payload as unknown as InterviewReply;
    this.transcripts.append(agentId, {
      round: this.snapshot?.round ?? -1,
      question,
      answer: payload.answer,
    });
    return {
      ok: true,
      answer: payload.answer,
      digestBefore,
      digestAfter: payload.digest,
    };
  }

  async questionnaire(
    agentId: string,
    item: { item: string; prompt: string; low: number; high: number },
    target?: string,
  ): Promise<number> {
    const env = await this.client.request("questionnaire", this.sessionId(), {
      agent: agentId,
      ...item,
      ...(target === undefined ? {} : { target }),
    });
    return (env.payload as unknown as QuestionnaireReply).answer;
  }

  /** Drop an event document into the session's event set. */
  async injectEvent(event: Record<string, unknown>): Promise<string> {
    const env = await this.client.request("event_inject", this.sessionId(), {
      event,
    });
    return (env.payload as { event: string; injected: boolean }).event;
  }

  async perception(agentId?: string): Promise<PerceptionPayload> {
    const env = await this.client.request("perception", this.sessionId(), {
      agent: agentId ?? this.controlled(),
    });
    const payload = env.payload as unknown as PerceptionPayload;
    this.lastPerception = payload;
    return payload;
  }
}
