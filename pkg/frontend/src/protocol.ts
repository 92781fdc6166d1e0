/**
 * Wire protocol spoken by the session server: one JSON object per line,
 * both directions. Replies echo the request's `type` and `seq`; failures
 * come back as `type: "error"` with the same `seq`.
 */

export const PROTOCOL_TYPES = [
  "create_session",
  "attach",
  "detach",
  "perception",
  "submit",
  "free_action",
  "interview",
  "questionnaire",
  "run_control",
  "event_inject",
  "state_snapshot",
  "error",
] as const;

export type MessageType = (typeof PROTOCOL_TYPES)[number];

export interface Envelope {
  type: MessageType;
  session: string | null;
  payload: Record<string, unknown>;
  seq: number;
}

export interface ErrorPayload {
  message: string;
  request_type: string | null;
}

// -- state_snapshot ---------------------------------------------------------

export interface SnapshotAgent {
  id: string;
  name: string;
  group: string;
  x: number;
  y: number;
  region: string | null;
  emotion: [number, number, number];
  states: string[];
  inventory: string[];
  human: boolean;
}

export interface SnapshotObject {
  id: string;
  name: string;
  kind: "furniture" | "item";
  /** `[x, y]` while placed on the map, else the id of the holder. */
  location: [number, number] | string;
  states: string[];
}

export interface SnapshotRegion {
  name: string;
  cells: [number, number][];
}

export interface StateSnapshot {
  session: string;
  round: number;
  width: number;
  height: number;
  digest: string;
  agents: SnapshotAgent[];
  objects: SnapshotObject[];
  regions: SnapshotRegion[];
  walls: [number, number][];
}

// -- perception --------------------------------------------------------------

export interface VisibleAgent {
  id: string;
  name: string;
  x: number;
  y: number;
  description: string;
}

export interface VisibleObject {
  id: string;
  name: string;
  kind: string;
  states: string[];
  x: number;
  y: number;
}

export interface PerceptionPayload {
  agent: string;
  round: number;
  position: [number, number];
  region: string | null;
  visible_cells: [number, number][];
  visible_agents: VisibleAgent[];
  visible_objects: VisibleObject[];
  heard_chat: string[];
  own_failures: string[];
  own_state_changes: string[];
}

// -- small reply payloads -----------------------------------------------------

export interface CreateSessionReply {
  session: string;
  round: number;
  digest: string;
}

export interface SubmitReply {
  agent: string;
  receipt_seq: number;
  queued: boolean;
}

export interface RunControlReply {
  round: number;
  digest: string;
}

export interface InterviewReply {
  agent: string;
  answer: string;
  digest: string;
}

export interface QuestionnaireReply {
  agent: string;
  answer: number;
}

/** One row of a round record's `outcomes` list, as the engine logs it. */
export interface ActionOutcome {
  seq: number;
  agent: string;
  slot: "move" | "standard";
  status: "executed" | "failed";
  reason: string | null;
}

export function isErrorEnvelope(
  env: Envelope,
): env is Envelope & { payload: ErrorPayload & Record<string, unknown> } {
  return env.type === "error";
}
