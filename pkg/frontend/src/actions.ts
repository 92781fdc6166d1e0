/**
 * Action composer model: a draft of one of the seven grammar forms, the
 * text it will submit, and the checks that gate submission. The composer
 * refuses to submit a chat whose utterance exceeds the 30-word limit;
 * only a forced raw request can bypass it, and the server rejects that
 * with the same count.
 */

import { CHAT_WORD_LIMIT, countWords } from "./words.js";

export type DraftVerb = "go" | "use" | "apply" | "take" | "put" | "give" | "chat";

export const DRAFT_VERBS: readonly DraftVerb[] = [
  "go",
  "use",
  "apply",
  "take",
  "put",
  "give",
  "chat",
];

export interface ActionDraft {
  verb: DraftVerb;
  /** go: region name picked from the map (wins over coord). */
  area?: string;
  /** go: explicit cell when no region is picked. */
  coord?: [number, number];
  /** use / take: object name; apply / put / give: the item name. */
  object?: string;
  /** apply: agent or object the item is applied to. */
  target?: string;
  /** put: object or region the item goes to. */
  place?: string;
  /** put: connective, defaults to "in". */
  preposition?: "in" | "on";
  /** chat: addressed agents. */
  peers?: string[];
  /** chat: what to say. */
  utterance?: string;
}

export interface WordCounter {
  count: number;
  limit: number;
  over: boolean;
}

/** Live counter state for the utterance field; `over` renders red. */
export function wordCounter(draft: ActionDraft): WordCounter {
  const count = countWords(draft.utterance ?? "");
  return { count, limit: CHAT_WORD_LIMIT, over: count > CHAT_WORD_LIMIT };
}

/**
 * Everything that blocks submission, in display order. Empty means the
 * draft is submittable.
 */
export function draftProblems(draft: ActionDraft): string[] {
  const problems: string[] = [];
  switch (draft.verb) {
    case "go":
      if (!draft.area && !draft.coord) problems.push("pick a destination area or cell");
      break;
    case "use":
      if (!draft.object) problems.push("pick an object to use");
      break;
    case "take":
      if (!draft.object) problems.push("pick an item to take");
      break;
    case "apply":
      if (!draft.object) problems.push("pick an item to apply");
      if (!draft.target) problems.push("pick a target for the item");
      break;
    case "put":
      if (!draft.object) problems.push("pick an item to put");
      if (!draft.place) problems.push("pick a place for the item");
      break;
    case "give":
      if (!draft.object) problems.push("pick an item to give");
      if (!draft.target) problems.push("pick an agent to give it to");
      break;
    case "chat": {
      if (!draft.peers || draft.peers.length === 0) problems.push("pick at least one peer");
      const counter = wordCounter(draft);
      if (counter.count === 0) problems.push("say something");
      if (counter.over) {
        problems.push(
          `utterance is ${counter.count} words; the limit is ${counter.limit}`,
        );
      }
      break;
    }
  }
  return problems;
}

export function canSubmit(draft: ActionDraft): boolean {
  return draftProblems(draft).length === 0;
}

/** The exact grammar line this draft submits. */
export function composeText(draft: ActionDraft): string {
  switch (draft.verb) {
    case "go": {
      if (draft.area) return `go to ${draft.area}`;
      const [x, y] = draft.coord ?? [0, 0];
      return `go to (${x}, ${y})`;
    }
    case "use":
      return `use ${draft.object ?? ""}`.trim();
    case "take":
      return `take ${draft.object ?? ""}`.trim();
    case "apply":
      return `apply ${draft.object ?? ""} to ${draft.target ?? ""}`.trim();
    case "put":
      return `put ${draft.object ?? ""} ${draft.preposition ?? "in"} ${draft.place ?? ""}`.trim();
    case "give":
      return `give ${draft.object ?? ""} to ${draft.target ?? ""}`.trim();
    case "chat":
      return `chat with ${(draft.peers ?? []).join(", ")}: ${draft.utterance ?? ""}`.trim();
  }
}

/** True when the draft occupies the round's movement slot. */
export function isMoveDraft(draft: ActionDraft): boolean {
  return draft.verb === "go";
}
