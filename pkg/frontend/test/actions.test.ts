import { describe, expect, it } from "vitest";

import {
  ActionDraft,
  DRAFT_VERBS,
  canSubmit,
  composeText,
  draftProblems,
  isMoveDraft,
  wordCounter,
} from "../src/actions.js";

describe("composeText covers the seven grammar forms", () => {
  const drafts: Array<[ActionDraft, string]> = [
    [{ verb: "go", area: "Bar Area" }, "go to Bar Area"],
    [{ verb: "go", coord: [2, 13] }, "go to (2, 13)"],
    [{ verb: "use", object: "espresso machine" }, "use espresso machine"],
    [
      { verb: "apply", object: "mop", target: "bar sink" },
      "apply mop to bar sink",
    ],
    [{ verb: "take", object: "mop" }, "take mop"],
    [
      { verb: "put", object: "mop", place: "Entrance", preposition: "in" },
      "put mop in Entrance",
    ],
    [
      { verb: "put", object: "coffee cup", place: "side table", preposition: "on" },
      "put coffee cup on side table",
    ],
    [
      { verb: "give", object: "mop", target: "Eleanor Finch" },
      "give mop to Eleanor Finch",
    ],
    [
      { verb: "chat", peers: ["Eleanor Finch"], utterance: "good morning" },
      "chat with Eleanor Finch: good morning",
    ],
    [
      {
        verb: "chat",
        peers: ["Eleanor Finch", "Marcus Bell"],
        utterance: "hello both",
      },
      "chat with Eleanor Finch, Marcus Bell: hello both",
    ],
  ];

  for (const [draft, text] of drafts) {
    it(`composes ${text}`, () => {
      expect(composeText(draft)).toBe(text);
      expect(draftProblems(draft)).toEqual([]);
      expect(canSubmit(draft)).toBe(true);
    });
  }

  it("knows every verb", () => {
    expect([...DRAFT_VERBS].sort()).toEqual(
      ["apply", "chat", "give", "go", "put", "take", "use"].sort(),
    );
  });

  it("only go occupies the movement slot", () => {
    expect(isMoveDraft({ verb: "go", area: "Bar Area" })).toBe(true);
    expect(isMoveDraft({ verb: "take", object: "mop" })).toBe(false);
  });
});

describe("incomplete drafts are refused", () => {
  it("needs a destination", () => {
    expect(draftProblems({ verb: "go" })).toContain(
      "pick a destination area or cell",
    );
  });

  it("needs both halves of apply", () => {
    const problems = draftProblems({ verb: "apply" });
    expect(problems).toHaveLength(2);
  });

  it("needs a peer and an utterance for chat", () => {
    const problems = draftProblems({ verb: "chat", utterance: "" });
    expect(problems).toContain("pick at least one peer");
    expect(problems).toContain("say something");
  });
});

describe("the word counter gates chat submission", () => {
  const thirty = Array.from({ length: 30 }, (_, i) => `w${i}`).join(" ");
  const thirtyOne = `${thirty} extra`;

  it("thirty words pass", () => {
    const draft: ActionDraft = {
      verb: "chat",
      peers: ["Eleanor Finch"],
      utterance: thirty,
    };
    expect(wordCounter(draft)).toEqual({ count: 30, limit: 30, over: false });
    expect(canSubmit(draft)).toBe(true);
  });

  it("thirty-one words are blocked and the counter goes red", () => {
    const draft: ActionDraft = {
      verb: "chat",
      peers: ["Eleanor Finch"],
      utterance: thirtyOne,
    };
    const counter = wordCounter(draft);
    expect(counter.over).toBe(true);
    expect(counter.count).toBe(31);
    expect(canSubmit(draft)).toBe(false);
    expect(draftProblems(draft)).toContain(
      "utterance is 31 words; the limit is 30",
    );
  });

  it("punctuation-only tokens do not count toward the limit", () => {
    const draft: ActionDraft = {
      verb: "chat",
      peers: ["Eleanor Finch"],
      utterance: `${thirty} ... !!`,
    };
    expect(wordCounter(draft).count).toBe(30);
    expect(canSubmit(draft)).toBe(true);
  });
});
