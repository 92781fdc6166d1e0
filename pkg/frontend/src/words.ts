/**
 * Word counting, mirrored exactly from the engine so the composer's live
 * counter never drifts from the server's count: tokens are whitespace
 * runs, and a token counts as a word unless it is punctuation-only.
 */

export const CHAT_WORD_LIMIT = 30;

/** The ASCII punctuation set the engine strips when testing tokens. */
const PUNCTUATION = "!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~";

const PUNCT_CODES = new Set(Array.from(PUNCTUATION, (c) => c.codePointAt(0)!));

function hasNonPunctuation(token: string): boolean {
  for (const ch of token) {
    if (!PUNCT_CODES.has(ch.codePointAt(0)!)) return true;
  }
  return false;
}

// The engine splits on Python str.split() whitespace: the Unicode
// White_Space set plus the ASCII separator controls 0x1c-0x1f, and
// notably NOT U+FEFF. JS \s differs on both counts, so spell it out.
const WHITESPACE = new RegExp(
  "[\\t\\n\\x0b\\f\\r\\x1c-\\x1f \\x85\\xa0\\u1680\\u2000-\\u200a" +
    "\\u2028\\u2029\\u202f\\u205f\\u3000]+",
  "u",
);

function tokensOf(text: string): string[] {
  return text.split(WHITESPACE).filter((tok) => tok.length > 0);
}

/** Whitespace tokens that are not punctuation-only. */
export function wordsOf(text: string): string[] {
  return tokensOf(text).filter(hasNonPunctuation);
}

export function countWords(text: string): number {
  return wordsOf(text).length;
}

/**
 * Shorten to at most `limit` counted words, preserving original tokens;
 * punctuation-only tokens ride along with what precedes them.
 */
export function truncateUtterance(text: string, limit = CHAT_WORD_LIMIT): string {
  const kept: string[] = [];
  let counted = 0;
  for (const tok of tokensOf(text)) {
    if (hasNonPunctuation(tok)) {
      if (counted === limit) break;
      counted += 1;
    }
    kept.push(tok);
  }
  return kept.join(" ");
}
