"""Valence-arousal-dominance scoring over a term lexicon.

Short-term cognition text is scored by averaging the lexicon rows of
every matched term; the scalar mood used by analytics is the plain sum
of the three components.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

_PUNCT_TABLE = str.maketrans("", "", string.punctuation)


@dataclass(frozen=True)
class VadVector:
    valence: float = 0.0
    arousal: float = 0.0
    dominance: float = 0.0

    def __post_init__(self):
        for name, v in (
            ("valence", self.valence),
            ("arousal", self.arousal),
            ("dominance", self.dominance),
        ):
            if not -1.0 <= v <= 1.0:
                raise ValueError(f"{name} {v} outside [-1, 1]")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.valence, self.arousal, self.dominance)


class VadLexicon:
    """term -> (v, a, d) table with multiword entries.

    Multiword terms are matched greedily longest-first while scanning;
    unmatched tokens fall back to unigram lookup and tokens absent from
    the lexicon are skipped entirely.
    """

    def __init__(self, rows: dict[str, tuple[float, float, float]]):
        self.rows = rows
        self.max_words = max((term.count(" ") + 1 for term in rows), default=1)

    def __contains__(self, term: str) -> bool:
        return term in self.rows

    def __len__(self) -> int:
        return len(self.rows)

    def lookup(self, term: str) -> tuple[float, float, float] | None:
        return self.rows.get(term)

    @classmethod
    def from_file(cls, path: Path | str) -> "VadLexicon":
        """Load a tab-separated ``term<TAB>v<TAB>a<TAB>d`` file.
        Lines starting with '#' are comments."""
        rows: dict[str, tuple[float, float, float]] = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.rstrip("\n")
                if not line or line.startswith("#"):
                    continue
                parts = line.split("\t")
                if len(parts) != 4:
                    raise ValueError(f"{path}:{lineno}: expected 4 tab-separated fields")
                term = parts[0].strip().lower()
                v, a, d = (float(p) for p in parts[1:])
                for name, val in (("valence", v), ("arousal", a), ("dominance", d)):
                    if not -1.0 <= val <= 1.0:
                        raise ValueError(f"{path}:{lineno}: {name} {val} outside [-1, 1]")
                rows[term] = (v, a, d)
        return cls(rows)


def default_lexicon() -> VadLexicon:
    """The lexicon shipped with the package. A full NRC-VAD-style file
    can be substituted via the same loader."""
    ref = resources.files("ethnosim").joinpath("data/vad_lexicon.tsv")
    with resources.as_file(ref) as path:
        return VadLexicon.from_file(path)


def tokenize(text: str) -> list[str]:
    """Lowercase, strip punctuation, split on whitespace; drops tokens
    that were punctuation-only."""
    tokens = []
    for raw in text.lower().split():
        tok = raw.translate(_PUNCT_TABLE)
        if tok:
            tokens.append(tok)
    return tokens


def score_vad(text: str, lexicon: VadLexicon) -> VadVector:
    """Mean lexicon row over all matched terms; (0, 0, 0) when nothing
    matches (including empty text)."""
    tokens = tokenize(text)
    sums = [0.0, 0.0, 0.0]
    hits = 0
    i = 0
    n = len(tokens)
    while i < n:
        matched = None
        span = 1
        for k in range(min(lexicon.max_words, n - i), 0, -1):
            term = " ".join(tokens[i : i + k])
            row = lexicon.lookup(term)
            if row is not None:
                matched = row
                span = k
                break
        if matched is not None:
            sums[0] += matched[0]
            sums[1] += matched[1]
            sums[2] += matched[2]
            hits += 1
            i += span
        else:
            i += 1
    if hits == 0:
        return VadVector()
    return VadVector(sums[0] / hits, sums[1] / hits, sums[2] / hits)


def overall_emotion(v: VadVector) -> float:
    """Scalar mood: the sum of the three components."""
    return v.valence + v.arousal + v.dominance


_AXIS_WORDS = (
    ("unpleasant", "pleasant"),
    ("calm", "agitated"),
    ("submissive", "in-control"),
)

_THRESHOLD = 1.0 / 3.0


def vad_to_words(v: VadVector) -> str:
    """Natural-language rendering of a VAD vector.

    Each axis maps through thirds: <= -1/3 takes the low word, >= 1/3
    the high word, the middle band is omitted. All-neutral renders as
    "emotionally neutral".
    """
    parts = []
    for value, (low, high) in zip(v.as_tuple(), _AXIS_WORDS):
        if value <= -_THRESHOLD:
            parts.append(low)
        elif value >= _THRESHOLD:
            parts.append(high)
    if not parts:
        return "emotionally neutral"
    return ", ".join(parts)
