"""Agent memory tiers: working memory, long-term memory with embedding
retrieval, and per-target object memory.

Long-term entries pair each round's cognition with the action taken and
are retrieved by cosine similarity against an embedding of the current
cognition. The default embedder is a seeded random projection of hashed
token counts, so retrieval is fully deterministic and offline.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from .affect import tokenize


@dataclass
class WorkingMemory:
    """Fixed-length FIFO of (round, text) entries; oldest evicted first."""

    capacity: int = 10
    entries: list[tuple[int, str]] = field(default_factory=list)

    def __post_init__(self):
        if self.capacity < 1:
            raise ValueError("working memory capacity must be positive")


def push_working_memory(wm: WorkingMemory, round_index: int, text: str) -> WorkingMemory:
    """Append an entry, evicting the oldest beyond capacity."""
    wm.entries.append((round_index, text))
    if len(wm.entries) > wm.capacity:
        del wm.entries[: len(wm.entries) - wm.capacity]
    return wm


@dataclass(frozen=True)
class LongTermMemoryEntry:
    round: int
    cognition_text: str
    action_text: str
    embedding: tuple[float, ...]


@dataclass
class ObjectMemory:
    """One impression text per target id; the latest impression wins."""

    impressions: dict[str, str] = field(default_factory=dict)

    def remember(self, target_id: str, impression: str) -> None:
        self.impressions[target_id] = impression

    def impression_of(self, target_id: str) -> str | None:
        return self.impressions.get(target_id)


def cosine_similarity(a: tuple[float, ...], b: tuple[float, ...]) -> float:
    if len(a) != len(b):
        raise ValueError(f"embedding dimension mismatch: {len(a)} vs {len(b)}")
    dot = sum(x * y for x, y in zip(a, b))
    na = math.sqrt(sum(x * x for x in a))
    nb = math.sqrt(sum(y * y for y in b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return dot / (na * nb)


def retrieve_memories(
    ltm: list[LongTermMemoryEntry],
    query_embedding: tuple[float, ...],
    k: int = 5,
) -> list[LongTermMemoryEntry]:
    """Top-k entries by cosine similarity, most similar first; exact
    similarity ties go to the newer entry."""
    if k <= 0 or not ltm:
        return []
    matrix = np.array([entry.embedding for entry in ltm], dtype=float)
    query = np.array(query_embedding, dtype=float)
    if matrix.shape[1] != query.shape[0]:
        raise ValueError(
            f"embedding dimension mismatch: {matrix.shape[1]} vs {query.shape[0]}"
        )
    norms = np.linalg.norm(matrix, axis=1)
    qnorm = float(np.linalg.norm(query))
    sims = np.zeros(len(ltm))
    if qnorm > 0.0:
        nonzero = norms > 0.0
        sims[nonzero] = (matrix[nonzero] @ query) / (norms[nonzero] * qnorm)
    order = sorted(range(len(ltm)), key=lambda i: (-sims[i], -i))
    return [ltm[i] for i in order[:k]]


class SeededProjectionEmbedder:
    """Deterministic sentence embedder: hash tokens into a fixed-size
    count vector, project with a seeded Gaussian matrix, L2-normalize.

    Pure function of (seed, text) — stable across processes, no network.
    """

    def __init__(self, vocab_dim: int = 512, embed_dim: int = 32, seed: int = 9173):
        self.vocab_dim = vocab_dim
        self.embed_dim = embed_dim
        self.seed = seed
        rng = np.random.default_rng(seed)
        self._projection = rng.standard_normal((vocab_dim, embed_dim))
        self._cache: dict[str, tuple[float, ...]] = {}

    def _token_index(self, token: str) -> int:
        digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest()
        return int.from_bytes(digest, "big") % self.vocab_dim

    def embed(self, text: str) -> tuple[float, ...]:
        cached = self._cache.get(text)
        if cached is not None:
            return cached
        counts = np.zeros(self.vocab_dim)
        for token in tokenize(text):
            counts[self._token_index(token)] += 1.0
        vec = counts @ self._projection
        norm = float(np.linalg.norm(vec))
        if norm > 0.0:
            vec = vec / norm
        result = tuple(float(v) for v in vec)
        if len(self._cache) < 4096:
            self._cache[text] = result
        return result
