"""Agent records: demographics, goals, emotion, and the per-round
interior update that ties cognition, emotion scoring, and long-term
memory together.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .affect import VadLexicon, VadVector, score_vad
from .memory import (
    LongTermMemoryEntry,
    ObjectMemory,
    SeededProjectionEmbedder,
    WorkingMemory,
)


@dataclass(frozen=True)
class Demographics:
    gender: str = ""
    age_band: str = ""
    education: str = ""
    occupation: str = ""
    extra: tuple[tuple[str, str], ...] = ()

    def as_dict(self) -> dict[str, str]:
        out = {
            "gender": self.gender,
            "age_band": self.age_band,
            "education": self.education,
            "occupation": self.occupation,
        }
        out.update(dict(self.extra))
        return out


@dataclass
class Goals:
    long_term: str
    short_term: str = ""


@dataclass
class AgentRecord:
    id: str
    name: str
    group: str
    profile: Demographics
    self_awareness: str
    goals: Goals
    situational_cognition: str = ""
    emotion: VadVector = field(default_factory=VadVector)
    wm: WorkingMemory = field(default_factory=WorkingMemory)
    ltm: list[LongTermMemoryEntry] = field(default_factory=list)
    om: ObjectMemory = field(default_factory=ObjectMemory)
    inventory: list[str] = field(default_factory=list)
    position: tuple[int, int] = (0, 0)
    states: set[str] = field(default_factory=set)
    trust_ledger: dict[str, int] = field(default_factory=dict)
    spawn_region: str | None = None
    human_controlled: bool = False

    def snapshot_states(self) -> tuple[str, ...]:
        return tuple(sorted(self.states))


def render_cognition(new_cognition: str, states: set[str]) -> str:
    """Active state labels are appended to the cognition text as a
    trailing clause so downstream scoring and prompting see them."""
    if not states:
        return new_cognition
    clause = "; ".join(sorted(states))
    text = new_cognition.rstrip()
    if text and not text.endswith((".", "!", "?")):
        text += "."
    return f"{text} Currently: {clause}." if text else f"Currently: {clause}."


def update_interior(
    agent: AgentRecord,
    new_cognition: str,
    lexicon: VadLexicon,
    *,
    round_index: int,
    action_text: str,
    embedder: SeededProjectionEmbedder,
) -> AgentRecord:
    """Per-round interior update.

    Replaces the situational cognition (with active state labels
    appended), rescores the VAD emotion from the stored cognition text,
    and appends a long-term memory entry pairing the cognition with the
    round's chosen action. Long-term goal and self-awareness are never
    touched.
    """
    if not new_cognition:
        raise ValueError("new cognition must be non-empty")
    stored = render_cognition(new_cognition, agent.states)
    agent.situational_cognition = stored
    agent.emotion = score_vad(stored, lexicon)
    agent.ltm.append(
        LongTermMemoryEntry(
            round=round_index,
            cognition_text=stored,
            action_text=action_text,
            embedding=embedder.embed(stored),
        )
    )
    return agent
