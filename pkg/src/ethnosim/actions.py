"""The seven-form action grammar and its parser.

Forms: ``go to <area>``, ``use <object>``, ``apply <item> to <target>``,
``take <item>``, ``put <item> in|on <place>``, ``give <item> to <agent>``,
``chat with <agent[, agent...]>: <utterance>``.

Referents are resolved case-insensitively against session registries;
connective splits (" to ", " in ", " on ") are resolution-aware so
referent names containing those words still parse.
"""

from __future__ import annotations

import enum
import string
from dataclasses import dataclass, field

_PUNCT_TABLE = str.maketrans("", "", string.punctuation)

CHAT_WORD_LIMIT = 30


class ActionKind(enum.Enum):
    USE = "use"
    APPLY = "apply"
    TAKE = "take"
    PUT = "put"
    GIVE = "give"
    CHAT = "chat"


@dataclass(frozen=True)
class MoveAction:
    target: str | tuple[int, int]


@dataclass(frozen=True)
class StandardAction:
    kind: ActionKind
    object_ref: str | None = None
    target_ref: str | None = None
    utterance: str | None = None
    chat_peers: tuple[str, ...] = ()
    preposition: str | None = None
    text: str = ""


class ActionParseError(ValueError):
    pass


@dataclass
class ReferentRegistry:
    """Case-insensitive name/id lookup tables for parse-time resolution.

    Values are canonical ids (agents, objects) or canonical names
    (regions).
    """

    regions: dict[str, str] = field(default_factory=dict)
    objects: dict[str, str] = field(default_factory=dict)
    agents: dict[str, str] = field(default_factory=dict)

    @staticmethod
    def _norm(name: str) -> str:
        return " ".join(name.lower().split())

    def add_region(self, name: str) -> None:
        self.regions[self._norm(name)] = name

    def add_object(self, object_id: str, name: str) -> None:
        self.objects[self._norm(object_id)] = object_id
        self.objects[self._norm(name)] = object_id

    def add_agent(self, agent_id: str, name: str) -> None:
        self.agents[self._norm(agent_id)] = agent_id
        self.agents[self._norm(name)] = agent_id

    def region(self, name: str) -> str | None:
        return self.regions.get(self._norm(name))

    def object(self, name: str) -> str | None:
        return self.objects.get(self._norm(name))

    def agent(self, name: str) -> str | None:
        return self.agents.get(self._norm(name))


def words_of(text: str) -> list[str]:
    """Whitespace tokens that are not punctuation-only."""
    return [tok for tok in text.split() if tok.translate(_PUNCT_TABLE)]


def count_words(text: str) -> int:
    return len(words_of(text))


def truncate_utterance(text: str, limit: int = CHAT_WORD_LIMIT) -> str:
    """Shorten to at most `limit` counted words, preserving original
    tokens (punctuation-only tokens ride along with what precedes them)."""
    kept: list[str] = []
    counted = 0
    for tok in text.split():
        if tok.translate(_PUNCT_TABLE):
            if counted == limit:
                break
            counted += 1
        kept.append(tok)
    return " ".join(kept)


def _parse_coord(text: str) -> tuple[int, int] | None:
    body = text.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    parts = [p.strip() for p in body.split(",")]
    if len(parts) != 2:
        return None
    try:
        return (int(parts[0]), int(parts[1]))
    except ValueError:
        return None


def _split_resolving(rest, connective, resolve_left, resolve_right):
    """Try every occurrence of the connective; return the first split
    where both sides resolve, else (None, None)."""
    needle = f" {connective} "
    start = 0
    while True:
        idx = rest.find(needle, start)
        if idx < 0:
            return None, None
        left_raw = rest[:idx].strip()
        right_raw = rest[idx + len(needle) :].strip()
        left = resolve_left(left_raw) if left_raw else None
        right = resolve_right(right_raw) if right_raw else None
        if left is not None and right is not None:
            return left, right
        start = idx + 1


def parse_action(text: str, registry: ReferentRegistry) -> MoveAction | StandardAction:
    """Parse one action-grammar line; raises ActionParseError with one of
    the reason prefixes: unknown verb, unresolved referent, malformed
    chat, empty utterance."""
    stripped = text.strip()
    lowered = stripped.lower()

    if lowered in ("idle", "wait", ""):
        raise ActionParseError("unknown verb: empty or idle text is not an action")

    if lowered.startswith("go to "):
        rest = stripped[len("go to ") :].strip()
        region = registry.region(rest)
        if region is not None:
            return MoveAction(target=region)
        coord = _parse_coord(rest)
        if coord is not None:
            return MoveAction(target=coord)
        raise ActionParseError(f"unresolved referent: no area named {rest!r}")

    if lowered.startswith("use "):
        rest = stripped[len("use ") :].strip()
        obj = registry.object(rest)
        if obj is None:
            raise ActionParseError(f"unresolved referent: no object named {rest!r}")
        return StandardAction(ActionKind.USE, object_ref=obj, text=stripped)

    if lowered.startswith("apply "):
        rest = stripped[len("apply ") :].strip()

        def target_of(name: str) -> str | None:
            return registry.agent(name) or registry.object(name)

        item, target = _split_resolving(rest, "to", registry.object, target_of)
        if item is None:
            raise ActionParseError(f"unresolved referent: cannot split {rest!r} into item and target")
        return StandardAction(ActionKind.APPLY, object_ref=item, target_ref=target, text=stripped)

    if lowered.startswith("take "):
        rest = stripped[len("take ") :].strip()
        obj = registry.object(rest)
        if obj is None:
            raise ActionParseError(f"unresolved referent: no item named {rest!r}")
        return StandardAction(ActionKind.TAKE, object_ref=obj, text=stripped)

    if lowered.startswith("put "):
        rest = stripped[len("put ") :].strip()

        def place_of(name: str) -> str | None:
            return registry.object(name) or registry.region(name)

        for prep in ("in", "on"):
            item, place = _split_resolving(rest, prep, registry.object, place_of)
            if item is not None:
                return StandardAction(
                    ActionKind.PUT, object_ref=item, target_ref=place, preposition=prep, text=stripped
                )
        raise ActionParseError(f"unresolved referent: cannot split {rest!r} into item and place")

    if lowered.startswith("give "):
        rest = stripped[len("give ") :].strip()
        item, peer = _split_resolving(rest, "to", registry.object, registry.agent)
        if item is None:
            raise ActionParseError(f"unresolved referent: cannot split {rest!r} into item and agent")
        return StandardAction(ActionKind.GIVE, object_ref=item, target_ref=peer, text=stripped)

    if lowered.startswith("chat with "):
        rest = stripped[len("chat with ") :]
        if ":" not in rest:
            raise ActionParseError("malformed chat: missing colon before the utterance")
        head, _, utterance = rest.partition(":")
        utterance = utterance.strip()
        if not utterance:
            raise ActionParseError("empty utterance")
        peers = []
        for raw in head.split(","):
            name = raw.strip()
            if not name:
                continue
            agent = registry.agent(name)
            if agent is None:
                raise ActionParseError(f"unresolved referent: no agent named {name!r}")
            peers.append(agent)
        if not peers:
            raise ActionParseError("malformed chat: no peer named")
        return StandardAction(
            ActionKind.CHAT,
            target_ref=peers[0],
            utterance=utterance,
            chat_peers=tuple(peers),
            text=stripped,
        )

    verb = lowered.split()[0] if lowered.split() else lowered
    raise ActionParseError(f"unknown verb: {verb!r}")
