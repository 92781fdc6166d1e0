"""Decision layer: turns an agent's perception + interior into the next
action via a pluggable backend.

Backends: a deterministic mock (pure function of request and seed), a
canned-transcript backend for record/replay and fault injection, and a
remote chat-completion client with an injectable transport.
"""

from __future__ import annotations

import hashlib
import json
import os
import urllib.request
from dataclasses import dataclass, field

from .actions import ActionParseError, ReferentRegistry, parse_action
from .grid import chebyshev
from .memory import SeededProjectionEmbedder, retrieve_memories

PROMPT_VERSION = "1"

ACTION_GRAMMAR_HELP = (
    "Reply with exactly three lines:\n"
    "ACTION: one of `go to <area>` | `use <object>` | `apply <item> to <target>` | "
    "`take <item>` | `put <item> in <place>` | `put <item> on <place>` | "
    "`give <item> to <agent>` | `chat with <agent[, agent...]>: <utterance>` "
    "(chat utterances are limited to 30 words)\n"
    "GOAL: your updated short-term goal, one sentence\n"
    "COGNITION: your current situational thinking, one or two sentences"
)


@dataclass(frozen=True)
class DecisionRequest:
    """Everything the deciding model may see: the agent's interior plus
    its current perception. Carries no state hidden from the agent."""

    agent_id: str
    name: str
    round_index: int
    self_awareness: str
    situational_cognition: str
    long_term_goal: str
    short_term_goal: str
    emotion: tuple[float, float, float]
    emotion_words: str
    states: tuple[str, ...]
    inventory: tuple[tuple[str, str], ...]  # (item id, item name)
    position: tuple[int, int]
    current_region: str | None
    region_directory: tuple[tuple[str, tuple[int, int]], ...]  # static map knowledge
    perception: object  # engine Perception (duck-typed)
    recalled: tuple[str, ...]
    object_impressions: tuple[tuple[str, str], ...]
    referents: ReferentRegistry = field(repr=False, default_factory=ReferentRegistry)


@dataclass(frozen=True)
class DecisionResponse:
    action_text: str
    new_short_term_goal: str
    new_cognition: str


def assemble_request(session, agent, perception) -> DecisionRequest:
    """Build the decision request: interior snapshot, perception,
    top-k recalled memories for the current cognition, and impressions
    for every interactable referent in view."""
    from .affect import vad_to_words

    embedder = session.embedder
    query = agent.situational_cognition or agent.goals.short_term or agent.self_awareness
    recalled = tuple(
        entry.cognition_text + " -> " + entry.action_text
        for entry in retrieve_memories(
            agent.ltm, embedder.embed(query), session.config.retrieval_k
        )
    )
    visible_ids = [va.id for va in perception.visible_agents] + [
        vo.id for vo in perception.visible_objects
    ]
    impressions = tuple(
        (target_id, agent.om.impressions[target_id])
        for target_id in visible_ids
        if target_id in agent.om.impressions
    )
    registry = ReferentRegistry()
    for region in session.world.regions:
        registry.add_region(region.name)
    for vo in perception.visible_objects:
        registry.add_object(vo.id, vo.name)
    for item_id in agent.inventory:
        obj = session.objects.get(item_id)
        if obj is not None:
            registry.add_object(obj.id, obj.name)
    for va in perception.visible_agents:
        registry.add_agent(va.id, va.name)

    directory = tuple(
        (region.name, session.region_centroid(region.name))
        for region in sorted(session.world.regions, key=lambda r: r.name)
    )
    inventory = tuple(
        (item_id, session.objects[item_id].name if item_id in session.objects else item_id)
        for item_id in agent.inventory
    )
    return DecisionRequest(
        agent_id=agent.id,
        name=agent.name,
        round_index=session.round_index,
        self_awareness=agent.self_awareness,
        situational_cognition=agent.situational_cognition,
        long_term_goal=agent.goals.long_term,
        short_term_goal=agent.goals.short_term,
        emotion=agent.emotion.as_tuple(),
        emotion_words=vad_to_words(agent.emotion),
        states=agent.snapshot_states(),
        inventory=inventory,
        position=agent.position,
        current_region=session.region_at(agent.position),
        region_directory=directory,
        perception=perception,
        recalled=recalled,
        object_impressions=impressions,
        referents=registry,
    )


class Backend:
    """Abstract decision backend."""

    def decide(self, request: DecisionRequest) -> DecisionResponse | None:
        """Next action for the agent; None idles it this round."""
        raise NotImplementedError

    def embed(self, text: str) -> tuple[float, ...]:
        raise NotImplementedError

    def describe_impression(self, agent_id: str, target_id: str, target_name: str) -> str:
        raise NotImplementedError

    def answer_rating(
        self, request: DecisionRequest, prompt: str, lo: int, hi: int
    ) -> int | None:
        """Out-of-band scaled rating (questionnaires, trust probes)."""
        raise NotImplementedError

    def interview(self, request: DecisionRequest, question: str) -> str:
        raise NotImplementedError


def _stable_int(*parts: object) -> int:
    digest = hashlib.sha256("|".join(str(p) for p in parts).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


_MOVE_WORDS = ("curious", "restless", "hopeful", "eager", "calm")
_CHAT_WORDS = ("friendly", "cheerful", "interested", "warm", "glad")
_USE_WORDS = ("comfortable", "content", "relaxed", "satisfied", "peaceful")
_IMPRESSION_WORDS = ("friendly", "curious", "quiet", "generous", "wary", "cheerful")

_CHAT_TEMPLATES = (
    "Hello {name}, I feel {word} today and I wanted to ask how things look over in the {region} right now.",
    "Good to see you {name}. The {region} seems lively and I feel {word} about how this day is unfolding.",
    "{name}, I was just thinking about the {region} and feeling {word}. What have you noticed around here lately?",
)


class MockBackend(Backend):
    """Deterministic offline backend: a pure function of (request,
    seed). Moves toward un-visited regions, chats with the nearest
    visible agent, or uses adjacent furniture."""

    def __init__(self, seed: int = 0):
        self.seed = seed
        self._embedder = SeededProjectionEmbedder()

    def embed(self, text: str) -> tuple[float, ...]:
        return self._embedder.embed(text)

    def _rng_float(self, request: DecisionRequest, salt: str) -> float:
        value = _stable_int(self.seed, request.round_index, request.agent_id, salt)
        return (value % 10**9) / 10**9

    def decide(self, request: DecisionRequest) -> DecisionResponse | None:
        pos = request.position
        nearest_agent = None
        agents = sorted(
            request.perception.visible_agents,
            key=lambda va: (chebyshev(pos, va.coord), va.id),
        )
        if agents:
            nearest_agent = agents[0]
        furniture = sorted(
            (
                vo
                for vo in request.perception.visible_objects
                if vo.kind == "furniture" and chebyshev(pos, vo.coord) <= 1
            ),
            key=lambda vo: (chebyshev(pos, vo.coord), vo.id),
        )
        nearest_furniture = furniture[0] if furniture else None
        other_regions = sorted(
            (
                (chebyshev(pos, centroid), name)
                for name, centroid in request.region_directory
                if name != request.current_region
            ),
        )
        if other_regions:
            target_region = other_regions[0][1]
        elif request.region_directory:
            target_region = request.region_directory[0][0]
        else:
            target_region = None

        options = []
        if target_region is not None:
            options.append(("move", 0.5))
        if nearest_agent is not None:
            options.append(("chat", 0.3))
        if nearest_furniture is not None:
            options.append(("use", 0.2))
        if not options:
            return None
        total = sum(weight for _, weight in options)
        roll = self._rng_float(request, "choice") * total
        acc = 0.0
        choice = options[-1][0]
        for kind, weight in options:
            acc += weight
            if roll < acc:
                choice = kind
                break

        pick = _stable_int(self.seed, request.round_index, request.agent_id, "word")
        region_phrase = request.current_region or target_region or "open ground"
        if choice == "move":
            word = _MOVE_WORDS[pick % len(_MOVE_WORDS)]
            action = f"go to {target_region}"
            goal = f"Reach the {target_region} and see who is there."
            cognition = f"I feel {word} while I head toward the {target_region}."
        elif choice == "chat":
            word = _CHAT_WORDS[pick % len(_CHAT_WORDS)]
            template = _CHAT_TEMPLATES[
                _stable_int(self.seed, request.round_index, request.agent_id, "tpl")
                % len(_CHAT_TEMPLATES)
            ]
            utterance = template.format(
                name=nearest_agent.name, word=word, region=region_phrase
            )
            action = f"chat with {nearest_agent.name}: {utterance}"
            goal = f"Keep talking with {nearest_agent.name} and learn something new."
            cognition = f"I feel {word} while I talk with {nearest_agent.name}."
        else:
            word = _USE_WORDS[pick % len(_USE_WORDS)]
            action = f"use {nearest_furniture.name}"
            goal = f"Take a moment at the {nearest_furniture.name}."
            cognition = f"I feel {word} while I settle at the {nearest_furniture.name}."
        return DecisionResponse(
            action_text=action, new_short_term_goal=goal, new_cognition=cognition
        )

    def describe_impression(self, agent_id: str, target_id: str, target_name: str) -> str:
        adj = _IMPRESSION_WORDS[
            _stable_int(self.seed, agent_id, target_id) % len(_IMPRESSION_WORDS)
        ]
        return f"{target_name} seems {adj} so far."

    def answer_rating(
        self, request: DecisionRequest, prompt: str, lo: int, hi: int
    ) -> int | None:
        mid = (lo + hi) / 2.0
        mood = sum(request.emotion)
        jitter = (_stable_int(self.seed, request.agent_id, prompt) % 3) - 1
        value = round(mid + mood * (hi - lo) / 6.0 + jitter)
        return max(lo, min(hi, value))

    def interview(self, request: DecisionRequest, question: str) -> str:
        region_phrase = request.current_region or "open ground"
        return (
            f"I am currently in the {region_phrase}. "
            f"My goal right now: {request.short_term_goal} "
            f"I feel {request.emotion_words}."
        )


class CannedBackend(Backend):
    """Replays recorded replies keyed by `round:agent_id` (decisions),
    `rating:agent_id:prompt` and `interview:agent_id` (probes). Missing
    decision keys idle the agent."""

    def __init__(self, replies: dict):
        self.replies = dict(replies)
        self._embedder = SeededProjectionEmbedder()

    @classmethod
    def from_file(cls, path) -> "CannedBackend":
        with open(path, encoding="utf-8") as fh:
            return cls(json.load(fh))

    def embed(self, text: str) -> tuple[float, ...]:
        return self._embedder.embed(text)

    def decide(self, request: DecisionRequest) -> DecisionResponse | None:
        entry = self.replies.get(f"{request.round_index}:{request.agent_id}")
        if entry is None:
            return None
        return DecisionResponse(
            action_text=entry["action_text"],
            new_short_term_goal=entry.get("new_short_term_goal", request.short_term_goal),
            new_cognition=entry.get("new_cognition", request.situational_cognition or "Carrying on."),
        )

    def describe_impression(self, agent_id: str, target_id: str, target_name: str) -> str:
        return self.replies.get(
            f"impression:{agent_id}:{target_id}", f"{target_name} is hard to read."
        )

    def answer_rating(
        self, request: DecisionRequest, prompt: str, lo: int, hi: int
    ) -> int | None:
        value = self.replies.get(f"rating:{request.agent_id}:{prompt}")
        if value is None:
            return None
        return int(value)

    def interview(self, request: DecisionRequest, question: str) -> str:
        return self.replies.get(f"interview:{request.agent_id}", "")


def _default_transport(url: str, headers: dict, payload: dict, timeout: float) -> dict:
    body = json.dumps(payload).encode("utf-8")
    req = urllib.request.Request(url, data=body, headers=headers, method="POST")
    with urllib.request.urlopen(req, timeout=timeout) as resp:
        return json.loads(resp.read().decode("utf-8"))


@dataclass
class RemoteConfig:
    base_url: str = ""
    api_key: str = ""
    model: str = "gpt-4o"
    timeout: float = 60.0
    max_inflight: int = 8
    usd_per_1k_prompt: float = 0.0025
    usd_per_1k_completion: float = 0.01

    @classmethod
    def from_env(cls, **overrides) -> "RemoteConfig":
        cfg = cls(
            base_url=os.environ.get("MODEL_BASE_URL", ""),
            api_key=os.environ.get("MODEL_API_KEY", ""),
        )
        for key, value in overrides.items():
            setattr(cfg, key, value)
        return cfg


def render_prompt(request: DecisionRequest) -> str:
    """Fixed, versioned prompt template for remote decisions."""
    lines = [
        f"[prompt v{PROMPT_VERSION}] Round {request.round_index}.",
        "== Identity ==",
        request.self_awareness,
        f"States: {', '.join(request.states) or 'none'}",
        f"Inventory: {', '.join(name for _, name in request.inventory) or 'empty'}",
        "== Goals ==",
        f"Long-term: {request.long_term_goal}",
        f"Short-term: {request.short_term_goal}",
        f"Feeling: {request.emotion_words}",
        "== Perception ==",
        f"You stand at {request.position} in {request.current_region or 'open ground'}.",
        "Visible people: "
        + (
            "; ".join(
                f"{va.name} at {va.coord} ({va.description})"
                for va in request.perception.visible_agents
            )
            or "none"
        ),
        "Visible objects: "
        + (
            "; ".join(
                f"{vo.name} at {vo.coord}"
                + (f" [{', '.join(sorted(vo.states))}]" if vo.states else "")
                for vo in request.perception.visible_objects
            )
            or "none"
        ),
        "Heard: " + ("; ".join(request.perception.heard_chat) or "nothing"),
        "Last round failures: "
        + ("; ".join(request.perception.own_failures) or "none"),
        "== Memories ==",
        *(request.recalled or ("none",)),
        "== Impressions ==",
        *(
            tuple(f"{target}: {text}" for target, text in request.object_impressions)
            or ("none",)
        ),
        "== Task ==",
        ACTION_GRAMMAR_HELP,
    ]
    return "\n".join(lines)


def parse_remote_reply(content: str) -> DecisionResponse:
    action = goal = cognition = None
    for line in content.splitlines():
        stripped = line.strip()
        upper = stripped.upper()
        if upper.startswith("ACTION:"):
            action = stripped[len("ACTION:") :].strip()
        elif upper.startswith("GOAL:"):
            goal = stripped[len("GOAL:") :].strip()
        elif upper.startswith("COGNITION:"):
            cognition = stripped[len("COGNITION:") :].strip()
    if not action:
        raise ActionParseError("reply has no ACTION line")
    return DecisionResponse(
        action_text=action,
        new_short_term_goal=goal or "",
        new_cognition=cognition or "Carrying on.",
    )


class RemoteBackend(Backend):
    """Chat-completion client. Transport is injectable for tests; one
    retry on unparseable output, then the agent idles. Token and cost
    counters accumulate across calls."""

    def __init__(self, config: RemoteConfig | None = None, transport=None):
        self.config = config or RemoteConfig.from_env()
        self.transport = transport or _default_transport
        self._embedder = SeededProjectionEmbedder()
        self.stats = {
            "calls": 0,
            "retries": 0,
            "errors": 0,
            "prompt_tokens": 0,
            "completion_tokens": 0,
            "cost_usd": 0.0,
        }

    def embed(self, text: str) -> tuple[float, ...]:
        return self._embedder.embed(text)

    def _call(self, messages: list[dict]) -> str:
        url = self.config.base_url.rstrip("/") + "/chat/completions"
        headers = {
            "Content-Type": "application/json",
            "Authorization": f"Bearer {self.config.api_key}",
        }
        payload = {"model": self.config.model, "messages": messages}
        response = self.transport(url, headers, payload, self.config.timeout)
        self.stats["calls"] += 1
        usage = response.get("usage", {})
        self.stats["prompt_tokens"] += int(usage.get("prompt_tokens", 0))
        self.stats["completion_tokens"] += int(usage.get("completion_tokens", 0))
        self.stats["cost_usd"] += (
            int(usage.get("prompt_tokens", 0)) / 1000.0 * self.config.usd_per_1k_prompt
            + int(usage.get("completion_tokens", 0))
            / 1000.0
            * self.config.usd_per_1k_completion
        )
        return response["choices"][0]["message"]["content"]

    def decide(self, request: DecisionRequest) -> DecisionResponse | None:
        prompt = render_prompt(request)
        messages = [{"role": "user", "content": prompt}]
        for attempt in range(2):
            try:
                content = self._call(messages)
            except Exception:
                self.stats["errors"] += 1
                return None
            try:
                response = parse_remote_reply(content)
                parse_action(response.action_text, request.referents)
                return response
            except ActionParseError as exc:
                if attempt == 0:
                    self.stats["retries"] += 1
                    messages = [
                        {"role": "user", "content": prompt},
                        {"role": "assistant", "content": content},
                        {
                            "role": "user",
                            "content": (
                                f"Your reply could not be executed: {exc}. "
                                "Answer again using the exact three-line format."
                            ),
                        },
                    ]
        self.stats["errors"] += 1
        return None

    def describe_impression(self, agent_id: str, target_id: str, target_name: str) -> str:
        try:
            return self._call(
                [
                    {
                        "role": "user",
                        "content": (
                            f"In one sentence, give {agent_id}'s first impression "
                            f"of {target_name}."
                        ),
                    }
                ]
            ).strip()
        except Exception:
            self.stats["errors"] += 1
            return f"{target_name} is hard to read."

    def answer_rating(
        self, request: DecisionRequest, prompt: str, lo: int, hi: int
    ) -> int | None:
        ask = (
            render_prompt(request)
            + f"\n== Question ==\n{prompt}\nAnswer with a single integer from {lo} to {hi}."
        )
        try:
            content = self._call([{"role": "user", "content": ask}])
            return int(content.strip().split()[0])
        except Exception:
            self.stats["errors"] += 1
            return None

    def interview(self, request: DecisionRequest, question: str) -> str:
        ask = render_prompt(request) + f"\n== Interview ==\n{question}\nAnswer in character."
        try:
            return self._call([{"role": "user", "content": ask}]).strip()
        except Exception:
            self.stats["errors"] += 1
            return ""


def mock_decide(request: DecisionRequest, seed: int = 0) -> DecisionResponse | None:
    """Functional form of the mock policy."""
    return MockBackend(seed).decide(request)
