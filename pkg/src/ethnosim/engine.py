"""Round engine: collects one movement + one standard action per agent,
resolves them in receipt order (earliest submission wins conflicts),
executes effects, evaluates event triggers, and appends one chained
record per round to the run log.

Free-action submissions execute immediately between rounds, stamped
(round, k) with k >= 1 so they sort ahead of the round's queued
submissions at commit time.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace

import numpy as np

from .actions import (
    ActionKind,
    ActionParseError,
    MoveAction,
    ReferentRegistry,
    StandardAction,
    count_words,
    parse_action,
    truncate_utterance,
)
from .affect import VadLexicon, default_lexicon
from .agents import AgentRecord, update_interior
from .decision import Backend, assemble_request
from .events import ActionFact, EventSpec, resolve_chain
from .grid import chebyshev, compute_path, line_of_sight, visible_cells
from .memory import SeededProjectionEmbedder, push_working_memory
from .runlog import GENESIS_ROUND, RunLog, canonical_json
from .world import Coord, TextureCategory, WorldMap, apply_state_effect, region_of

NOMINAL_SECONDS_PER_ROUND = 15


@dataclass
class EngineConfig:
    perception_radius: int = 10
    wm_capacity: int = 10
    retrieval_k: int = 5
    movement_budget: int = 20
    chat_word_limit: int = 30
    seed: int = 0


@dataclass(frozen=True)
class VisibleAgent:
    id: str
    name: str
    coord: Coord
    description: str


@dataclass(frozen=True)
class VisibleObject:
    id: str
    name: str
    kind: str
    states: tuple[str, ...]
    coord: Coord


@dataclass(frozen=True)
class Perception:
    round_index: int
    visible_cells: frozenset[Coord]
    visible_agents: tuple[VisibleAgent, ...]
    visible_objects: tuple[VisibleObject, ...]
    heard_chat: tuple[str, ...]
    own_failures: tuple[str, ...]
    own_state_changes: tuple[str, ...]


@dataclass
class ActionSubmission:
    agent_id: str
    round_index: int
    movement: MoveAction | None = None
    standard: StandardAction | None = None
    receipt_seq: int = 0
    source: str = "backend"  # backend | human
    decision: dict | None = None
    free_stamp: tuple[int, int] | None = None
    move_path: list[Coord] | None = None
    move_target_cell: Coord | None = None
    move_target_label: str = ""
    truncated_chat: bool = False


@dataclass
class RoundReport:
    round_index: int
    outcomes: list[dict]
    state_deltas: list[dict]
    chats_delivered: list[tuple[str, tuple[str, ...], str]]
    events: list[dict] = field(default_factory=list)


class SubmissionError(ValueError):
    pass


class Simulation:
    """Mutable session state plus the round loop. One writer; decision
    backends only ever see immutable request snapshots."""

    def __init__(
        self,
        world: WorldMap,
        agents: list[AgentRecord],
        config: EngineConfig | None = None,
        event_specs: list[EventSpec] | None = None,
        lexicon: VadLexicon | None = None,
        embedder: SeededProjectionEmbedder | None = None,
        runlog: RunLog | None = None,
    ):
        self.world = world
        self.config = config or EngineConfig()
        self.lexicon = lexicon or default_lexicon()
        self.embedder = embedder or SeededProjectionEmbedder()
        self.runlog = runlog or RunLog()
        self.event_specs: list[EventSpec] = list(event_specs or [])
        self.fired_event_ids: set[str] = set()
        self.rng = np.random.default_rng(self.config.seed)

        self.agents: dict[str, AgentRecord] = {}
        self.objects = {o.id: o for o in world.objects}
        self.occupancy: dict[Coord, str] = {}
        self.round_index = 0

        self.registry = ReferentRegistry()
        for region in world.regions:
            self.registry.add_region(region.name)
        for obj in self.objects.values():
            self.registry.add_object(obj.id, obj.name)

        self._subs: list[ActionSubmission] = []
        self._next_seq = 0
        self._free_k = 0
        self._free_subs: list[ActionSubmission] = []
        self._free_outcomes: list[dict] = []
        self._free_deltas: list[dict] = []
        self._used_furniture: set[str] = set()

        self._failures_current: dict[str, list[str]] = {}
        self._failures_next: dict[str, list[str]] = {}
        self._notices_current: dict[str, list[str]] = {}
        self._notices_next: dict[str, list[str]] = {}
        self._inbox_current: dict[str, list[str]] = {}
        self._inbox_next: dict[str, list[str]] = {}

        self._spawn_deltas: list[dict] = []
        self.trajectory: list[dict] = []
        self.idle_log: list[dict] = []
        self.interviews: list[dict] = []

        for agent in agents:
            self.add_agent(agent)

    # ----- setup -------------------------------------------------------

    def add_agent(self, agent: AgentRecord, at: Coord | None = None) -> None:
        if agent.id in self.agents:
            raise ValueError(f"duplicate agent id {agent.id!r}")
        agent.wm.capacity = self.config.wm_capacity
        self.agents[agent.id] = agent
        self.registry.add_agent(agent.id, agent.name)
        coord = at if at is not None else self._spawn_coord(agent)
        self._place(agent, coord)
        profile = agent.profile
        self._spawn_deltas.append(
            {
                "kind": "spawn",
                "id": agent.id,
                "name": agent.name,
                "group": agent.group,
                "at": list(coord),
                "profile": {
                    "gender": profile.gender,
                    "age_band": profile.age_band,
                    "education": profile.education,
                    "occupation": profile.occupation,
                    "extra": [list(pair) for pair in profile.extra],
                },
                "self_awareness": agent.self_awareness,
                "long_term": agent.goals.long_term,
                "short_term": agent.goals.short_term,
                "spawn_region": agent.spawn_region,
                "human": agent.human_controlled,
            }
        )

    def _spawn_coord(self, agent: AgentRecord) -> Coord:
        candidates: list[Coord] = []
        if agent.spawn_region:
            region = self.world.region(agent.spawn_region)
            if region is None:
                raise ValueError(
                    f"agent {agent.id!r}: unknown spawn region {agent.spawn_region!r}"
                )
            candidates = sorted(region.cells, key=lambda c: (c[1], c[0]))
        else:
            candidates = [
                (x, y)
                for y in range(self.world.height)
                for x in range(self.world.width)
            ]
        blocked = self._static_blocked()
        for coord in candidates:
            if (
                not self.world.is_wall(coord)
                and coord not in blocked
                and coord not in self.occupancy
            ):
                return coord
        raise ValueError(f"no free spawn cell for agent {agent.id!r}")

    def _place(self, agent: AgentRecord, coord: Coord) -> None:
        if not self.world.in_bounds(coord):
            raise ValueError(f"spawn {coord} out of bounds")
        if self.world.is_wall(coord):
            raise ValueError(f"spawn {coord} is a wall")
        if coord in self.occupancy:
            raise ValueError(f"spawn {coord} already occupied")
        agent.position = coord
        self.occupancy[coord] = agent.id

    def commit_genesis(self, meta: dict | None = None) -> None:
        """Genesis record (round -1): spawned roster, so positions are
        reconstructible from the log alone."""
        body = {
            "round": GENESIS_ROUND,
            "submissions": [],
            "outcomes": [],
            "deltas": list(self._spawn_deltas),
            "meta": meta or {},
            "rng_state_digest": self._rng_digest(),
        }
        self._spawn_deltas = []
        self.runlog.append(body)
        self._snapshot_trajectory(GENESIS_ROUND)

    # ----- helpers ------------------------------------------------------

    def _rng_digest(self) -> str:
        state = canonical_json(self.rng.bit_generator.state)
        return hashlib.sha256(state.encode("utf-8")).hexdigest()

    def _static_blocked(self) -> set[Coord]:
        return {
            obj.location
            for obj in self.objects.values()
            if obj.kind is TextureCategory.FURNITURE and obj.placed
        }

    def region_at(self, coord: Coord) -> str | None:
        return region_of(self.world, coord)

    def region_centroid(self, name: str) -> Coord:
        region = self.world.region(name)
        if region is None:
            raise KeyError(f"unknown region {name!r}")
        xs = [c[0] for c in region.cells]
        ys = [c[1] for c in region.cells]
        return (sum(xs) // len(xs), sum(ys) // len(ys))

    def state_digest(self) -> str:
        return self.runlog.final_digest

    def _note(self, bucket: dict[str, list[str]], agent_id: str, text: str) -> None:
        bucket.setdefault(agent_id, []).append(text)

    # ----- perception ----------------------------------------------------

    def build_perception(self, agent_id: str) -> Perception:
        agent = self.agents[agent_id]
        cells = visible_cells(self.world, agent.position, self.config.perception_radius)
        vis_agents = tuple(
            VisibleAgent(
                other.id,
                other.name,
                other.position,
                other.group
                + ("; " + ", ".join(sorted(other.states)) if other.states else ""),
            )
            for other in sorted(self.agents.values(), key=lambda a: a.id)
            if other.id != agent_id and other.position in cells
        )
        vis_objects = tuple(
            VisibleObject(
                obj.id, obj.name, obj.kind.value, tuple(sorted(obj.states)), obj.location
            )
            for obj in sorted(self.objects.values(), key=lambda o: o.id)
            if obj.placed and obj.location in cells
        )
        return Perception(
            round_index=self.round_index,
            visible_cells=cells,
            visible_agents=vis_agents,
            visible_objects=vis_objects,
            heard_chat=tuple(self._inbox_current.get(agent_id, ())),
            own_failures=tuple(self._failures_current.get(agent_id, ())),
            own_state_changes=tuple(self._notices_current.get(agent_id, ())),
        )

    # ----- submission -----------------------------------------------------

    def _validate_standard(self, agent: AgentRecord, action: StandardAction, source: str):
        if action.kind is ActionKind.CHAT:
            words = count_words(action.utterance or "")
            limit = self.config.chat_word_limit
            if words > limit:
                if source == "human":
                    raise SubmissionError(
                        f"chat rejected: {words} words exceeds the {limit}-word limit"
                    )
                return replace(
                    action, utterance=truncate_utterance(action.utterance, limit)
                ), True
            for peer in action.chat_peers:
                if peer not in self.agents:
                    raise SubmissionError(f"unknown agent {peer!r}")
            return action, False
        if action.object_ref is not None and action.object_ref not in self.objects:
            raise SubmissionError(f"unknown object {action.object_ref!r}")
        if action.kind is ActionKind.GIVE and action.target_ref not in self.agents:
            raise SubmissionError(f"unknown agent {action.target_ref!r}")
        if action.kind is ActionKind.APPLY:
            t = action.target_ref
            if t not in self.agents and t not in self.objects:
                raise SubmissionError(f"unknown apply target {t!r}")
        if action.kind is ActionKind.PUT:
            t = action.target_ref
            if t not in self.objects and self.world.region(t or "") is None:
                raise SubmissionError(f"unknown place {t!r}")
        return action, False

    def _plan_move(self, agent: AgentRecord, movement: MoveAction):
        """Path computed at submission time against current occupancy;
        walked (and possibly re-blocked) at execution time."""
        blocked = self._static_blocked() | {
            coord for coord in self.occupancy if coord != agent.position
        }
        if isinstance(movement.target, str):
            region = self.world.region(movement.target)
            if region is None:
                raise SubmissionError(f"unknown area {movement.target!r}")
            if agent.position in region.cells:
                return [], agent.position, movement.target
            candidates = sorted(
                (c for c in region.cells if not self.world.is_wall(c) and c not in blocked),
                key=lambda c: (
                    abs(c[0] - agent.position[0]) + abs(c[1] - agent.position[1]),
                    c[1],
                    c[0],
                ),
            )
            for cell in candidates[:8]:
                path = compute_path(self.world, agent.position, cell, blocked)
                if path is not None:
                    return path, cell, movement.target
            return None, None, movement.target
        goal = movement.target
        if not self.world.in_bounds(goal):
            raise SubmissionError(f"target {goal} out of bounds")
        if self.world.is_wall(goal):
            raise SubmissionError(f"target {goal} is a wall")
        path = compute_path(self.world, agent.position, goal, blocked)
        label = f"({goal[0]}, {goal[1]})"
        if path is None:
            return None, None, label
        return path, goal, label

    def submit(
        self,
        agent_id: str,
        movement: MoveAction | None = None,
        standard: StandardAction | None = None,
        source: str = "backend",
        decision: dict | None = None,
    ) -> int:
        """Queue one round submission; returns its receipt sequence."""
        if agent_id not in self.agents:
            raise SubmissionError(f"unknown agent {agent_id!r}")
        if movement is None and standard is None:
            raise SubmissionError("submission carries no action")
        agent = self.agents[agent_id]
        if movement is not None and any(
            s.agent_id == agent_id and s.movement is not None for s in self._subs
        ):
            raise SubmissionError("duplicate movement slot for this round")
        if standard is not None and any(
            s.agent_id == agent_id and s.standard is not None for s in self._subs
        ):
            raise SubmissionError("duplicate standard-action slot for this round")

        truncated = False
        if standard is not None:
            standard, truncated = self._validate_standard(agent, standard, source)

        sub = ActionSubmission(
            agent_id=agent_id,
            round_index=self.round_index,
            movement=movement,
            standard=standard,
            receipt_seq=self._next_seq,
            source=source,
            decision=decision,
            truncated_chat=truncated,
        )
        if movement is not None:
            path, cell, label = self._plan_move(agent, movement)
            sub.move_path = path
            sub.move_target_cell = cell
            sub.move_target_label = label
        self._next_seq += 1
        self._subs.append(sub)
        return sub.receipt_seq

    def submit_free(
        self,
        agent_id: str,
        movement: MoveAction | None = None,
        standard: StandardAction | None = None,
        source: str = "human",
    ) -> dict:
        """Free-action path: executes immediately, bypassing round slots
        and barriers; per-action limits still apply. Buffered into the
        next round record with stamp (round, k)."""
        if agent_id not in self.agents:
            raise SubmissionError(f"unknown agent {agent_id!r}")
        if (movement is None) == (standard is None):
            raise SubmissionError("free action carries exactly one action")
        agent = self.agents[agent_id]
        truncated = False
        if standard is not None:
            standard, truncated = self._validate_standard(agent, standard, source)
        self._free_k += 1
        sub = ActionSubmission(
            agent_id=agent_id,
            round_index=self.round_index,
            movement=movement,
            standard=standard,
            receipt_seq=-self._free_k,  # sorts ahead of queued actions
            source=source,
            free_stamp=(self.round_index, self._free_k),
            truncated_chat=truncated,
        )
        deltas: list[dict] = []
        chats: list[tuple[str, tuple[str, ...], str]] = []
        facts: list[ActionFact] = []
        if movement is not None:
            path, cell, label = self._plan_move(agent, movement)
            sub.move_path = path
            sub.move_target_cell = cell
            sub.move_target_label = label
            outcome = self._exec_move(sub, deltas)
        else:
            outcome = self._exec_standard(sub, deltas, chats, facts)
        self._free_subs.append(sub)
        self._free_outcomes.append(outcome)
        self._free_deltas.extend(deltas)
        return outcome

    # ----- execution ------------------------------------------------------

    def _outcome(self, sub: ActionSubmission, slot: str, status: str, reason: str | None):
        return {
            "seq": sub.receipt_seq,
            "agent": sub.agent_id,
            "slot": slot,
            "status": status,
            "reason": reason,
        }

    def _exec_move(self, sub: ActionSubmission, deltas: list[dict]) -> dict:
        agent = self.agents[sub.agent_id]
        label = sub.move_target_label or str(sub.movement.target)
        if sub.move_path is None:
            reason = f"unreachable: no open path to {label}"
            self._note(self._failures_next, agent.id, f"go to {label}: {reason}")
            return self._outcome(sub, "move", "failed", reason)
        start = agent.position
        steps = 0
        blocked_reason: str | None = None
        for cell in sub.move_path:
            if steps >= self.config.movement_budget:
                break
            if cell in self.occupancy:
                blocked_reason = (
                    f"path blocked at ({cell[0]}, {cell[1]}) by "
                    f"{self.agents[self.occupancy[cell]].name}"
                )
                break
            del self.occupancy[agent.position]
            self.occupancy[cell] = agent.id
            agent.position = cell
            steps += 1
        if agent.position != start:
            deltas.append(
                {
                    "kind": "position",
                    "id": agent.id,
                    "from": list(start),
                    "to": list(agent.position),
                }
            )
            push_working_memory(
                agent.wm, self.round_index, f"I moved toward {label}."
            )
        if blocked_reason is not None:
            self._note(self._failures_next, agent.id, f"go to {label}: {blocked_reason}")
            return self._outcome(sub, "move", "failed", blocked_reason)
        if steps < len(sub.move_path):
            remaining = len(sub.move_path) - steps
            self._note(
                self._notices_next,
                agent.id,
                f"movement budget reached; {label} is still {remaining} cells away",
            )
        return self._outcome(sub, "move", "executed", None)

    def _apply_effects(
        self,
        actor: AgentRecord,
        obj_id: str,
        target_id: str | None,
        deltas: list[dict],
    ) -> None:
        """Run an object's StateEffect list: actor-effects hit the
        acting agent, object-effects hit the action's target (the used
        object itself, or the apply target which may be an agent)."""
        obj = self.objects[obj_id]
        for effect in obj.function:
            if effect.target.value == "actor":
                before = frozenset(actor.states)
                after = apply_state_effect(before, effect)
                if after != before:
                    actor.states.clear()
                    actor.states.update(after)
                    deltas.append(
                        {
                            "kind": "agent_state",
                            "id": actor.id,
                            "verb": effect.verb.value,
                            "label": effect.label,
                        }
                    )
                    self._note(
                        self._notices_next,
                        actor.id,
                        f"state {effect.label!r} {effect.verb.value}ed",
                    )
            else:
                victim_id = target_id if target_id is not None else obj_id
                if victim_id in self.agents:
                    victim = self.agents[victim_id]
                    before = frozenset(victim.states)
                    after = apply_state_effect(before, effect)
                    if after != before:
                        victim.states.clear()
                        victim.states.update(after)
                        deltas.append(
                            {
                                "kind": "agent_state",
                                "id": victim.id,
                                "verb": effect.verb.value,
                                "label": effect.label,
                            }
                        )
                        self._note(
                            self._notices_next,
                            victim.id,
                            f"state {effect.label!r} {effect.verb.value}ed",
                        )
                else:
                    victim = self.objects[victim_id]
                    after = apply_state_effect(victim.states, effect)
                    if after != victim.states:
                        self.objects[victim_id] = replace(victim, states=after)
                        deltas.append(
                            {
                                "kind": "object_state",
                                "id": victim_id,
                                "verb": effect.verb.value,
                                "label": effect.label,
                            }
                        )

    def _adjacent(self, a: Coord, b: Coord) -> bool:
        return chebyshev(a, b) <= 1

    def _exec_standard(
        self,
        sub: ActionSubmission,
        deltas: list[dict],
        chats: list[tuple[str, tuple[str, ...], str]],
        facts: list[ActionFact],
    ) -> dict:
        agent = self.agents[sub.agent_id]
        action = sub.standard
        label = action.text or action.kind.value

        def fail(reason: str) -> dict:
            self._note(self._failures_next, agent.id, f"{label}: {reason}")
            return self._outcome(sub, "standard", "failed", reason)

        if action.kind is ActionKind.USE:
            obj = self.objects.get(action.object_ref)
            if obj is None:
                return fail("unknown object")
            if obj.kind is TextureCategory.FURNITURE:
                if not self._adjacent(agent.position, obj.location):
                    return fail(f"{obj.name} is not adjacent")
                if obj.id in self._used_furniture:
                    return fail(f"{obj.name} is already in use this round")
                self._used_furniture.add(obj.id)
            else:
                carried = obj.id in agent.inventory
                placed_near = obj.placed and self._adjacent(agent.position, obj.location)
                if not carried and not placed_near:
                    return fail(f"{obj.name} is neither held nor adjacent")
            self._apply_effects(agent, obj.id, None, deltas)
            push_working_memory(agent.wm, self.round_index, f"I used {obj.name}.")
            facts.append(
                ActionFact(sub.receipt_seq, agent.id, "use", object_id=obj.id)
            )
            return self._outcome(sub, "standard", "executed", None)

        if action.kind is ActionKind.APPLY:
            item = self.objects.get(action.object_ref)
            if item is None:
                return fail("unknown item")
            if item.id not in agent.inventory:
                return fail(f"{item.name} not in inventory")
            target_id = action.target_ref
            if target_id in self.agents:
                target_agent = self.agents[target_id]
                if not self._adjacent(agent.position, target_agent.position):
                    return fail(f"{target_agent.name} is not adjacent")
                self._apply_effects(agent, item.id, target_id, deltas)
                push_working_memory(
                    target_agent.wm,
                    self.round_index,
                    f"{agent.name} applied {item.name} to me.",
                )
            elif target_id in self.objects:
                target_obj = self.objects[target_id]
                if not target_obj.placed or not self._adjacent(
                    agent.position, target_obj.location
                ):
                    return fail(f"{target_obj.name} is not adjacent")
                self._apply_effects(agent, item.id, target_id, deltas)
            else:
                return fail("unknown apply target")
            push_working_memory(
                agent.wm,
                self.round_index,
                f"I applied {item.name} to "
                f"{self.agents[target_id].name if target_id in self.agents else self.objects[target_id].name}.",
            )
            facts.append(
                ActionFact(
                    sub.receipt_seq,
                    agent.id,
                    "apply",
                    object_id=item.id,
                    target_ids=(target_id,),
                )
            )
            return self._outcome(sub, "standard", "executed", None)

        if action.kind is ActionKind.TAKE:
            obj = self.objects.get(action.object_ref)
            if obj is None:
                return fail("unknown item")
            if obj.kind is TextureCategory.FURNITURE:
                return fail(f"{obj.name} is furniture and cannot be taken")
            if not obj.placed:
                return fail("item already taken")
            if not self._adjacent(agent.position, obj.location):
                return fail(f"{obj.name} is not adjacent")
            self.objects[obj.id] = replace(obj, location=agent.id)
            agent.inventory.append(obj.id)
            deltas.append({"kind": "item_location", "id": obj.id, "to": agent.id})
            push_working_memory(agent.wm, self.round_index, f"I took {obj.name}.")
            facts.append(
                ActionFact(sub.receipt_seq, agent.id, "take", object_id=obj.id)
            )
            return self._outcome(sub, "standard", "executed", None)

        if action.kind is ActionKind.PUT:
            item = self.objects.get(action.object_ref)
            if item is None:
                return fail("unknown item")
            if item.id not in agent.inventory:
                return fail(f"{item.name} not in inventory")
            place_ref = action.target_ref
            if place_ref in self.objects:
                place_obj = self.objects[place_ref]
                if not place_obj.placed or not self._adjacent(
                    agent.position, place_obj.location
                ):
                    return fail(f"{place_obj.name} is not adjacent")
                drop_at = place_obj.location
                place_name = place_obj.name
            else:
                region = self.world.region(place_ref or "")
                if region is None:
                    return fail("unknown place")
                if agent.position not in region.cells:
                    return fail(f"not inside {place_ref}")
                drop_at = agent.position
                place_name = place_ref
            agent.inventory.remove(item.id)
            self.objects[item.id] = replace(item, location=drop_at)
            deltas.append(
                {"kind": "item_location", "id": item.id, "to": list(drop_at)}
            )
            push_working_memory(
                agent.wm,
                self.round_index,
                f"I put {item.name} {action.preposition or 'on'} {place_name}.",
            )
            facts.append(
                ActionFact(
                    sub.receipt_seq,
                    agent.id,
                    "put",
                    object_id=item.id,
                    target_ids=(place_ref,),
                )
            )
            return self._outcome(sub, "standard", "executed", None)

        if action.kind is ActionKind.GIVE:
            item = self.objects.get(action.object_ref)
            if item is None:
                return fail("unknown item")
            if item.id not in agent.inventory:
                return fail(f"{item.name} not in inventory")
            peer = self.agents.get(action.target_ref)
            if peer is None:
                return fail("unknown agent")
            if not self._adjacent(agent.position, peer.position):
                return fail(f"{peer.name} is no longer adjacent")
            agent.inventory.remove(item.id)
            peer.inventory.append(item.id)
            self.objects[item.id] = replace(item, location=peer.id)
            deltas.append({"kind": "item_location", "id": item.id, "to": peer.id})
            push_working_memory(
                peer.wm, self.round_index, f"{agent.name} gave me {item.name}."
            )
            push_working_memory(
                agent.wm, self.round_index, f"I gave {item.name} to {peer.name}."
            )
            facts.append(
                ActionFact(
                    sub.receipt_seq,
                    agent.id,
                    "give",
                    object_id=item.id,
                    target_ids=(peer.id,),
                )
            )
            return self._outcome(sub, "standard", "executed", None)

        if action.kind is ActionKind.CHAT:
            utterance = action.utterance or ""
            peers = tuple(p for p in action.chat_peers if p in self.agents)
            if not peers:
                return fail("no such agent to chat with")
            walls = self.world.wall_coords
            for peer_id in peers:
                peer = self.agents[peer_id]
                self._note(
                    self._inbox_next, peer_id, f"{agent.name}: {utterance}"
                )
                push_working_memory(
                    peer.wm, self.round_index, f'{agent.name} said to me: "{utterance}"'
                )
            for other in self.agents.values():
                if other.id == agent.id or other.id in peers:
                    continue
                if chebyshev(other.position, agent.position) <= self.config.perception_radius and line_of_sight(
                    walls, agent.position, other.position
                ):
                    self._note(
                        self._inbox_next,
                        other.id,
                        f"{agent.name} (overheard): {utterance}",
                    )
            push_working_memory(
                agent.wm,
                self.round_index,
                f'I said to {", ".join(self.agents[p].name for p in peers)}: "{utterance}"',
            )
            chats.append((agent.id, peers, utterance))
            facts.append(
                ActionFact(sub.receipt_seq, agent.id, "chat", target_ids=peers)
            )
            return self._outcome(sub, "standard", "executed", None)

        return fail("unknown action kind")

    # ----- the round loop --------------------------------------------------

    def _serialize_sub(self, sub: ActionSubmission) -> dict:
        out: dict = {
            "agent": sub.agent_id,
            "seq": sub.receipt_seq,
            "source": sub.source,
        }
        if sub.free_stamp is not None:
            out["free"] = list(sub.free_stamp)
        if sub.movement is not None:
            target = sub.movement.target
            out["move"] = {
                "target": target if isinstance(target, str) else list(target)
            }
        if sub.standard is not None:
            action = sub.standard
            out["standard"] = {
                "kind": action.kind.value,
                "object": action.object_ref,
                "target": action.target_ref,
                "utterance": action.utterance,
                "peers": list(action.chat_peers),
                "preposition": action.preposition,
                "text": action.text,
            }
        if sub.truncated_chat:
            out["truncated"] = True
        if sub.decision is not None:
            out["decision"] = sub.decision
        return out

    def resolve_round(self) -> RoundReport:
        """Phases: movements (receipt order), standard actions (receipt
        order), event triggers + chains, then the chained log commit."""
        outcomes: list[dict] = []
        deltas: list[dict] = []
        chats: list[tuple[str, tuple[str, ...], str]] = []
        facts: list[ActionFact] = []

        queue = sorted(self._subs, key=lambda s: s.receipt_seq)
        for sub in queue:
            if sub.movement is not None:
                outcomes.append(self._exec_move(sub, deltas))
        for sub in queue:
            if sub.standard is not None:
                outcomes.append(self._exec_standard(sub, deltas, chats, facts))

        event_outcome = resolve_chain(
            self,
            self.event_specs,
            self.round_index,
            facts,
            fired_this_session=self.fired_event_ids,
        )
        deltas.extend(event_outcome.deltas)
        for delta in event_outcome.deltas:
            if delta["kind"] == "goal_intervention":
                self._note(
                    self._notices_next,
                    delta["id"],
                    f"short-term goal updated by intervention: {delta['goal']}",
                )
            elif delta["kind"] == "agent_state":
                self._note(
                    self._notices_next,
                    delta["id"],
                    f"state {delta['label']!r} {delta['verb']}ed by event",
                )
        fired_serial = [
            {
                "id": f.event_id,
                "round": f.round,
                "cause_kind": f.cause.kind,
                "cause_ref": f.cause.ref,
            }
            for f in event_outcome.fired
        ]
        for diag in event_outcome.diagnostics:
            fired_serial.append({"diagnostic": diag, "round": self.round_index})

        all_subs = list(self._free_subs) + queue
        all_outcomes = list(self._free_outcomes) + outcomes
        # Mid-run arrivals recorded since the previous commit surface in
        # this round's record so a replay can re-create them in step.
        all_deltas = list(self._spawn_deltas) + list(self._free_deltas) + deltas
        self._spawn_deltas = []
        body = {
            "round": self.round_index,
            "submissions": [self._serialize_sub(s) for s in all_subs],
            "outcomes": all_outcomes,
            "deltas": all_deltas,
            "events": fired_serial,
            "chats": [
                {"speaker": speaker, "peers": list(peers), "utterance": utterance}
                for speaker, peers, utterance in chats
            ],
            "rng_state_digest": self._rng_digest(),
        }
        self.runlog.append(body)

        report = RoundReport(
            round_index=self.round_index,
            outcomes=all_outcomes,
            state_deltas=all_deltas,
            chats_delivered=chats,
            events=fired_serial,
        )
        self._snapshot_trajectory(self.round_index)

        self._failures_current = self._failures_next
        self._failures_next = {}
        self._notices_current = self._notices_next
        self._notices_next = {}
        self._inbox_current = self._inbox_next
        self._inbox_next = {}
        self._subs = []
        self._free_subs = []
        self._free_outcomes = []
        self._free_deltas = []
        self._free_k = 0
        self._next_seq = 0
        self._used_furniture = set()
        self.round_index += 1
        return report

    def _snapshot_trajectory(self, round_index: int) -> None:
        for agent in sorted(self.agents.values(), key=lambda a: a.id):
            v, a, d = agent.emotion.as_tuple()
            self.trajectory.append(
                {
                    "round": round_index,
                    "agent": agent.id,
                    "x": agent.position[0],
                    "y": agent.position[1],
                    "region": self.region_at(agent.position) or "",
                    "v": v,
                    "a": a,
                    "d": d,
                    "overall": v + a + d,
                }
            )

    def step_all(self, backend: Backend) -> RoundReport:
        """One full round: perceive -> decide -> submit for every
        autonomous agent (stable id order), then resolve. Backend or
        parse failures idle the agent for the round."""
        for agent_id in sorted(self.agents):
            agent = self.agents[agent_id]
            if agent.human_controlled:
                continue
            perception = self.build_perception(agent_id)
            request = assemble_request(self, agent, perception)
            try:
                response = backend.decide(request)
            except Exception as exc:  # backend fault => idle, logged
                self.idle_log.append(
                    {"round": self.round_index, "agent": agent_id, "reason": str(exc)}
                )
                continue
            if response is None:
                self.idle_log.append(
                    {"round": self.round_index, "agent": agent_id, "reason": "no decision"}
                )
                continue
            try:
                parsed = parse_action(response.action_text, self.registry)
            except ActionParseError as exc:
                self.idle_log.append(
                    {"round": self.round_index, "agent": agent_id, "reason": str(exc)}
                )
                continue

            referenced: list[str] = []
            if isinstance(parsed, StandardAction):
                if parsed.object_ref:
                    referenced.append(parsed.object_ref)
                if parsed.target_ref:
                    referenced.append(parsed.target_ref)
                referenced.extend(parsed.chat_peers)
            for ref in dict.fromkeys(referenced):
                if ref in self.agents:
                    name = self.agents[ref].name
                elif ref in self.objects:
                    name = self.objects[ref].name
                else:
                    continue  # regions and other places carry no impression
                if agent.om.impression_of(ref) is None:
                    agent.om.remember(
                        ref, backend.describe_impression(agent.id, ref, name)
                    )

            if response.new_short_term_goal:
                agent.goals.short_term = response.new_short_term_goal
            update_interior(
                agent,
                response.new_cognition or "Carrying on.",
                self.lexicon,
                round_index=self.round_index,
                action_text=response.action_text,
                embedder=self.embedder,
            )
            movement = parsed if isinstance(parsed, MoveAction) else None
            standard = parsed if isinstance(parsed, StandardAction) else None
            try:
                self.submit(
                    agent_id,
                    movement=movement,
                    standard=standard,
                    source="backend",
                    decision={
                        "action_text": response.action_text,
                        "cognition": response.new_cognition,
                        "short_term_goal": response.new_short_term_goal,
                    },
                )
            except SubmissionError as exc:
                self.idle_log.append(
                    {"round": self.round_index, "agent": agent_id, "reason": str(exc)}
                )
        return self.resolve_round()
