"""Declarative events: scheduled, existence-triggered, or
action-triggered; each applies state effects over a coordinate range,
may rewrite agents' short-term goals (interventions), and may chain when
its state changes satisfy another event's existence predicate.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .world import Coord, StateEffect, WorldMap, WorldObject, apply_state_effect

CHAIN_ITERATION_CAP = 32


@dataclass(frozen=True)
class Activation:
    """One of: scheduled(round), existence(object predicate),
    action(verb/actor/target predicate)."""

    kind: str  # "scheduled" | "existence" | "action"
    round: int | None = None
    object_kind: str | None = None
    description_contains: str | None = None
    state_label: str | None = None
    verb: str | None = None
    actor: str | None = None
    target: str | None = None

    def __post_init__(self):
        if self.kind not in ("scheduled", "existence", "action"):
            raise ValueError(f"unknown activation kind {self.kind!r}")
        if self.kind == "scheduled" and self.round is None:
            raise ValueError("scheduled activation needs a round")


@dataclass(frozen=True)
class TargetSelector:
    scope: str  # "objects" | "agents"
    kind: str | None = None
    state_label: str | None = None
    ids: tuple[str, ...] = ()
    name_contains: str | None = None
    group: str | None = None

    def __post_init__(self):
        if self.scope not in ("objects", "agents"):
            raise ValueError(f"unknown selector scope {self.scope!r}")


@dataclass(frozen=True)
class EventSpec:
    id: str
    activation: Activation
    range_region: str | None = None
    range_cells: frozenset[Coord] | None = None
    range_all: bool = False
    effects: tuple[tuple[TargetSelector, StateEffect], ...] = ()
    intervention: tuple[TargetSelector, str] | None = None
    once: bool = True


@dataclass(frozen=True)
class EventCause:
    kind: str  # "schedule" | "existence" | "action" | "chain"
    ref: str = ""


@dataclass(frozen=True)
class FiredEvent:
    event_id: str
    round: int
    cause: EventCause


@dataclass(frozen=True)
class ActionFact:
    """Executed-action summary the trigger evaluator matches against."""

    seq: int
    actor_id: str
    verb: str  # "go", "use", "apply", "take", "put", "give", "chat"
    object_id: str | None = None
    target_ids: tuple[str, ...] = ()


@dataclass
class EventOutcome:
    fired: list[FiredEvent] = field(default_factory=list)
    deltas: list[dict] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)


def resolve_range(spec: EventSpec, world: WorldMap) -> frozenset[Coord]:
    if spec.range_all:
        return frozenset(
            (x, y) for y in range(world.height) for x in range(world.width)
        )
    if spec.range_region is not None:
        region = world.region(spec.range_region)
        if region is None:
            raise KeyError(f"event {spec.id}: unknown region {spec.range_region!r}")
        return region.cells
    return spec.range_cells or frozenset()


def _object_matches(activation: Activation, obj: WorldObject) -> bool:
    if activation.object_kind is not None and obj.kind != activation.object_kind:
        return False
    if activation.description_contains is not None:
        if activation.description_contains.lower() not in obj.description.lower():
            return False
    if activation.state_label is not None and activation.state_label not in obj.states:
        return False
    return True


def _action_matches(activation: Activation, fact: ActionFact, group_of) -> bool:
    if activation.verb is not None and fact.verb != activation.verb:
        return False
    if activation.actor is not None:
        if fact.actor_id != activation.actor and group_of(fact.actor_id) != activation.actor:
            return False
    if activation.target is not None:
        if activation.target != fact.object_id and activation.target not in fact.target_ids:
            return False
    return True


def _select_objects(selector: TargetSelector, session, cells: frozenset[Coord]):
    out = []
    for obj in session.objects.values():
        if obj.location not in cells:
            continue
        if selector.ids and obj.id not in selector.ids:
            continue
        if selector.kind is not None and obj.kind != selector.kind:
            continue
        if selector.state_label is not None and selector.state_label not in obj.states:
            continue
        if selector.name_contains is not None and selector.name_contains.lower() not in obj.name.lower():
            continue
        out.append(obj.id)
    return sorted(out)


def _select_agents(selector: TargetSelector, session, cells: frozenset[Coord]):
    out = []
    for agent in session.agents.values():
        if agent.position not in cells:
            continue
        if selector.ids and agent.id not in selector.ids:
            continue
        if selector.group is not None and agent.group != selector.group:
            continue
        if selector.state_label is not None and selector.state_label not in agent.states:
            continue
        if selector.name_contains is not None and selector.name_contains.lower() not in agent.name.lower():
            continue
        out.append(agent.id)
    return sorted(out)


def _validate_selector(selector: TargetSelector, session) -> str | None:
    """Explicitly named ids must exist; returns an error string if not."""
    pool = session.objects if selector.scope == "objects" else session.agents
    for explicit in selector.ids:
        if explicit not in pool:
            return f"unknown {selector.scope[:-1]} id {explicit!r}"
    return None


def evaluate_triggers(
    specs,
    round_index: int,
    session,
    round_actions,
    *,
    fired_this_session: set[str],
    fired_this_round: set[str],
) -> list[FiredEvent]:
    """Initial wave: scheduled + existence + action triggers."""
    fired: list[FiredEvent] = []

    def group_of(agent_id: str) -> str | None:
        agent = session.agents.get(agent_id)
        return agent.group if agent is not None else None

    for spec in specs:
        if spec.id in fired_this_round:
            continue
        if spec.once and spec.id in fired_this_session:
            continue
        act = spec.activation
        if act.kind == "scheduled":
            if act.round == round_index:
                fired.append(FiredEvent(spec.id, round_index, EventCause("schedule")))
        elif act.kind == "existence":
            cells = resolve_range(spec, session.world)
            for obj in sorted(session.objects.values(), key=lambda o: o.id):
                if obj.location in cells and _object_matches(act, obj):
                    fired.append(
                        FiredEvent(spec.id, round_index, EventCause("existence", obj.id))
                    )
                    break  # one firing per event per round
        elif act.kind == "action":
            for fact in round_actions:
                if _action_matches(act, fact, group_of):
                    fired.append(
                        FiredEvent(spec.id, round_index, EventCause("action", f"seq:{fact.seq}"))
                    )
                    break
    return fired


def apply_event(session, spec: EventSpec, fired: FiredEvent) -> tuple[list[dict], str | None]:
    """Apply all effects (and any intervention) atomically.

    Returns (deltas, misfire_reason); a misfired event produces no
    deltas at all.
    """
    try:
        cells = resolve_range(spec, session.world)
    except KeyError as exc:
        return [], str(exc)

    planned: list[tuple[str, str, StateEffect]] = []  # (scope, target id, effect)
    for selector, effect in spec.effects:
        error = _validate_selector(selector, session)
        if error is not None:
            return [], f"event {spec.id}: {error}"
        if selector.scope == "objects":
            for object_id in _select_objects(selector, session, cells):
                planned.append(("objects", object_id, effect))
        else:
            for agent_id in _select_agents(selector, session, cells):
                planned.append(("agents", agent_id, effect))

    intervention_targets: list[str] = []
    if spec.intervention is not None:
        selector, _goal = spec.intervention
        if selector.scope != "agents":
            return [], f"event {spec.id}: intervention selector must target agents"
        error = _validate_selector(selector, session)
        if error is not None:
            return [], f"event {spec.id}: {error}"
        intervention_targets = _select_agents(selector, session, cells)

    deltas: list[dict] = []
    for scope, target_id, effect in planned:
        if scope == "objects":
            obj = session.objects[target_id]
            new_states = apply_state_effect(obj.states, effect)
            if new_states != obj.states:
                session.objects[target_id] = replace(obj, states=new_states)
                deltas.append(
                    {
                        "kind": "object_state",
                        "id": target_id,
                        "verb": effect.verb.value,
                        "label": effect.label,
                        "event": spec.id,
                    }
                )
        else:
            agent = session.agents[target_id]
            before = set(agent.states)
            after = set(apply_state_effect(frozenset(before), effect))
            if after != before:
                agent.states.clear()
                agent.states.update(after)
                deltas.append(
                    {
                        "kind": "agent_state",
                        "id": target_id,
                        "verb": effect.verb.value,
                        "label": effect.label,
                        "event": spec.id,
                    }
                )
    if spec.intervention is not None:
        _selector, goal_text = spec.intervention
        for agent_id in intervention_targets:
            agent = session.agents[agent_id]
            agent.goals.short_term = goal_text
            deltas.append(
                {
                    "kind": "goal_intervention",
                    "id": agent_id,
                    "goal": goal_text,
                    "event": spec.id,
                }
            )
    return deltas, None


def resolve_chain(
    session,
    specs,
    round_index: int,
    round_actions,
    *,
    fired_this_session: set[str],
) -> EventOutcome:
    """Fire the initial wave, then fixpoint-iterate existence triggers
    against the mutated state until quiet. Each event fires at most once
    per round; iteration is capped with a loud diagnostic."""
    outcome = EventOutcome()
    fired_this_round: set[str] = set()
    spec_by_id = {spec.id: spec for spec in specs}

    wave = evaluate_triggers(
        specs,
        round_index,
        session,
        round_actions,
        fired_this_session=fired_this_session,
        fired_this_round=fired_this_round,
    )

    iterations = 0
    while wave:
        iterations += 1
        if iterations > CHAIN_ITERATION_CAP:
            outcome.diagnostics.append(
                f"event chain truncated at iteration cap {CHAIN_ITERATION_CAP}"
            )
            break
        wave_touched: dict[str, str] = {}  # object id -> event id that touched it
        for fired in wave:
            spec = spec_by_id[fired.event_id]
            deltas, misfire = apply_event(session, spec, fired)
            fired_this_round.add(spec.id)
            fired_this_session.add(spec.id)
            if misfire is not None:
                outcome.diagnostics.append(f"misfired: {misfire}")
                continue
            outcome.fired.append(fired)
            outcome.deltas.extend(deltas)
            for delta in deltas:
                if delta["kind"] == "object_state":
                    wave_touched.setdefault(delta["id"], spec.id)

        # Re-evaluate existence triggers only: those are the ones state
        # changes can newly satisfy.
        next_wave: list[FiredEvent] = []
        for spec in specs:
            if spec.activation.kind != "existence":
                continue
            if spec.id in fired_this_round:
                continue
            if spec.once and spec.id in fired_this_session:
                continue
            cells = resolve_range(spec, session.world)
            for obj in sorted(session.objects.values(), key=lambda o: o.id):
                if obj.location in cells and _object_matches(spec.activation, obj):
                    parent = wave_touched.get(obj.id)
                    if parent is None and wave:
                        parent = wave[0].event_id
                    cause = (
                        EventCause("chain", parent)
                        if parent is not None
                        else EventCause("existence", obj.id)
                    )
                    next_wave.append(FiredEvent(spec.id, round_index, cause))
                    break
        wave = next_wave
    return outcome
