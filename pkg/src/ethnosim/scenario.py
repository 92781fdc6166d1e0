"""Scenario files: one JSON document bundling a map, a population
recipe, relationship seeds, event definitions, optional human-controlled
slots, scheduled mid-run arrivals, and questionnaire items.

``load_scenario`` parses and validates; ``build_simulation`` turns a
scenario plus a seed into a ready `Simulation`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .agents import AgentRecord, Demographics, Goals
from .engine import EngineConfig, Simulation
from .events import Activation, EventSpec, TargetSelector
from .memory import WorkingMemory
from .population import (
    DEFAULT_SELF_AWARENESS,
    DEFAULT_SHORT_TERM_GOAL,
    GroupSpec,
    PopulationError,
    RelationshipSeed,
    _install_relationships,
    _slug,
    sample_population,
)
from .runlog import RunLog
from .world import EffectTarget, EffectVerb, StateEffect, WorldMap, load_map


class ScenarioError(Exception):
    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


@dataclass(frozen=True)
class QuestionnaireItem:
    id: str
    prompt: str
    low: int = 1
    high: int = 7


@dataclass(frozen=True)
class ArrivalSpec:
    round: int
    agent: dict  # same shape as a "humans" entry


@dataclass
class Scenario:
    name: str
    description: str
    world: WorldMap
    groups: list[GroupSpec] = field(default_factory=list)
    relationships: list[RelationshipSeed] = field(default_factory=list)
    humans: list[dict] = field(default_factory=list)
    arrivals: list[ArrivalSpec] = field(default_factory=list)
    events: list[EventSpec] = field(default_factory=list)
    config_overrides: dict = field(default_factory=dict)
    questionnaire: list[QuestionnaireItem] = field(default_factory=list)


def _require(doc: dict, key: str, path: str):
    if key not in doc:
        raise ScenarioError(path, f"missing required field {key!r}")
    return doc[key]


def _effect_from(doc: dict, path: str) -> StateEffect:
    try:
        return StateEffect(
            verb=EffectVerb(_require(doc, "verb", path)),
            label=_require(doc, "label", path),
            target=EffectTarget(_require(doc, "target", path)),
        )
    except ValueError as exc:
        raise ScenarioError(path, str(exc)) from None


def _selector_from(doc: dict, path: str) -> TargetSelector:
    try:
        return TargetSelector(
            scope=_require(doc, "scope", path),
            kind=doc.get("kind"),
            state_label=doc.get("state_label"),
            ids=tuple(doc.get("ids", ())),
            name_contains=doc.get("name_contains"),
            group=doc.get("group"),
        )
    except ValueError as exc:
        raise ScenarioError(path, str(exc)) from None


def _activation_from(doc: dict, path: str) -> Activation:
    try:
        return Activation(
            kind=_require(doc, "kind", path),
            round=doc.get("round"),
            object_kind=doc.get("object_kind"),
            description_contains=doc.get("description_contains"),
            state_label=doc.get("state_label"),
            verb=doc.get("verb"),
            actor=doc.get("actor"),
            target=doc.get("target"),
        )
    except ValueError as exc:
        raise ScenarioError(path, str(exc)) from None


def _event_from(doc: dict, path: str) -> EventSpec:
    effects = tuple(
        (
            _selector_from(_require(entry, "selector", f"{path}.effects[{i}]"), f"{path}.effects[{i}].selector"),
            _effect_from(_require(entry, "effect", f"{path}.effects[{i}]"), f"{path}.effects[{i}].effect"),
        )
        for i, entry in enumerate(doc.get("effects", ()))
    )
    intervention = None
    if "intervention" in doc and doc["intervention"] is not None:
        iv = doc["intervention"]
        intervention = (
            _selector_from(_require(iv, "selector", f"{path}.intervention"), f"{path}.intervention.selector"),
            _require(iv, "goal", f"{path}.intervention"),
        )
    range_cells = None
    if doc.get("range_cells") is not None:
        range_cells = frozenset((int(c[0]), int(c[1])) for c in doc["range_cells"])
    return EventSpec(
        id=_require(doc, "id", path),
        activation=_activation_from(_require(doc, "activation", path), f"{path}.activation"),
        range_region=doc.get("range_region"),
        range_cells=range_cells,
        range_all=bool(doc.get("range_all", False)),
        effects=effects,
        intervention=intervention,
        once=bool(doc.get("once", True)),
    )


def _group_from(doc: dict, path: str) -> GroupSpec:
    try:
        return GroupSpec(
            name=_require(doc, "name", path),
            size=int(_require(doc, "size", path)),
            stance_label=doc.get("stance", ""),
            long_term_goal_template=doc.get("long_term_goal", ""),
            self_awareness_template=doc.get("self_awareness", DEFAULT_SELF_AWARENESS),
            short_term_goal_template=doc.get("short_term_goal", DEFAULT_SHORT_TERM_GOAL),
            initial_items=tuple(doc.get("items", ())),
            initial_region=doc.get("spawn_region"),
            distributions=doc.get("distributions", {}),
            exact_counts=doc.get("exact_counts", {}),
            names=tuple(doc.get("names", ())),
            occupations=tuple(doc.get("occupations", ())),
            roles=tuple(doc.get("roles", ())),
        )
    except PopulationError as exc:
        raise ScenarioError(path, str(exc)) from None


def scenario_from_dict(doc: dict) -> Scenario:
    name = _require(doc, "name", "scenario")
    world = load_map(_require(doc, "map", "scenario"))
    population = doc.get("population", {})
    groups = [
        _group_from(g, f"population.groups[{i}]")
        for i, g in enumerate(population.get("groups", ()))
    ]
    relationships = []
    for i, r in enumerate(population.get("relationships", ())):
        path = f"population.relationships[{i}]"
        try:
            relationships.append(
                RelationshipSeed(
                    from_ref=_require(r, "from", path),
                    to_ref=_require(r, "to", path),
                    attitude=_require(r, "attitude", path),
                )
            )
        except PopulationError as exc:
            raise ScenarioError(path, str(exc)) from None
    arrivals = [
        ArrivalSpec(
            round=int(_require(a, "round", f"arrivals[{i}]")),
            agent=_require(a, "agent", f"arrivals[{i}]"),
        )
        for i, a in enumerate(doc.get("arrivals", ()))
    ]
    events = [_event_from(e, f"events[{i}]") for i, e in enumerate(doc.get("events", ()))]
    questionnaire = [
        QuestionnaireItem(
            id=_require(q, "id", f"questionnaire[{i}]"),
            prompt=_require(q, "prompt", f"questionnaire[{i}]"),
            low=int(q.get("low", 1)),
            high=int(q.get("high", 7)),
        )
        for i, q in enumerate(doc.get("questionnaire", ()))
    ]
    return Scenario(
        name=name,
        description=doc.get("description", ""),
        world=world,
        groups=groups,
        relationships=relationships,
        humans=list(doc.get("humans", ())),
        arrivals=arrivals,
        events=events,
        config_overrides=dict(doc.get("config", {})),
        questionnaire=questionnaire,
    )


def load_scenario(source: str | Path | dict) -> Scenario:
    if isinstance(source, dict):
        return scenario_from_dict(source)
    text = Path(source).read_text(encoding="utf-8")
    return scenario_from_dict(json.loads(text))


def agent_from_seed(doc: dict, *, wm_capacity: int = 10, human: bool | None = None) -> AgentRecord:
    """Materialize a single declared agent (a human slot or a scheduled
    arrival) from its scenario entry."""
    name = _require(doc, "name", "agent")
    agent_id = doc.get("id") or _slug(name)
    profile = Demographics(
        gender=doc.get("gender", ""),
        age_band=doc.get("age_band", ""),
        education=doc.get("education", ""),
        occupation=doc.get("occupation", "resident"),
        extra=tuple(sorted((k, str(v)) for k, v in doc.get("extra", {}).items())),
    )
    fields_ = dict(profile.as_dict())
    fields_.update(name=name, group=doc.get("group", "visitor"), stance=doc.get("stance", ""))
    self_awareness = doc.get("self_awareness", DEFAULT_SELF_AWARENESS).format(**fields_).strip()
    long_term = doc.get("long_term_goal", "Find a place in this community.").format(**fields_).strip()
    short_term = doc.get("short_term_goal", DEFAULT_SHORT_TERM_GOAL).format(**fields_).strip()
    return AgentRecord(
        id=agent_id,
        name=name,
        group=doc.get("group", "visitor"),
        profile=profile,
        self_awareness=self_awareness,
        goals=Goals(long_term=long_term, short_term=short_term),
        wm=WorkingMemory(capacity=wm_capacity),
        inventory=list(doc.get("items", ())),
        spawn_region=doc.get("spawn_region"),
        human_controlled=bool(doc.get("human", human if human is not None else False)),
    )


def install_resolvable_relationships(
    roster: list[AgentRecord], seeds: list[RelationshipSeed]
) -> list[RelationshipSeed]:
    """Install every seed whose endpoints both resolve against the
    current roster; returns the ones left pending (e.g. seeds that
    mention an agent who arrives later)."""
    pending: list[RelationshipSeed] = []
    for seed in seeds:
        try:
            _install_relationships(roster, [seed])
        except PopulationError:
            pending.append(seed)
    return pending


def build_simulation(
    scenario: Scenario, seed: int, runlog: RunLog | None = None
) -> tuple[Simulation, list[RelationshipSeed]]:
    """Instantiate the scenario: sampled roster plus declared human
    slots, spawned in declaration order. Relationship seeds that cannot
    resolve yet (scheduled arrivals) are returned for later
    installation."""
    overrides = dict(scenario.config_overrides)
    overrides.pop("seed", None)
    config = EngineConfig(seed=seed, **overrides)
    roster = sample_population(scenario.groups, [], seed, wm_capacity=config.wm_capacity)
    for doc in scenario.humans:
        roster.append(agent_from_seed(doc, wm_capacity=config.wm_capacity, human=True))
    pending = install_resolvable_relationships(roster, scenario.relationships)
    sim = Simulation(
        scenario.world,
        roster,
        config=config,
        event_specs=scenario.events,
        runlog=runlog,
    )
    return sim, pending
