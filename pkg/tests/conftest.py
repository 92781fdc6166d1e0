"""Shared fixtures: compact map documents, agent factories, and a
module-cached lexicon/embedder so unit tests stay fast."""

from __future__ import annotations

import pytest

from ethnosim.affect import default_lexicon
from ethnosim.agents import AgentRecord, Demographics, Goals
from ethnosim.engine import EngineConfig, Simulation
from ethnosim.memory import SeededProjectionEmbedder
from ethnosim.world import load_map

BASE_TEXTURES = [
    {"id": "floor", "category": "ground", "glyph": "."},
    {"id": "grass", "category": "ground", "glyph": ","},
    {"id": "wall", "category": "wall", "glyph": "#"},
    {"id": "bench_t", "category": "furniture", "glyph": "b"},
    {"id": "crate_t", "category": "item", "glyph": "c"},
]


def map_doc(
    width: int = 8,
    height: int = 8,
    *,
    walls: set | tuple = (),
    regions: list | None = None,
    objects: list | None = None,
    name: str = "Test Map",
) -> dict:
    walls = set(tuple(w) for w in walls)
    cells = [
        {
            "x": x,
            "y": y,
            "ground": "floor",
            "blocker": "wall" if (x, y) in walls else None,
        }
        for y in range(height)
        for x in range(width)
    ]
    return {
        "name": name,
        "width": width,
        "height": height,
        "textures": [dict(t) for t in BASE_TEXTURES],
        "cells": cells,
        "regions": regions or [],
        "objects": objects or [],
    }


def furniture(obj_id: str, name: str, x: int, y: int, **extra) -> dict:
    doc = {
        "id": obj_id,
        "name": name,
        "type": "furniture",
        "description": f"A {name.lower()}.",
        "function": [],
        "states": [],
        "location": [x, y],
    }
    doc.update(extra)
    return doc


def item(obj_id: str, name: str, x: int, y: int, **extra) -> dict:
    doc = {
        "id": obj_id,
        "name": name,
        "type": "item",
        "description": f"A {name.lower()}.",
        "function": [],
        "states": [],
        "location": [x, y],
    }
    doc.update(extra)
    return doc


def make_agent(agent_id: str, name: str | None = None, **kw) -> AgentRecord:
    return AgentRecord(
        id=agent_id,
        name=name or agent_id.replace("-", " ").title(),
        group=kw.pop("group", "Residents"),
        profile=kw.pop("profile", Demographics(gender="Female", age_band="30-49")),
        self_awareness=kw.pop("self_awareness", f"I am {agent_id}."),
        goals=kw.pop("goals", Goals(long_term="Live well.", short_term="Look around.")),
        **kw,
    )


_LEXICON = default_lexicon()
_EMBEDDER = SeededProjectionEmbedder()


@pytest.fixture(scope="session")
def lexicon():
    return _LEXICON


@pytest.fixture(scope="session")
def embedder():
    return _EMBEDDER


def make_sim(
    doc: dict,
    agents: list[AgentRecord],
    config: EngineConfig | None = None,
    events: list | None = None,
    *,
    genesis: bool = True,
) -> Simulation:
    sim = Simulation(
        load_map(doc),
        agents,
        config=config or EngineConfig(seed=7),
        event_specs=events,
        lexicon=_LEXICON,
        embedder=_EMBEDDER,
    )
    if genesis:
        sim.commit_genesis()
    return sim
