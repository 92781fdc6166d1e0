"""Grid world model: textures, cells, regions, objects, and map documents.

A map document is a plain JSON object with the layout described in
``load_map``. Maps are immutable after loading; all mutable world state
(object states, item locations, agent occupancy) lives in the engine's
simulation state.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable

Coord = tuple[int, int]

CELL_SCALE_FEET = 5


class TextureCategory(str, Enum):
    GROUND = "ground"
    WALL = "wall"
    FURNITURE = "furniture"
    ITEM = "item"


class MapError(Exception):
    """Structural problem in a map document: bad schema, dangling
    reference, or out-of-bounds coordinate. ``path`` points into the
    offending part of the document."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


@dataclass(frozen=True)
class Texture:
    id: str
    category: TextureCategory
    glyph: str


@dataclass(frozen=True)
class GridCell:
    coord: Coord
    ground: str | None = None
    blocker: str | None = None


@dataclass(frozen=True)
class RegionArea:
    name: str
    description: str
    cells: frozenset[Coord]


class EffectVerb(str, Enum):
    ADD = "add"
    REMOVE = "remove"


class EffectTarget(str, Enum):
    ACTOR = "actor"
    OBJECT = "object"


@dataclass(frozen=True)
class StateEffect:
    verb: EffectVerb
    label: str
    target: EffectTarget


@dataclass(frozen=True)
class WorldObject:
    """An authored furniture piece or item. ``location`` is a coord, or
    the carrier's agent id once an item has been picked up (runtime
    copies only; authored maps always place objects at coords).
    Furniture never moves."""

    id: str
    name: str
    kind: TextureCategory  # furniture or item
    description: str
    function: tuple[StateEffect, ...]
    states: frozenset[str]
    location: Coord | str

    @property
    def placed(self) -> bool:
        return isinstance(self.location, tuple)


@dataclass(frozen=True)
class WorldMap:
    width: int
    height: int
    textures: tuple[Texture, ...]
    cells: tuple[GridCell, ...]  # dense, row-major
    regions: tuple[RegionArea, ...]
    objects: tuple[WorldObject, ...]
    cell_scale_feet: int = CELL_SCALE_FEET
    _region_by_coord: dict[Coord, str] = field(
        default_factory=dict, repr=False, compare=False
    )

    def in_bounds(self, coord: Coord) -> bool:
        x, y = coord
        return 0 <= x < self.width and 0 <= y < self.height

    def cell(self, coord: Coord) -> GridCell:
        x, y = coord
        return self.cells[y * self.width + x]

    def is_wall(self, coord: Coord) -> bool:
        return self.cell(coord).blocker is not None

    def texture(self, texture_id: str) -> Texture | None:
        for t in self.textures:
            if t.id == texture_id:
                return t
        return None

    def region(self, name: str) -> RegionArea | None:
        for r in self.regions:
            if r.name == name:
                return r
        return None

    def object(self, object_id: str) -> WorldObject | None:
        for o in self.objects:
            if o.id == object_id:
                return o
        return None

    @property
    def wall_coords(self) -> frozenset[Coord]:
        return frozenset(c.coord for c in self.cells if c.blocker is not None)


@dataclass(frozen=True)
class Violation:
    code: str
    subject: str
    detail: str

    def __str__(self) -> str:
        return f"[{self.code}] {self.subject}: {self.detail}"


_OBJECT_ATTRS = ("name", "type", "description", "function", "states")


def _require(doc: dict, key: str, path: str):
    if key not in doc:
        raise MapError(path, f"missing field '{key}'")
    return doc[key]


def load_map(document: dict | str | Path) -> WorldMap:
    """Build a WorldMap from a map document (dict, JSON text, or path).

    Document layout::

        {width, height, textures[], cells[], regions[], objects[]}
        texture: {id, category, glyph}
        cell:    {x, y, ground, blocker}
        region:  {name, description, cells: [[x, y], ...]}
        object:  {id, name, type, description,
                  function: [{verb, label, target}], states[], location}

    Raises MapError on schema violations, dangling texture/object
    references, and out-of-bounds coordinates. Semantic invariants
    (uniqueness, region placement) are checked by ``validate_map``.
    """
    if isinstance(document, Path):
        document = json.loads(document.read_text(encoding="utf-8"))
    elif isinstance(document, str):
        document = json.loads(document)
    if not isinstance(document, dict):
        raise MapError("$", "document must be an object")

    width = _require(document, "width", "$")
    height = _require(document, "height", "$")
    if not isinstance(width, int) or not isinstance(height, int) or width <= 0 or height <= 0:
        raise MapError("$", "width and height must be positive integers")

    textures: list[Texture] = []
    for i, tdoc in enumerate(_require(document, "textures", "$")):
        path = f"$.textures[{i}]"
        tid = _require(tdoc, "id", path)
        cat = _require(tdoc, "category", path)
        try:
            category = TextureCategory(cat)
        except ValueError:
            raise MapError(path, f"unknown category {cat!r}")
        textures.append(Texture(tid, category, tdoc.get("glyph", "?")))
    tex_by_id = {}
    for t in textures:
        tex_by_id.setdefault(t.id, t)

    def resolve_texture(tid: str, expect: TextureCategory, path: str) -> str:
        tex = tex_by_id.get(tid)
        if tex is None:
            raise MapError(path, f"dangling texture reference {tid!r}")
        if tex.category is not expect:
            raise MapError(path, f"texture {tid!r} is {tex.category.value}, expected {expect.value}")
        return tid

    grid: list[GridCell | None] = [None] * (width * height)
    for i, cdoc in enumerate(_require(document, "cells", "$")):
        path = f"$.cells[{i}]"
        x = _require(cdoc, "x", path)
        y = _require(cdoc, "y", path)
        if not (0 <= x < width and 0 <= y < height):
            raise MapError(path, f"coordinate ({x}, {y}) out of bounds")
        ground = cdoc.get("ground")
        blocker = cdoc.get("blocker")
        if ground is not None:
            resolve_texture(ground, TextureCategory.GROUND, path)
        if blocker is not None:
            resolve_texture(blocker, TextureCategory.WALL, path)
        grid[y * width + x] = GridCell((x, y), ground, blocker)
    cells = tuple(
        c if c is not None else GridCell((i % width, i // width))
        for i, c in enumerate(grid)
    )

    regions: list[RegionArea] = []
    for i, rdoc in enumerate(_require(document, "regions", "$")):
        path = f"$.regions[{i}]"
        name = _require(rdoc, "name", path)
        coords = []
        for j, pair in enumerate(_require(rdoc, "cells", path)):
            x, y = pair
            if not (0 <= x < width and 0 <= y < height):
                raise MapError(f"{path}.cells[{j}]", f"coordinate ({x}, {y}) out of bounds")
            coords.append((x, y))
        regions.append(RegionArea(name, rdoc.get("description", ""), frozenset(coords)))

    objects: list[WorldObject] = []
    for i, odoc in enumerate(_require(document, "objects", "$")):
        path = f"$.objects[{i}]"
        oid = _require(odoc, "id", path)
        for attr in _OBJECT_ATTRS:
            if attr not in odoc:
                raise MapError(path, f"object {oid!r} missing attribute '{attr}'")
        kind = odoc["type"]
        if kind not in (TextureCategory.FURNITURE.value, TextureCategory.ITEM.value):
            raise MapError(path, f"object type must be furniture or item, got {kind!r}")
        effects = []
        for j, edoc in enumerate(odoc["function"]):
            epath = f"{path}.function[{j}]"
            verb = _require(edoc, "verb", epath)
            label = _require(edoc, "label", epath)
            target = _require(edoc, "target", epath)
            try:
                effects.append(StateEffect(EffectVerb(verb), label, EffectTarget(target)))
            except ValueError:
                raise MapError(epath, f"bad effect verb/target {verb!r}/{target!r}")
            if not isinstance(label, str) or not label.strip():
                raise MapError(epath, "effect label must be a non-empty string")
        loc = _require(odoc, "location", path)
        x, y = loc
        if not (0 <= x < width and 0 <= y < height):
            raise MapError(path, f"location ({x}, {y}) out of bounds")
        objects.append(
            WorldObject(
                id=oid,
                name=odoc["name"],
                kind=TextureCategory(kind),
                description=odoc["description"],
                function=tuple(effects),
                states=frozenset(odoc["states"]),
                location=(x, y),
            )
        )

    region_by_coord: dict[Coord, str] = {}
    for r in regions:
        for c in r.cells:
            region_by_coord.setdefault(c, r.name)

    return WorldMap(
        width=width,
        height=height,
        textures=tuple(textures),
        cells=cells,
        regions=tuple(regions),
        objects=tuple(objects),
        _region_by_coord=region_by_coord,
    )


def dump_map(world: WorldMap) -> dict:
    """Serialize back to the document layout accepted by load_map."""
    return {
        "width": world.width,
        "height": world.height,
        "textures": [
            {"id": t.id, "category": t.category.value, "glyph": t.glyph}
            for t in world.textures
        ],
        "cells": [
            {"x": c.coord[0], "y": c.coord[1], "ground": c.ground, "blocker": c.blocker}
            for c in world.cells
            if c.ground is not None or c.blocker is not None
        ],
        "regions": [
            {
                "name": r.name,
                "description": r.description,
                "cells": sorted([x, y] for (x, y) in r.cells),
            }
            for r in world.regions
        ],
        "objects": [
            {
                "id": o.id,
                "name": o.name,
                "type": o.kind.value,
                "description": o.description,
                "function": [
                    {"verb": e.verb.value, "label": e.label, "target": e.target.value}
                    for e in o.function
                ],
                "states": sorted(o.states),
                "location": list(o.location) if o.placed else o.location,
            }
            for o in world.objects
        ],
    }


def validate_map(world: WorldMap) -> list[Violation]:
    """Check semantic invariants. Empty list means the map is sound.

    Violations are data, not errors: the map editor surfaces them to
    the scenario author.
    """
    out: list[Violation] = []

    seen_tex: set[str] = set()
    for t in world.textures:
        if t.id in seen_tex:
            out.append(Violation("texture.duplicate", t.id, "duplicate texture id"))
        seen_tex.add(t.id)

    seen_regions: set[str] = set()
    claimed: dict[Coord, str] = {}
    for r in world.regions:
        if r.name in seen_regions:
            out.append(Violation("region.duplicate", r.name, "duplicate region name"))
        seen_regions.add(r.name)
        for coord in sorted(r.cells):
            cell = world.cell(coord)
            if cell.ground is None:
                out.append(
                    Violation("region.no-ground", r.name, f"cell {coord} has no ground texture")
                )
            if cell.blocker is not None:
                out.append(
                    Violation("region.on-wall", r.name, f"cell {coord} sits on a wall")
                )
            if coord in claimed and claimed[coord] != r.name:
                out.append(
                    Violation(
                        "region.overlap",
                        r.name,
                        f"cell {coord} already belongs to {claimed[coord]!r}",
                    )
                )
            claimed.setdefault(coord, r.name)

    seen_obj: set[str] = set()
    furniture_cells: dict[Coord, str] = {}
    for o in world.objects:
        if o.id in seen_obj:
            out.append(Violation("object.duplicate", o.id, "duplicate object id"))
        seen_obj.add(o.id)
        if world.cell(o.location).blocker is not None:
            out.append(Violation("object.on-wall", o.id, f"placed on wall cell {o.location}"))
        if o.kind is TextureCategory.FURNITURE:
            prev = furniture_cells.get(o.location)
            if prev is not None:
                out.append(
                    Violation(
                        "object.furniture-stack",
                        o.id,
                        f"cell {o.location} already holds furniture {prev!r}",
                    )
                )
            furniture_cells[o.location] = o.id

    return out


def apply_state_effect(target_states: Iterable[str], effect: StateEffect) -> frozenset[str]:
    """Apply one add/remove effect to a state set. Both verbs are
    idempotent; removing an absent label is a no-op."""
    states = set(target_states)
    if effect.verb is EffectVerb.ADD:
        states.add(effect.label)
    else:
        states.discard(effect.label)
    return frozenset(states)


def region_of(world: WorldMap, coord: Coord) -> str | None:
    """Name of the region containing coord, or None. Raises on
    out-of-bounds coordinates."""
    if not world.in_bounds(coord):
        raise ValueError(f"coordinate {coord} out of bounds")
    return world._region_by_coord.get(coord)
