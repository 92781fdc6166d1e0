#!/usr/bin/env python3
"""Generate the packaged scenario files.

Writes four scenario documents into src/ethnosim/scenarios/:

  study1_low_veg.json    street with a bare vacant lot
  study1_high_veg.json   same street with a community garden
  study2_community.json  30 residents in three stance groups with
                         exact-count demographics and a scheduled
                         new-resident arrival at round 10
  study3_cafe.json       café with an owner, staff, regulars, a
                         human-controlled temp-worker slot, and three
                         scheduled incidents (rounds 51, 56, 61)

Each document is validated by loading it through the scenario parser
and the map validator before it is written.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from ethnosim.population import roster_census, sample_population
from ethnosim.scenario import build_simulation, load_scenario
from ethnosim.world import validate_map

OUT_DIR = Path(__file__).resolve().parents[1] / "src" / "ethnosim" / "scenarios"


# --------------------------------------------------------------------------
# map-building helpers
# --------------------------------------------------------------------------


def base_cells(width: int, height: int, ground: str = "pavement") -> dict:
    """Bordered room: `ground` everywhere, wall blockers on the rim."""
    cells = {}
    for y in range(height):
        for x in range(width):
            blocker = "wall" if x in (0, width - 1) or y in (0, height - 1) else None
            cells[(x, y)] = {"x": x, "y": y, "ground": ground, "blocker": blocker}
    return cells


def fill_rect(cells: dict, x0: int, y0: int, x1: int, y1: int, blocker: str = "wall"):
    for y in range(y0, y1 + 1):
        for x in range(x0, x1 + 1):
            cells[(x, y)]["blocker"] = blocker


def hollow_rect(cells: dict, x0: int, y0: int, x1: int, y1: int, door: tuple[int, int]):
    for y in range(y0, y1 + 1):
        for x in range(x0, x1 + 1):
            if x in (x0, x1) or y in (y0, y1):
                cells[(x, y)]["blocker"] = "wall"
    cells[door]["blocker"] = None


def set_ground(cells: dict, coords, ground: str):
    for c in coords:
        cells[c]["ground"] = ground


def rect_cells(x0: int, y0: int, x1: int, y1: int) -> list[list[int]]:
    return [[x, y] for y in range(y0, y1 + 1) for x in range(x0, x1 + 1)]


def furniture(oid, name, description, location, function=()):
    return {
        "id": oid,
        "name": name,
        "type": "furniture",
        "description": description,
        "function": list(function),
        "states": [],
        "location": list(location),
    }


def item(oid, name, description, location, function=()):
    return {
        "id": oid,
        "name": name,
        "type": "item",
        "description": description,
        "function": list(function),
        "states": [],
        "location": list(location),
    }


def add_state(label, target="actor"):
    return {"verb": "add", "label": label, "target": target}


STD_TEXTURES = [
    {"id": "pavement", "category": "ground", "glyph": "."},
    {"id": "grass", "category": "ground", "glyph": ","},
    {"id": "floorboards", "category": "ground", "glyph": "="},
    {"id": "wall", "category": "wall", "glyph": "#"},
    {"id": "bench_t", "category": "furniture", "glyph": "n"},
    {"id": "crate_t", "category": "item", "glyph": "u"},
]


def map_doc(width, height, cells, regions, objects):
    return {
        "width": width,
        "height": height,
        "textures": STD_TEXTURES,
        "cells": [cells[(x, y)] for y in range(height) for x in range(width)],
        "regions": regions,
        "objects": objects,
    }


# --------------------------------------------------------------------------
# study 1: one street, two planting conditions
# --------------------------------------------------------------------------


def study1_map(vegetation: str) -> dict:
    W = H = 24
    cells = base_cells(W, H)
    # three house blocks per row, north and south
    for x0 in (2, 9, 16):
        fill_rect(cells, x0, 2, x0 + 4, 5)
        fill_rect(cells, x0, 18, x0 + 4, 21)

    regions = [
        {
            "name": "North Walk",
            "description": "Footpath in front of the north houses.",
            "cells": rect_cells(1, 6, 22, 7),
        },
        {
            "name": "South Walk",
            "description": "Footpath in front of the south houses.",
            "cells": rect_cells(1, 16, 22, 17),
        },
        {
            "name": "Main Street",
            "description": "The street running through the middle of the block.",
            "cells": rect_cells(1, 11, 22, 12),
        },
        {
            "name": "Corner Shop",
            "description": "A small corner shop frontage.",
            "cells": rect_cells(1, 8, 4, 10),
        },
    ]
    objects = [
        furniture(
            "shop-stall",
            "shop stall",
            "A small stall stacked with everyday goods.",
            (2, 9),
            [add_state("stocked-up")],
        ),
    ]

    lot_cells = rect_cells(8, 8, 15, 10)
    if vegetation == "high":
        regions.append(
            {
                "name": "Community Garden",
                "description": "Raised beds, young trees, and places to sit.",
                "cells": lot_cells,
            }
        )
        set_ground(cells, [tuple(c) for c in lot_cells], "grass")
        objects += [
            furniture(
                "garden-bed-1",
                "raised garden bed",
                "A raised bed of herbs and greens in rich soil.",
                (9, 9),
                [add_state("calm")],
            ),
            furniture(
                "garden-bed-2",
                "flower bed",
                "A bed of hardy flowers tended by neighbors.",
                (12, 9),
                [add_state("calm")],
            ),
            furniture(
                "garden-bed-3",
                "vegetable patch",
                "Tomato vines climbing rough stakes.",
                (15, 9),
                [add_state("calm")],
            ),
            furniture(
                "young-tree-1",
                "young maple",
                "A young maple tree casting light shade.",
                (7, 8),
            ),
            furniture(
                "young-tree-2",
                "young maple",
                "A young maple tree casting light shade.",
                (16, 8),
            ),
            furniture(
                "young-tree-3",
                "flowering cherry",
                "A slender flowering cherry tree.",
                (7, 15),
            ),
            furniture(
                "young-tree-4",
                "flowering cherry",
                "A slender flowering cherry tree.",
                (16, 15),
            ),
            furniture(
                "bench-1",
                "garden bench",
                "A wooden bench facing the beds.",
                (6, 9),
                [add_state("rested")],
            ),
            furniture(
                "bench-2",
                "garden bench",
                "A wooden bench facing the beds.",
                (17, 9),
                [add_state("rested")],
            ),
            furniture(
                "bench-3",
                "street bench",
                "A bench on the edge of the commons.",
                (6, 14),
                [add_state("rested")],
            ),
            furniture(
                "bench-4",
                "street bench",
                "A bench on the edge of the commons.",
                (17, 14),
                [add_state("rested")],
            ),
            item(
                "watering-can",
                "watering can",
                "A dented watering can, half full.",
                (11, 10),
            ),
        ]
    else:
        regions.append(
            {
                "name": "Vacant Lot",
                "description": "A bare gravel lot behind a sagging chain fence.",
                "cells": lot_cells,
            }
        )
        objects += [
            furniture(
                "bench-1",
                "street bench",
                "A weathered bench, slats cracked.",
                (6, 14),
                [add_state("rested")],
            ),
            item(
                "crumpled-flyer",
                "crumpled flyer",
                "A rain-stained flyer for a long-past event.",
                (10, 9),
            ),
            item(
                "broken-bottle",
                "broken bottle",
                "Green glass glinting in the gravel.",
                (13, 10),
            ),
        ]
    return map_doc(W, H, cells, regions, objects)


def study1_doc(vegetation: str) -> dict:
    label = "high" if vegetation == "high" else "low"
    return {
        "name": f"Street Study ({label} vegetation)",
        "description": (
            "Ten residents share one street; the block's only open lot is "
            + (
                "a tended community garden."
                if vegetation == "high"
                else "bare gravel."
            )
        ),
        "config": {"seed": 0},
        "map": study1_map(vegetation),
        "population": {
            "groups": [
                {
                    "name": "Residents",
                    "size": 10,
                    "stance": "You have lived on this street for years.",
                    "long_term_goal": "Feel at home on this street and stay on good terms with the neighbors.",
                    "short_term_goal": "Take a walk and see who is out today.",
                    "spawn_region": "Main Street",
                    "distributions": {
                        "gender": {"Female": 0.5, "Male": 0.5},
                        "age_band": {"18-29": 0.3, "30-49": 0.4, "50+": 0.3},
                        "education": {
                            "High school": 0.4,
                            "Some college": 0.3,
                            "Bachelor's": 0.3,
                        },
                    },
                    "occupations": [
                        "shop clerk",
                        "bus driver",
                        "nurse",
                        "teacher",
                        "electrician",
                    ],
                }
            ],
            "relationships": [],
        },
        "humans": [],
        "events": [],
        "questionnaire": [
            {
                "id": "distrust",
                "prompt": "From 1 to 7, how much do you distrust the people around this street?",
                "low": 1,
                "high": 7,
            },
            {
                "id": "exploitation",
                "prompt": "From 1 to 7, how likely is it that someone around here would take advantage of you?",
                "low": 1,
                "high": 7,
            },
            {
                "id": "indifference",
                "prompt": "From 1 to 7, how indifferent do the people around here feel toward you?",
                "low": 1,
                "high": 7,
            },
        ],
    }


# --------------------------------------------------------------------------
# study 2: three-stance community with exact demographic counts
# --------------------------------------------------------------------------


def study2_map() -> dict:
    W = H = 28
    cells = base_cells(W, H)
    hollow_rect(cells, 3, 3, 10, 9, door=(6, 9))
    # two house blocks in the west
    fill_rect(cells, 3, 15, 6, 18)
    fill_rect(cells, 3, 21, 6, 24)
    park = [tuple(c) for c in rect_cells(15, 17, 24, 24)]
    set_ground(cells, park, "grass")

    regions = [
        {
            "name": "Town Hall",
            "description": "The meeting room inside the town hall.",
            "cells": rect_cells(4, 4, 9, 8),
        },
        {
            "name": "Market Square",
            "description": "Open square with market stalls.",
            "cells": rect_cells(16, 4, 24, 10),
        },
        {
            "name": "High Street",
            "description": "The main street crossing town.",
            "cells": rect_cells(2, 12, 25, 13),
        },
        {
            "name": "Park",
            "description": "A grassy park with old trees.",
            "cells": rect_cells(15, 17, 24, 24),
        },
        {
            "name": "West Housing",
            "description": "The lane in front of the western houses.",
            "cells": rect_cells(8, 14, 10, 24),
        },
    ]
    objects = [
        furniture(
            "notice-board",
            "notice board",
            "The town notice board, papered with announcements.",
            (16, 4),
            [add_state("informed")],
        ),
        furniture(
            "market-stall-1",
            "produce stall",
            "Crates of vegetables under a striped awning.",
            (18, 5),
            [add_state("stocked-up")],
        ),
        furniture(
            "market-stall-2",
            "bakery stall",
            "Loaves and rolls laid out on boards.",
            (21, 5),
            [add_state("stocked-up")],
        ),
        furniture(
            "fountain",
            "stone fountain",
            "An old stone fountain, water murmuring.",
            (19, 20),
            [add_state("refreshed")],
        ),
        furniture(
            "park-bench-1",
            "park bench",
            "A bench under the trees.",
            (17, 22),
            [add_state("rested")],
        ),
        furniture(
            "park-bench-2",
            "park bench",
            "A bench under the trees.",
            (22, 21),
            [add_state("rested")],
        ),
        furniture(
            "oak-tree-1",
            "old oak",
            "A broad old oak tree.",
            (16, 18),
        ),
        furniture(
            "oak-tree-2",
            "old oak",
            "A broad old oak tree.",
            (23, 18),
        ),
        furniture(
            "oak-tree-3",
            "old oak",
            "A broad old oak tree.",
            (18, 24),
        ),
        item(
            "leaflet-1",
            "meeting leaflet",
            "A leaflet announcing the next town meeting.",
            (5, 5),
        ),
        item(
            "leaflet-2",
            "meeting leaflet",
            "A leaflet announcing the next town meeting.",
            (19, 7),
        ),
        item(
            "sapling",
            "oak sapling",
            "A potted oak sapling waiting to be planted.",
            (20, 22),
        ),
    ]
    return map_doc(W, H, cells, regions, objects)


def study2_doc() -> dict:
    common = {
        "short_term_goal": "Find out what the town is talking about today.",
        "self_awareness": (
            "You are {name}, {age_band}, {gender}, {education} education, "
            "working as {occupation}. You live in this town. {stance}"
        ),
    }
    groups = [
        {
            "name": "Economic",
            "size": 10,
            "stance": "You believe the town thrives when business thrives.",
            "long_term_goal": "See the town prosper through new trade and jobs.",
            "spawn_region": "Market Square",
            "exact_counts": {
                "gender": {"Male": 4, "Female": 6},
                "age_band": {"18-29": 3, "30-49": 2, "50+": 5},
                "education": {
                    "High school": 3,
                    "Some college": 4,
                    "Bachelor's": 1,
                    "Graduate": 2,
                },
            },
            "occupations": [
                "shopkeeper",
                "builder",
                "accountant",
                "innkeeper",
                "trader",
            ],
            **common,
        },
        {
            "name": "Environmental",
            "size": 10,
            "stance": "You believe the town thrives when its land is cared for.",
            "long_term_goal": "Protect the town's green spaces for the next generation.",
            "spawn_region": "Park",
            "exact_counts": {
                "gender": {"Male": 4, "Female": 6},
                "age_band": {"18-29": 2, "30-49": 6, "50+": 2},
                "education": {
                    "High school": 4,
                    "Some college": 4,
                    "Bachelor's": 2,
                    "Graduate": 0,
                },
            },
            "occupations": [
                "gardener",
                "teacher",
                "park keeper",
                "beekeeper",
                "carpenter",
            ],
            **common,
        },
        {
            "name": "Neutral",
            "size": 10,
            "stance": "You keep an open mind about the town's future.",
            "long_term_goal": "Keep the town running smoothly day to day.",
            "spawn_region": "High Street",
            "exact_counts": {
                "gender": {"Male": 6, "Female": 4},
                "age_band": {"18-29": 2, "30-49": 7, "50+": 1},
                "education": {
                    "High school": 1,
                    "Some college": 3,
                    "Bachelor's": 5,
                    "Graduate": 1,
                },
            },
            "occupations": [
                "postal worker",
                "nurse",
                "mechanic",
                "librarian",
                "cook",
            ],
            **common,
        },
    ]
    return {
        "name": "Town Stances",
        "description": (
            "Thirty residents in three stance groups share a town; a new "
            "resident arrives partway through."
        ),
        "config": {"seed": 0},
        "map": study2_map(),
        "population": {
            "groups": groups,
            "relationships": [
                {"from": "Economic", "to": "Environmental", "attitude": "negative"},
                {"from": "Environmental", "to": "Economic", "attitude": "negative"},
                {"from": "Neutral", "to": "Economic", "attitude": "neutral"},
                {"from": "Neutral", "to": "Environmental", "attitude": "neutral"},
                {"from": "Economic", "to": "Riley Morgan", "attitude": "neutral"},
                {"from": "Environmental", "to": "Riley Morgan", "attitude": "neutral"},
                {"from": "Neutral", "to": "Riley Morgan", "attitude": "neutral"},
            ],
        },
        "humans": [],
        "arrivals": [
            {
                "round": 10,
                "agent": {
                    "name": "Riley Morgan",
                    "group": "Newcomers",
                    "gender": "Female",
                    "age_band": "30-49",
                    "education": "Bachelor's",
                    "occupation": "surveyor",
                    "long_term_goal": "Settle into the town and understand its people.",
                    "short_term_goal": "Introduce yourself to whoever is nearby.",
                    "spawn_region": "High Street",
                },
            }
        ],
        "events": [
            {
                "id": "evt-town-meeting",
                "activation": {"kind": "scheduled", "round": 5},
                "range_all": True,
                "intervention": {
                    "selector": {"scope": "agents"},
                    "goal": "Head to the Town Hall for the open meeting.",
                },
            },
            {
                "id": "evt-market-day",
                "activation": {"kind": "scheduled", "round": 15},
                "range_all": True,
                "intervention": {
                    "selector": {"scope": "agents"},
                    "goal": "Visit the Market Square while the stalls are busy.",
                },
            },
        ],
        "questionnaire": [
            {
                "id": "trust",
                "prompt": "From 1 to 7, how much do you trust {target}?",
                "low": 1,
                "high": 7,
            }
        ],
    }


# --------------------------------------------------------------------------
# study 3: café with an embedded human temp worker
# --------------------------------------------------------------------------


def study3_map() -> dict:
    W, H = 26, 16
    cells = base_cells(W, H, ground="floorboards")

    regions = [
        {
            "name": "Bar Area",
            "description": "The counter, the machines behind it, and the stools in front.",
            "cells": rect_cells(3, 3, 10, 3)
            + rect_cells(3, 5, 10, 5)
            + rect_cells(3, 6, 10, 6),
        },
        {
            "name": "Main Floor",
            "description": "Tables in the middle of the room.",
            "cells": rect_cells(12, 6, 19, 12),
        },
        {
            "name": "Reading Area",
            "description": "Armchairs and shelves in the quiet corner.",
            "cells": rect_cells(21, 2, 24, 8),
        },
        {
            "name": "Entrance",
            "description": "The doorway and coat hooks.",
            "cells": rect_cells(12, 13, 14, 14),
        },
    ]

    counter_segments = [
        furniture(
            f"counter-{i + 1}",
            "service counter",
            "The polished service counter.",
            (4 + i, 4),
        )
        for i in range(6)
    ]
    stools = [
        furniture(
            f"stool-{i + 1}",
            "bar stool",
            "A tall stool at the counter.",
            (4 + i, 5),
            [add_state("rested")],
        )
        for i in range(6)
    ]
    tables_and_chairs = [
        furniture("table-1", "café table", "A small round table.", (14, 7)),
        furniture(
            "chair-1", "café chair", "A bentwood chair.", (13, 7), [add_state("rested")]
        ),
        furniture(
            "chair-2", "café chair", "A bentwood chair.", (15, 7), [add_state("rested")]
        ),
        furniture("table-2", "café table", "A small round table.", (17, 10)),
        furniture(
            "chair-3", "café chair", "A bentwood chair.", (16, 10), [add_state("rested")]
        ),
        furniture(
            "chair-4", "café chair", "A bentwood chair.", (18, 10), [add_state("rested")]
        ),
        furniture("table-3", "café table", "A small round table.", (14, 11)),
        furniture(
            "chair-5", "café chair", "A bentwood chair.", (13, 11), [add_state("rested")]
        ),
        furniture(
            "chair-6", "café chair", "A bentwood chair.", (15, 11), [add_state("rested")]
        ),
    ]
    reading = [
        furniture(
            "bookshelf-1",
            "bookshelf",
            "Shelves of well-thumbed paperbacks.",
            (24, 2),
            [add_state("curious")],
        ),
        furniture(
            "bookshelf-2",
            "bookshelf",
            "Shelves of well-thumbed paperbacks.",
            (24, 3),
            [add_state("curious")],
        ),
        furniture(
            "armchair-1",
            "reading armchair",
            "A deep, comfortable armchair.",
            (22, 3),
            [add_state("rested")],
        ),
        furniture(
            "armchair-2",
            "reading armchair",
            "A deep, comfortable armchair.",
            (22, 6),
            [add_state("rested")],
        ),
        furniture(
            "side-table",
            "side table",
            "A low table between the armchairs.",
            (23, 5),
        ),
    ]
    bar_back = [
        furniture(
            "espresso-machine",
            "espresso machine",
            "The espresso machine hisses and steams when it brews.",
            (4, 3),
            [add_state("energized")],
        ),
        furniture(
            "pastry-case",
            "pastry case",
            "A glass case of croissants and tarts.",
            (6, 3),
            [add_state("treated")],
        ),
        furniture(
            "sink",
            "bar sink",
            "A deep steel sink behind the counter.",
            (8, 3),
        ),
    ]
    items = [
        item("coffee-cup-1", "coffee cup", "A clean white coffee cup.", (10, 4)),
        item("coffee-cup-2", "coffee cup", "A clean white coffee cup.", (3, 6)),
        item("mop", "mop", "A mop leaning in the corner.", (1, 13)),
        item(
            "newspaper",
            "newspaper",
            "Today's paper, slightly rumpled.",
            (23, 6),
        ),
        item("paperback", "paperback novel", "A paperback with a cracked spine.", (23, 4)),
    ]
    objects = counter_segments + stools + tables_and_chairs + reading + bar_back + items
    return map_doc(W, H, cells, regions, objects)


def study3_doc() -> dict:
    return {
        "name": "Corner Café",
        "description": (
            "A café staffed by its owner and crew, with regulars, students, "
            "tourists, a cleaner, and one temporary worker controlled from "
            "the console."
        ),
        "config": {"seed": 0},
        "map": study3_map(),
        "population": {
            "groups": [
                {
                    "name": "Owner",
                    "size": 1,
                    "names": ["Eleanor Finch"],
                    "roles": ["owner"],
                    "stance": "You own this café and its mood is your responsibility.",
                    "long_term_goal": "Keep the café warm, busy, and worth coming back to.",
                    "short_term_goal": "Open up and check on the counter.",
                    "spawn_region": "Bar Area",
                    "occupations": ["café owner"],
                    "distributions": {
                        "gender": {"Female": 1.0},
                        "age_band": {"50+": 1.0},
                        "education": {"Bachelor's": 1.0},
                    },
                },
                {
                    "name": "Staff",
                    "size": 2,
                    "names": ["Marcus Bell", "Priya Nair"],
                    "roles": ["barista", "server"],
                    "stance": "You work the counter and the floor.",
                    "long_term_goal": "Do the job well and keep the regulars happy.",
                    "short_term_goal": "Get the counter ready for the morning.",
                    "spawn_region": "Bar Area",
                    "occupations": ["barista", "server"],
                    "distributions": {
                        "gender": {"Male": 0.5, "Female": 0.5},
                        "age_band": {"18-29": 0.5, "30-49": 0.5},
                        "education": {"Some college": 1.0},
                    },
                },
                {
                    "name": "Regulars",
                    "size": 2,
                    "names": ["Ava Ramires", "Leo Zhang"],
                    "stance": "You have your usual seat and your usual order.",
                    "long_term_goal": "Keep this café a steady part of your week.",
                    "short_term_goal": "Settle in with your usual order.",
                    "spawn_region": "Main Floor",
                    "occupations": ["bookkeeper", "pharmacist"],
                    "distributions": {
                        "gender": {"Female": 0.5, "Male": 0.5},
                        "age_band": {"30-49": 1.0},
                        "education": {"Bachelor's": 1.0},
                    },
                },
                {
                    "name": "Students",
                    "size": 2,
                    "names": ["Noor Haddad", "Tom Okafor"],
                    "stance": "You come here to study where it is not too quiet.",
                    "long_term_goal": "Pass the term without burning out.",
                    "short_term_goal": "Find a seat with room to spread out notes.",
                    "spawn_region": "Reading Area",
                    "occupations": ["student", "student"],
                    "distributions": {
                        "gender": {"Female": 0.5, "Male": 0.5},
                        "age_band": {"18-29": 1.0},
                        "education": {"Some college": 1.0},
                    },
                },
                {
                    "name": "Tourists",
                    "size": 2,
                    "names": ["Ingrid Solberg", "Mateo Vega"],
                    "stance": "You are passing through town and found this place by chance.",
                    "long_term_goal": "See the town and remember it fondly.",
                    "short_term_goal": "Try whatever the café is known for.",
                    "spawn_region": "Entrance",
                    "occupations": ["photographer", "engineer"],
                    "distributions": {
                        "gender": {"Female": 0.5, "Male": 0.5},
                        "age_band": {"30-49": 1.0},
                        "education": {"Bachelor's": 1.0},
                    },
                },
                {
                    "name": "Cleaner",
                    "size": 1,
                    "names": ["Sam Whitaker"],
                    "roles": ["cleaner"],
                    "stance": "You keep the place presentable and notice everything.",
                    "long_term_goal": "Keep the café spotless without getting underfoot.",
                    "short_term_goal": "Check the floor and the corners.",
                    "spawn_region": "Entrance",
                    "occupations": ["cleaner"],
                    "distributions": {
                        "gender": {"Male": 1.0},
                        "age_band": {"50+": 1.0},
                        "education": {"High school": 1.0},
                    },
                },
            ],
            "relationships": [
                {"from": "Owner", "to": "Staff", "attitude": "positive"},
                {"from": "Staff", "to": "Owner", "attitude": "positive"},
                {"from": "Owner", "to": "Regulars", "attitude": "positive"},
                {"from": "Regulars", "to": "Owner", "attitude": "positive"},
                {"from": "Regulars", "to": "Staff", "attitude": "positive"},
                {"from": "Students", "to": "Regulars", "attitude": "neutral"},
                {"from": "Tourists", "to": "Owner", "attitude": "neutral"},
                {"from": "Cleaner", "to": "Staff", "attitude": "neutral"},
                {"from": "Staff", "to": "Taylor Reeves", "attitude": "neutral"},
                {"from": "Owner", "to": "Taylor Reeves", "attitude": "neutral"},
            ],
        },
        "humans": [
            {
                "id": "temp-worker",
                "name": "Taylor Reeves",
                "group": "Staff",
                "gender": "",
                "age_band": "18-29",
                "education": "Some college",
                "occupation": "temporary barista",
                "stance": "You started here this week and are still learning the ropes.",
                "self_awareness": (
                    "You are {name}, a temporary barista who started this week. "
                    "{stance}"
                ),
                "long_term_goal": "Turn this temporary job into a steady one.",
                "short_term_goal": "Learn where everything is kept.",
                "spawn_region": "Bar Area",
                "human": True,
            }
        ],
        "events": [
            {
                "id": "evt-disruption",
                "activation": {"kind": "scheduled", "round": 51},
                "range_all": True,
                "effects": [
                    {
                        "selector": {"scope": "objects", "ids": ["espresso-machine"]},
                        "effect": {"verb": "add", "label": "broken", "target": "object"},
                    }
                ],
                "intervention": {
                    "selector": {"scope": "agents", "group": "Staff"},
                    "goal": "A loud crash at the bar needs handling right now.",
                },
            },
            {
                "id": "evt-smoke",
                "activation": {
                    "kind": "existence",
                    "object_kind": "furniture",
                    "state_label": "broken",
                    "description_contains": "espresso",
                },
                "range_all": True,
                "effects": [
                    {
                        "selector": {"scope": "objects", "ids": ["espresso-machine"]},
                        "effect": {"verb": "add", "label": "smoking", "target": "object"},
                    }
                ],
                "intervention": {
                    "selector": {"scope": "agents", "group": "Cleaner"},
                    "goal": "Unplug the smoking machine before it gets worse.",
                },
            },
            {
                "id": "evt-silence",
                "activation": {"kind": "scheduled", "round": 56},
                "range_all": True,
                "intervention": {
                    "selector": {"scope": "agents"},
                    "goal": "The room has gone quiet; take stock of the moment.",
                },
            },
            {
                "id": "evt-confrontation",
                "activation": {"kind": "scheduled", "round": 61},
                "range_all": True,
                "effects": [
                    {
                        "selector": {
                            "scope": "agents",
                            "ids": ["eleanor-finch", "leo-zhang"],
                        },
                        "effect": {"verb": "add", "label": "tense", "target": "actor"},
                    }
                ],
                "intervention": {
                    "selector": {
                        "scope": "agents",
                        "ids": ["eleanor-finch", "leo-zhang"],
                    },
                    "goal": "Address the argument at the counter directly.",
                },
            },
        ],
        "questionnaire": [
            {
                "id": "trust",
                "prompt": "On a scale of 1 to 7, how much do you trust {target}?",
                "low": 1,
                "high": 7,
            },
            {
                "id": "comfort",
                "prompt": "From 1 to 7, how comfortable do you feel in the café right now?",
                "low": 1,
                "high": 7,
            },
        ],
    }


# --------------------------------------------------------------------------
# build + verify
# --------------------------------------------------------------------------


def verify(name: str, doc: dict) -> None:
    scenario = load_scenario(doc)
    violations = validate_map(scenario.world)
    if violations:
        raise SystemExit(f"{name}: map violations: {violations}")
    sim, _pending = build_simulation(scenario, seed=0)
    if name == "study2_community":
        roster = sample_population(scenario.groups, [], seed=0)
        census = roster_census(roster)
        gender = {row["category"]: row for row in census["variables"]["gender"]}
        age = {row["category"]: row for row in census["variables"]["age_band"]}
        edu = {row["category"]: row for row in census["variables"]["education"]}
        assert census["total"] == 30, census["total"]
        assert gender["Male"]["per_group"] == [4, 4, 6], gender["Male"]
        assert age["50+"]["per_group"] == [5, 2, 1], age["50+"]
        assert edu["Graduate"]["per_group"] == [2, 0, 1], edu["Graduate"]
    print(f"  {name}: ok ({len(sim.agents)} agents, {len(scenario.events)} events)")


def main() -> None:
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    docs = {
        "study1_low_veg": study1_doc("low"),
        "study1_high_veg": study1_doc("high"),
        "study2_community": study2_doc(),
        "study3_cafe": study3_doc(),
    }
    for name, doc in docs.items():
        verify(name, doc)
        path = OUT_DIR / f"{name}.json"
        path.write_text(
            json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )
        print(f"  wrote {path}")


if __name__ == "__main__":
    main()
