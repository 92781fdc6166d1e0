"""Perception geometry against an exact-arithmetic ray oracle.

The oracle is independent of the engine's integer Bresenham walk: a
cell is touched by the sight ray when the closed unit square around its
center intersects the center-to-center segment, decided in exact
rational arithmetic (Liang-Barsky clipping over fractions.Fraction).
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from conftest import map_doc
from ethnosim.grid import line_of_sight, supercover_line, visible_cells
from ethnosim.world import load_map

HALF = Fraction(1, 2)


def segment_touches_cell(a, b, cell) -> bool:
    """Exact test: does the closed segment from center a to center b
    intersect the closed unit square centered on ``cell``?"""
    (x0, y0), (x1, y1) = a, b
    cx, cy = cell
    tmin, tmax = Fraction(0), Fraction(1)
    for delta, origin, center in ((x1 - x0, x0, cx), (y1 - y0, y0, cy)):
        lo, hi = center - HALF, center + HALF
        if delta == 0:
            if not (lo <= origin <= hi):
                return False
        else:
            t1 = Fraction(lo - origin, delta)
            t2 = Fraction(hi - origin, delta)
            if t1 > t2:
                t1, t2 = t2, t1
            tmin = max(tmin, t1)
            tmax = min(tmax, t2)
            if tmin > tmax:
                return False
    return True


def oracle_los(walls, a, b) -> bool:
    return not any(
        w != a and w != b and segment_touches_cell(a, b, w) for w in walls
    )


def oracle_visible(world, origin, radius) -> set:
    ox, oy = origin
    x0, x1 = max(0, ox - radius), min(world.width - 1, ox + radius)
    y0, y1 = max(0, oy - radius), min(world.height - 1, oy + radius)
    walls = world.wall_coords
    return {
        (x, y)
        for x in range(x0, x1 + 1)
        for y in range(y0, y1 + 1)
        if oracle_los(walls, origin, (x, y))
    }


def test_supercover_equals_exact_square_intersection():
    """The engine's integer supercover is exactly the set of cells whose
    closed square the segment touches — including corner crossings."""
    rng = np.random.default_rng(99)
    pairs = [((0, 0), (3, 1)), ((0, 0), (2, 2)), ((1, 4), (4, 1)), ((0, 0), (5, 0))]
    pairs += [
        (
            (int(rng.integers(-6, 7)), int(rng.integers(-6, 7))),
            (int(rng.integers(-6, 7)), int(rng.integers(-6, 7))),
        )
        for _ in range(120)
    ]
    for a, b in pairs:
        got = set(supercover_line(a, b))
        lo_x, hi_x = min(a[0], b[0]) - 1, max(a[0], b[0]) + 1
        lo_y, hi_y = min(a[1], b[1]) - 1, max(a[1], b[1]) + 1
        expect = {
            (x, y)
            for x in range(lo_x, hi_x + 1)
            for y in range(lo_y, hi_y + 1)
            if segment_touches_cell(a, b, (x, y))
        }
        assert got == expect, f"{a}->{b}: engine {sorted(got)} oracle {sorted(expect)}"


def test_line_of_sight_matches_oracle_on_random_wall_fields():
    rng = np.random.default_rng(4242)
    for _ in range(40):
        walls = {
            (int(x), int(y)) for x, y in rng.integers(0, 13, size=(8, 2))
        }
        for _ in range(30):
            a = (int(rng.integers(0, 13)), int(rng.integers(0, 13)))
            b = (int(rng.integers(0, 13)), int(rng.integers(0, 13)))
            assert line_of_sight(walls, a, b) == oracle_los(walls, a, b), (
                f"walls={sorted(walls)} a={a} b={b}"
            )


def test_visible_cells_single_wall_sample_matches_oracle():
    """Spot sweep of single-wall rooms (the full exhaustive sweep runs in
    the acceptance suite)."""
    origin = (6, 6)
    rng = np.random.default_rng(7)
    spots = {(int(x), int(y)) for x, y in rng.integers(0, 13, size=(25, 2))}
    spots.discard(origin)
    for wall in spots:
        world = load_map(map_doc(13, 13, walls={wall}))
        assert visible_cells(world, origin, 6) == oracle_visible(world, origin, 6)


def test_visible_cells_multi_wall_rooms_match_oracle():
    rng = np.random.default_rng(31)
    for _ in range(12):
        walls = {
            (int(x), int(y)) for x, y in rng.integers(0, 13, size=(10, 2))
        }
        walls.discard((6, 6))
        world = load_map(map_doc(13, 13, walls=walls))
        assert visible_cells(world, (6, 6), 6) == oracle_visible(world, (6, 6), 6)


def test_visibility_is_symmetric_between_free_cells():
    rng = np.random.default_rng(55)
    walls = {(int(x), int(y)) for x, y in rng.integers(0, 11, size=(14, 2))}
    world = load_map(map_doc(11, 11, walls=walls))
    free = [
        (x, y)
        for x in range(11)
        for y in range(11)
        if (x, y) not in walls
    ]
    for _ in range(200):
        a = free[int(rng.integers(0, len(free)))]
        b = free[int(rng.integers(0, len(free)))]
        assert (b in visible_cells(world, a, 10)) == (a in visible_cells(world, b, 10))
