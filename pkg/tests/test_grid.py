"""Pathfinding against an independent breadth-first-search oracle, and
supercover/line-of-sight geometry."""

from __future__ import annotations

from collections import deque

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import map_doc
from ethnosim.grid import (
    chebyshev,
    compute_path,
    line_of_sight,
    supercover_line,
    visible_cells,
)
from ethnosim.world import load_map


def bfs_distance(world, start, goal, blocked=frozenset()):
    """Independent shortest-path oracle: plain BFS over the 4-connected
    grid, no heuristic, no shared code with compute_path."""
    if start == goal:
        return 0
    if world.is_wall(goal) or goal in blocked:
        return None
    seen = {start}
    queue = deque([(start, 0)])
    while queue:
        (x, y), dist = queue.popleft()
        for nxt in ((x, y - 1), (x + 1, y), (x, y + 1), (x - 1, y)):
            if nxt in seen or not world.in_bounds(nxt):
                continue
            if world.is_wall(nxt) or nxt in blocked:
                continue
            if nxt == goal:
                return dist + 1
            seen.add(nxt)
            queue.append((nxt, dist + 1))
    return None


def random_world(rng, width=20, height=20, wall_p=0.25):
    walls = {
        (x, y)
        for y in range(height)
        for x in range(width)
        if rng.random() < wall_p
    }
    return load_map(map_doc(width, height, walls=walls))


def free_cells(world):
    return [
        (x, y)
        for y in range(world.height)
        for x in range(world.width)
        if not world.is_wall((x, y))
    ]


def test_trivial_paths():
    world = load_map(map_doc(5, 5))
    assert compute_path(world, (2, 2), (2, 2)) == []
    path = compute_path(world, (1, 1), (3, 1))
    assert path == [(2, 1), (3, 1)]


def test_unreachable_returns_none():
    world = load_map(map_doc(5, 5, walls={(2, 0), (2, 1), (2, 2), (2, 3), (2, 4)}))
    assert compute_path(world, (0, 0), (4, 4)) is None


def test_path_respects_dynamic_blockers():
    world = load_map(map_doc(5, 1))
    direct = compute_path(world, (0, 0), (4, 0))
    assert len(direct) == 4
    assert compute_path(world, (0, 0), (4, 0), blocked={(2, 0)}) is None


def test_path_is_contiguous_and_avoids_walls():
    rng = np.random.default_rng(3)
    world = random_world(rng)
    cells = free_cells(world)
    for _ in range(50):
        start, goal = (tuple(cells[i]) for i in rng.choice(len(cells), 2))
        path = compute_path(world, start, goal)
        if path is None:
            continue
        prev = start
        for cell in path:
            assert abs(cell[0] - prev[0]) + abs(cell[1] - prev[1]) == 1
            assert not world.is_wall(cell)
            prev = cell
        if path:
            assert path[-1] == goal


def test_path_lengths_match_bfs_oracle_on_random_maps():
    rng = np.random.default_rng(12345)
    for _ in range(60):
        world = random_world(rng)
        cells = free_cells(world)
        if len(cells) < 2:
            continue
        for _ in range(8):
            start, goal = (tuple(cells[i]) for i in rng.choice(len(cells), 2))
            path = compute_path(world, start, goal)
            expect = bfs_distance(world, start, goal)
            got = None if path is None else len(path)
            if start == goal:
                got = 0
            assert got == expect, f"{start}->{goal}: engine {got}, oracle {expect}"


def test_deterministic_tie_breaking():
    world = load_map(map_doc(6, 6))
    paths = {tuple(compute_path(world, (0, 0), (3, 3))) for _ in range(10)}
    assert len(paths) == 1


def test_endpoint_validation():
    world = load_map(map_doc(4, 4, walls={(1, 1)}))
    with pytest.raises(ValueError):
        compute_path(world, (9, 9), (0, 0))
    with pytest.raises(ValueError):
        compute_path(world, (1, 1), (0, 0))


# ----- supercover / line of sight --------------------------------------


@given(
    st.tuples(st.integers(-12, 12), st.integers(-12, 12)),
    st.tuples(st.integers(-12, 12), st.integers(-12, 12)),
)
@settings(max_examples=200, deadline=None)
def test_supercover_symmetric_and_covers_endpoints(a, b):
    fwd = set(supercover_line(a, b))
    rev = set(supercover_line(b, a))
    assert fwd == rev
    assert a in fwd and b in fwd
    assert len(fwd) >= chebyshev(a, b) + 1


def test_line_of_sight_endpoints_never_block():
    walls = {(0, 0), (4, 0)}
    assert line_of_sight(walls, (0, 0), (4, 0))
    assert not line_of_sight(walls | {(2, 0)}, (0, 0), (4, 0))


def test_line_of_sight_symmetry_random():
    rng = np.random.default_rng(8)
    for _ in range(300):
        walls = {
            (int(x), int(y))
            for x, y in rng.integers(0, 10, size=(12, 2))
        }
        a = (int(rng.integers(0, 10)), int(rng.integers(0, 10)))
        b = (int(rng.integers(0, 10)), int(rng.integers(0, 10)))
        assert line_of_sight(walls, a, b) == line_of_sight(walls, b, a)


def test_visible_cells_open_field_is_clipped_square():
    world = load_map(map_doc(30, 30))
    vis = visible_cells(world, (15, 15), 10)
    assert vis == {(x, y) for x in range(5, 26) for y in range(5, 26)}
    corner = visible_cells(world, (0, 0), 10)
    assert corner == {(x, y) for x in range(0, 11) for y in range(0, 11)}


def test_visible_cells_wall_shadows_cells_behind_it():
    world = load_map(map_doc(21, 21, walls={(12, 10)}))
    vis = visible_cells(world, (10, 10), 10)
    assert (12, 10) in vis  # the wall itself is visible
    assert (13, 10) not in vis and (14, 10) not in vis  # cells straight behind
    assert (12, 11) in vis  # off-axis neighbors unaffected
