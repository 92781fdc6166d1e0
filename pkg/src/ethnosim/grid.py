"""Grid geometry: shortest paths and line of sight.

Movement is 4-connected. A ray between two cells passes through every
cell whose closed unit square the center-to-center segment touches
(supercover); a wall in any strictly-intermediate cell of that set
blocks sight. The supercover is symmetric, so visibility is too.
"""

from __future__ import annotations

from heapq import heappop, heappush

from .world import Coord, WorldMap

# Neighbor expansion order: N, E, S, W (y grows downward).
NESW = ((0, -1), (1, 0), (0, 1), (-1, 0))

UNREACHABLE = None


def compute_path(
    world: WorldMap,
    start: Coord,
    goal: Coord,
    blocked: frozenset[Coord] | set[Coord] = frozenset(),
) -> list[Coord] | None:
    """Shortest 4-connected path from start to goal, excluding start.

    ``blocked`` carries dynamic obstacles (furniture cells, other
    agents); walls come from the map. Returns None when unreachable,
    an empty list when start == goal. Ties break deterministically:
    neighbors expand in N, E, S, W order through a stable priority
    queue, so equal-length paths always resolve the same way.
    """
    if not world.in_bounds(start) or not world.in_bounds(goal):
        raise ValueError("path endpoints must be in bounds")
    if world.is_wall(start):
        raise ValueError(f"path start {start} is a wall")
    if start == goal:
        return []
    if world.is_wall(goal) or goal in blocked:
        return UNREACHABLE

    def h(c: Coord) -> int:
        return abs(c[0] - goal[0]) + abs(c[1] - goal[1])

    counter = 0
    open_heap: list[tuple[int, int, Coord]] = [(h(start), counter, start)]
    g: dict[Coord, int] = {start: 0}
    came: dict[Coord, Coord] = {}
    closed: set[Coord] = set()

    while open_heap:
        _, _, cur = heappop(open_heap)
        if cur == goal:
            path = [cur]
            while cur in came:
                cur = came[cur]
                path.append(cur)
            path.reverse()
            return path[1:]
        if cur in closed:
            continue
        closed.add(cur)
        cg = g[cur]
        for dx, dy in NESW:
            nxt = (cur[0] + dx, cur[1] + dy)
            if not world.in_bounds(nxt) or world.is_wall(nxt) or nxt in blocked:
                continue
            ng = cg + 1
            if ng < g.get(nxt, 1 << 30):
                g[nxt] = ng
                came[nxt] = cur
                counter += 1
                heappush(open_heap, (ng + h(nxt), counter, nxt))
    return UNREACHABLE


def supercover_line(a: Coord, b: Coord) -> list[Coord]:
    """All cells touched by the segment between the centers of a and b.

    Integer-exact variant of Bresenham: when the segment passes exactly
    through a cell corner, both side cells are included as well, which
    keeps the cover symmetric in its endpoints.
    """
    (x0, y0), (x1, y1) = a, b
    cells = [(x0, y0)]
    dx, dy = x1 - x0, y1 - y0
    xstep = 1 if dx > 0 else -1
    ystep = 1 if dy > 0 else -1
    dx, dy = abs(dx), abs(dy)
    ddx, ddy = 2 * dx, 2 * dy
    x, y = x0, y0
    if ddx >= ddy:
        errorprev = error = dx
        for _ in range(dx):
            x += xstep
            error += ddy
            if error > ddx:
                y += ystep
                error -= ddx
                if error + errorprev < ddx:
                    cells.append((x, y - ystep))
                elif error + errorprev > ddx:
                    cells.append((x - xstep, y))
                else:  # exactly through the corner
                    cells.append((x, y - ystep))
                    cells.append((x - xstep, y))
            cells.append((x, y))
            errorprev = error
    else:
        errorprev = error = dy
        for _ in range(dy):
            y += ystep
            error += ddx
            if error > ddy:
                x += xstep
                error -= ddy
                if error + errorprev < ddy:
                    cells.append((x - xstep, y))
                elif error + errorprev > ddy:
                    cells.append((x, y - ystep))
                else:
                    cells.append((x - xstep, y))
                    cells.append((x, y - ystep))
            cells.append((x, y))
            errorprev = error
    return cells


def line_of_sight(walls: frozenset[Coord] | set[Coord], a: Coord, b: Coord) -> bool:
    """True when no wall lies strictly between a and b along the ray.

    The endpoints themselves never block: a wall cell is visible, the
    cells behind it are not.
    """
    for cell in supercover_line(a, b):
        if cell != a and cell != b and cell in walls:
            return False
    return True


def chebyshev(a: Coord, b: Coord) -> int:
    return max(abs(a[0] - b[0]), abs(a[1] - b[1]))


def visible_cells(world: WorldMap, origin: Coord, radius: int) -> set[Coord]:
    """Cells within Chebyshev ``radius`` of origin with clear line of
    sight. Walls in view are themselves visible."""
    ox, oy = origin
    x0, x1 = max(0, ox - radius), min(world.width - 1, ox + radius)
    y0, y1 = max(0, oy - radius), min(world.height - 1, oy + radius)

    walls = world.wall_coords
    box_walls = {c for c in walls if x0 <= c[0] <= x1 and y0 <= c[1] <= y1}
    if not box_walls:
        return {(x, y) for x in range(x0, x1 + 1) for y in range(y0, y1 + 1)}

    out: set[Coord] = set()
    for y in range(y0, y1 + 1):
        for x in range(x0, x1 + 1):
            if line_of_sight(box_walls, origin, (x, y)):
                out.add((x, y))
    return out
