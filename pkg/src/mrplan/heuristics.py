"""Cell-level distance fields and the heuristic sets for both search phases."""
from __future__ import annotations

import heapq
import math
from typing import Callable, Dict, Iterable, Optional, Sequence, Set, Tuple

from .states import AnyState, Rep
from .world import (
    CARDINAL_THETAS,
    CROUCH_TERRAIN,
    CostTable,
    DIR8,
    STAND_TERRAIN,
    WALL,
    World,
)

INF = math.inf

Cell = Tuple[int, int]


class DistanceField:
    """Precomputed cell -> distance map; unknown cells read as infinity."""

    def __init__(self, dist: Dict[Cell, object]):
        self.dist = dist

    def __call__(self, s: AnyState):
        return self.dist.get((s.x, s.y), INF)

    def at(self, cell: Cell):
        return self.dist.get(cell, INF)


def cell_dijkstra(
    world: World,
    sources: Iterable[Cell],
    move_cost,
    passable: Set[str],
    diagonal: bool = True,
    cells: Optional[Set[Cell]] = None,
    extra_edges: Optional[Dict[Cell, Sequence[Tuple[Cell, object]]]] = None,
) -> DistanceField:
    """Dijkstra over grid cells with a uniform per-move cost.

    cells, when given, restricts the searchable area (tunnel restriction);
    extra_edges adds weighted cell-to-cell edges on top of the grid moves.
    """
    thetas = range(8) if diagonal else CARDINAL_THETAS

    def ok(c: Cell) -> bool:
        if cells is not None and c not in cells:
            return False
        return world.terrain(*c) in passable

    dist: Dict[Cell, object] = {}
    heap = []
    for c in sources:
        if ok(c):
            dist[c] = 0
            heapq.heappush(heap, (0, c))
    while heap:
        d, c = heapq.heappop(heap)
        if d > dist.get(c, INF):
            continue
        x, y = c
        for t in thetas:
            dx, dy = DIR8[t]
            n = (x + dx, y + dy)
            if not ok(n):
                continue
            nd = d + move_cost
            if nd < dist.get(n, INF):
                dist[n] = nd
                heapq.heappush(heap, (nd, n))
        if extra_edges:
            for n, w in extra_edges.get(c, ()):
                if not ok(n):
                    continue
                nd = d + w
                if nd < dist.get(n, INF):
                    dist[n] = nd
                    heapq.heappush(heap, (nd, n))
    return DistanceField(dist)


def anchor_field(world: World, costs: CostTable, goal_cell: Cell) -> DistanceField:
    """Admissible anchor for the hybrid graph: every cell move costs at least
    the cheapest step action, over every non-wall cell."""
    passable = {t for t in (".", "~", "%")}
    return cell_dijkstra(world, [goal_cell], costs.min_cell_move, passable, diagonal=True)


def walk_field(world: World, costs: CostTable, goal_cell: Cell) -> DistanceField:
    return cell_dijkstra(world, [goal_cell], costs.walk_step, set(STAND_TERRAIN), diagonal=True)


def crawl_field(world: World, costs: CostTable, goal_cell: Cell) -> DistanceField:
    return cell_dijkstra(world, [goal_cell], costs.crawl_step, set(CROUCH_TERRAIN), diagonal=False)


def phase1_heuristics(world: World, costs: CostTable, goal_cell: Cell):
    """Anchor + per-mode grid heuristics and their representation enablement.

    The walk heuristic serves the walk representation, the crawl heuristic the
    crawl representation; full-body states inside regions may draw on both.
    """
    h0 = anchor_field(world, costs, goal_cell)
    h1 = walk_field(world, costs, goal_cell)
    h2 = crawl_field(world, costs, goal_cell)
    heuristics = [h0, h1, h2]
    enable = {1: (Rep.WALK, Rep.HD), 2: (Rep.CRAWL, Rep.HD)}
    return heuristics, enable


def progress_table(pi_cells: Sequence[Cell], width: int) -> Dict[Cell, int]:
    """cell -> highest waypoint index whose cell is within Chebyshev width."""
    table: Dict[Cell, int] = {}
    for idx, (wx, wy) in enumerate(pi_cells):
        for dx in range(-width, width + 1):
            for dy in range(-width, width + 1):
                table[(wx + dx, wy + dy)] = idx
    return table


def make_progress_heuristic(pi_cells: Sequence[Cell], width: int, step_cost: int) -> Callable[[AnyState], int]:
    """Remaining-waypoints heuristic: steps left on the sketched path, priced
    at the walk step cost. Zero at (and near) the final waypoint."""
    table = progress_table(pi_cells, width)
    last = len(pi_cells) - 1

    def h(s: AnyState):
        idx = table.get((s.x, s.y))
        if idx is None:
            return INF
        return (last - idx) * step_cost

    return h
