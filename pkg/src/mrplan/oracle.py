"""Brute-force Dijkstra oracles used to certify search results.

These run over explicit successor enumerations and never share queue or
heuristic machinery with the planner, so they can certify its answers
independently. Intended for desk-scale maps only; the full-body product
space of a 16x16 map is the accepted upper bound.
"""
from __future__ import annotations

import heapq
import math
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from .adaptive_graph import AdaptiveGraph
from .primitives import HDGraph, LDGraph
from .projection import project
from .states import AnyState, HDState, LDState, LD_REPS, N_PHASE, N_THETA, Rep, Stance, state_key
from .world import CostTable, GoalSpec, World, hd_state_valid, is_goal, ld_state_valid

INF = math.inf

MAX_ORACLE_CELLS = 16 * 16


def all_hd_states(world: World) -> List[HDState]:
    out = []
    for x, y, _ in world.iter_cells():
        for stance in (Stance.STAND, Stance.CROUCH):
            for theta in range(N_THETA):
                for phase in range(N_PHASE):
                    s = HDState(x, y, theta, stance, phase)
                    if hd_state_valid(world, s):
                        out.append(s)
    return out


def all_ld_states(world: World, rep: Rep) -> List[LDState]:
    out = []
    for x, y, _ in world.iter_cells():
        if rep == Rep.WALK:
            for theta in range(N_THETA):
                s = LDState(Rep.WALK, x, y, theta)
                if ld_state_valid(world, s):
                    out.append(s)
        else:
            s = LDState(Rep.CRAWL, x, y)
            if ld_state_valid(world, s):
                out.append(s)
    return out


def dijkstra(
    successors: Callable[[AnyState], Iterable],
    starts: Iterable[AnyState],
    goal_test: Optional[Callable[[AnyState], bool]] = None,
) -> Tuple[Dict[AnyState, int], Optional[int]]:
    """Plain Dijkstra; returns the distance map and the best goal cost if a
    goal test was supplied (None when unreachable)."""
    dist: Dict[AnyState, int] = {}
    heap = []
    for s in sorted(set(starts), key=state_key):
        dist[s] = 0
        heapq.heappush(heap, (0, state_key(s), s))
    best_goal = None
    while heap:
        d, _, s = heapq.heappop(heap)
        if d > dist.get(s, INF):
            continue
        if goal_test is not None and goal_test(s):
            best_goal = d
            break
        for t in successors(s):
            nd = d + t.cost
            if nd < dist.get(t.dst, INF):
                dist[t.dst] = nd
                heapq.heappush(heap, (nd, state_key(t.dst), t.dst))
    return dist, best_goal


def refuse_oversize(world: World):
    if world.width * world.height > MAX_ORACLE_CELLS:
        raise ValueError(
            f"oracle refuses maps over {MAX_ORACLE_CELLS} cells "
            f"(got {world.width}x{world.height})"
        )


def hd_optimal_cost(world: World, costs: CostTable, start: HDState, goal: GoalSpec) -> Optional[int]:
    """Optimal full-body cost from start to any state at the goal cell."""
    refuse_oversize(world)
    graph = HDGraph(world, costs)
    _, best = dijkstra(graph.successors, [start], lambda s: is_goal(goal, s))
    return best


def ld_optimal_cost(world: World, costs: CostTable, start: LDState, goal: GoalSpec) -> Optional[int]:
    refuse_oversize(world)
    graph = LDGraph(world, costs, start.rep)
    _, best = dijkstra(graph.successors, [start], lambda s: is_goal(goal, s))
    return best


def adaptive_distances(world: World, costs: CostTable, starts: Iterable[AnyState]) -> Dict[AnyState, int]:
    """Distance map over the region-free hybrid graph from a start set."""
    graph = AdaptiveGraph(world, costs)
    dist, _ = dijkstra(graph.successors, starts)
    return dist


def projection_set(world: World, s: HDState) -> List[LDState]:
    out = []
    for rep in LD_REPS:
        l = project(rep, s)
        if ld_state_valid(world, l):
            out.append(l)
    return out
