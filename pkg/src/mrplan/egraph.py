"""Experience graphs: demonstrated full-body edges, their heuristic embedding,
and snap motions onto demonstrated states.

A demonstration file holds one waypoint per line as
"x y theta stance phase cost_to_next" (stance is STAND/CROUCH, the final
line's cost is 0, '#' starts a comment). Consecutive waypoints become edges.
An edge that exactly matches a legal full-body primitive is marked
executable; anything else is kept as a composite edge that participates in
the heuristic embedding only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .heuristics import DistanceField, cell_dijkstra
from .primitives import hd_successors
from .states import HDState, Kind, N_PHASE, N_THETA, Stance, Transition
from .world import CostTable, GoalSpec, WALL, World, hd_state_valid

INF = math.inf

Cell = Tuple[int, int]


class DemoFormatError(ValueError):
    """Raised when a demonstration file is malformed or invalid on the map."""


@dataclass(frozen=True)
class EGraphParams:
    eps_e: Fraction = Fraction(10)
    snap_cost_per_field: int = 1

    def __post_init__(self):
        object.__setattr__(self, "eps_e", Fraction(self.eps_e))
        if self.eps_e < 1:
            raise ValueError("eps_e must be >= 1")
        if self.snap_cost_per_field <= 0:
            raise ValueError("snap_cost_per_field must be positive")


@dataclass
class EGraph:
    """Demonstrated edges plus lookup indexes for snaps and the heuristic."""

    edges: List[Tuple[HDState, HDState, int, bool]] = field(default_factory=list)
    nodes_by_cell: Dict[Cell, List[HDState]] = field(default_factory=dict)
    nodes_by_partial: Dict[Tuple[int, int, Stance], List[HDState]] = field(default_factory=dict)

    def add_edge(self, a: HDState, b: HDState, cost: int, executable: bool):
        self.edges.append((a, b, cost, executable))
        for n in (a, b):
            bucket = self.nodes_by_cell.setdefault(n.cell, [])
            if n not in bucket:
                bucket.append(n)
            pbucket = self.nodes_by_partial.setdefault((n.x, n.y, n.stance), [])
            if n not in pbucket:
                pbucket.append(n)

    def __len__(self):
        return len(self.edges)


def _parse_waypoint(line: str, lineno: int) -> Tuple[HDState, int]:
    parts = line.split()
    if len(parts) != 6:
        raise DemoFormatError(f"line {lineno}: expected 6 fields, got {len(parts)}")
    try:
        x, y, theta = int(parts[0]), int(parts[1]), int(parts[2])
        stance = Stance[parts[3]]
        phase = int(parts[4])
        cost = int(parts[5])
    except (ValueError, KeyError) as e:
        raise DemoFormatError(f"line {lineno}: {e}") from e
    if not (0 <= theta < N_THETA and 0 <= phase < N_PHASE):
        raise DemoFormatError(f"line {lineno}: heading/phase out of range")
    return HDState(x, y, theta, stance, phase), cost


def load_demonstrations(world: World, costs: CostTable, texts: Sequence[str]) -> EGraph:
    """Build an experience graph from demonstration file contents."""
    eg = EGraph()
    for text in texts:
        waypoints: List[Tuple[HDState, int]] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            waypoints.append(_parse_waypoint(line, lineno))
        for idx, (wp, _) in enumerate(waypoints):
            if not hd_state_valid(world, wp):
                raise DemoFormatError(f"waypoint {idx}: invalid state {wp} on this map")
        for idx in range(len(waypoints) - 1):
            a, cost = waypoints[idx]
            b, _ = waypoints[idx + 1]
            if cost <= 0:
                raise DemoFormatError(f"waypoint {idx}: non-positive cost_to_next {cost}")
            executable = any(
                t.dst == b and t.cost == cost for t in hd_successors(world, costs, a)
            )
            if not executable:
                # Composite jump: keep it heuristic-only, but its cost must not
                # undercut the tracking anchor's per-cell lower bound.
                span = max(abs(a.x - b.x), abs(a.y - b.y))
                if cost < span * costs.min_in_place:
                    raise DemoFormatError(
                        f"waypoint {idx}: composite edge cost {cost} under the admissible floor"
                    )
            eg.add_edge(a, b, cost, executable)
        if waypoints and waypoints[-1][1] != 0:
            raise DemoFormatError("final waypoint must carry cost_to_next 0")
    return eg


def egraph_heuristic(
    world: World, eg: EGraph, goal: GoalSpec, params: EGraphParams, costs: CostTable
) -> DistanceField:
    """Experience-biased distance field from the goal cell.

    One Dijkstra over cells whose edges are (a) grid moves at eps_e * walk_step
    and (b) demonstrated edges collapsed to their cell pair at true cost.
    With an empty graph this is exactly eps_e times the walk-metric field.
    """
    extra: Dict[Cell, List[Tuple[Cell, object]]] = {}
    for a, b, cost, _ in eg.edges:
        if a.cell == b.cell:
            continue
        extra.setdefault(a.cell, []).append((b.cell, cost))
        extra.setdefault(b.cell, []).append((a.cell, cost))
    passable = {t for t in (".", "~", "%")}
    return cell_dijkstra(
        world,
        [goal.cell],
        params.eps_e * costs.walk_step,
        passable,
        diagonal=True,
        extra_edges=extra,
    )


def circular_distance(a: int, b: int, modulus: int) -> int:
    d = abs(a - b) % modulus
    return min(d, modulus - d)


def snap_cost(costs: CostTable, params: EGraphParams, s: HDState, n: HDState) -> int:
    """In-place adjustment price: rotations for heading, shifts for phase."""
    return params.snap_cost_per_field * (
        costs.rotate * circular_distance(s.theta, n.theta, N_THETA)
        + costs.weight_shift * circular_distance(s.phase, n.phase, N_PHASE)
    )


def snap_successors(
    eg: EGraph, costs: CostTable, params: EGraphParams, s: HDState
) -> List[Transition]:
    """Jumps onto demonstrated states sharing the cell and stance of s."""
    out: List[Transition] = []
    for n in eg.nodes_by_partial.get((s.x, s.y, s.stance), ()):
        if n.theta == s.theta and n.phase == s.phase:
            continue
        out.append(Transition(s, n, snap_cost(costs, params, s, n), Kind.SNAP))
    return out
