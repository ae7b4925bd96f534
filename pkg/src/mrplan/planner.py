"""The iterative adaptive-dimensionality loop.

Each iteration sketches a hybrid path over the adaptive graph, builds a
tunnel of cells around it, and then tracks a fully executable full-body path
inside that tunnel. The tracking graph offers controller macros everywhere
but raw full-body primitives only where a region admits them, so tracking
fails deterministically wherever the sketch leaned on non-executable mode
actions; the failure location seeds a new region and the loop repeats.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .adaptive_graph import AdaptiveGraph
from .egraph import EGraph, EGraphParams, circular_distance, egraph_heuristic, snap_cost, snap_successors
from .heuristics import cell_dijkstra, make_progress_heuristic, phase1_heuristics
from .primitives import executable_macro_successors, hd_successors
from .projection import project
from .search import (
    HeuristicLists,
    Path,
    SearchParams,
    SearchResult,
    Status,
    init_heuristic_lists,
    plan,
)
from .states import (
    AnyState,
    Controller,
    HDRegion,
    HDState,
    Kind,
    LDState,
    LD_REPS,
    N_PHASE,
    N_THETA,
    Rep,
    Stance,
    Transition,
    state_key,
    transition_key,
)
from .world import CostTable, GoalSpec, World, hd_state_valid, is_goal, ld_state_valid

INF = math.inf

Cell = Tuple[int, int]


@dataclass(frozen=True)
class Tunnel:
    """Cells within Chebyshev distance `width` of the sketched path's cells."""

    pi_cells: Tuple[Cell, ...]
    width: int
    cells: frozenset

    def contains_cell(self, cell: Cell) -> bool:
        return cell in self.cells

    def contains(self, s: AnyState) -> bool:
        return (s.x, s.y) in self.cells


def path_cells(pi_ad: Path) -> List[Cell]:
    """Waypoint cells of a hybrid path; full-body waypoints contribute their
    projected cell, and consecutive duplicates (rep switches) collapse."""
    cells: List[Cell] = []
    for s in pi_ad.states:
        c = (s.x, s.y)
        if not cells or cells[-1] != c:
            cells.append(c)
    return cells


def build_tunnel(world: World, pi_ad: Path, width: int) -> Tunnel:
    cells = set()
    pc = tuple(path_cells(pi_ad))
    for (x, y) in pc:
        for dx in range(-width, width + 1):
            for dy in range(-width, width + 1):
                if world.in_bounds(x + dx, y + dy):
                    cells.add((x + dx, y + dy))
    return Tunnel(pc, width, frozenset(cells))


@dataclass(frozen=True)
class TunnelGraph:
    """Tracking search space inside the tunnel.

    Controller-deliverable motion is available everywhere: mode macros,
    stance changes (the full-body realization of a mode switch), and snaps
    onto demonstrated states. Raw full-body primitives are admitted only
    where a region covers at least one endpoint, so a sketch that leaned on
    non-executable mode actions cannot be tracked until a region arrives.
    """

    world: World
    costs: CostTable
    tunnel: Tunnel
    graph: AdaptiveGraph
    egraph: Optional[EGraph] = None
    egraph_params: Optional[EGraphParams] = None

    def successors(self, s: HDState) -> List[Transition]:
        if not self.tunnel.contains(s):
            raise ValueError(f"tracking expanded a state outside the tunnel: {s}")
        out: List[Transition] = []
        for t in executable_macro_successors(self.world, self.costs, s):
            if self.tunnel.contains(t.dst):
                out.append(t)
        in_region = self.graph.in_hd_region(s.x, s.y)
        for t in hd_successors(self.world, self.costs, s):
            if not self.tunnel.contains(t.dst):
                continue
            if t.dst.stance != s.stance:
                out.append(t)  # stance change: executable mode hand-off
            elif in_region or self.graph.in_hd_region(t.dst.x, t.dst.y):
                out.append(t)
        if self.egraph is not None:
            for t in snap_successors(self.egraph, self.costs, self.egraph_params, s):
                out.append(t)
        return sorted(set(out), key=transition_key)


@dataclass(frozen=True)
class AdaptivePlanParams:
    w1_plan: Fraction = Fraction(2)
    w2_plan: Fraction = Fraction(2)
    w1_track: Fraction = Fraction(2)
    w2_track: Fraction = Fraction(2)
    tunnel_width: int = 1
    region_radius: int = 2
    max_iterations: int = 10
    budget_plan: int = 500_000
    budget_track: int = 500_000
    time_limit_plan_s: Optional[float] = None
    time_limit_track_s: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "w1_plan", Fraction(self.w1_plan))
        object.__setattr__(self, "w2_plan", Fraction(self.w2_plan))
        object.__setattr__(self, "w1_track", Fraction(self.w1_track))
        object.__setattr__(self, "w2_track", Fraction(self.w2_track))
        if self.tunnel_width < 0 or self.region_radius < 0:
            raise ValueError("tunnel width and region radius must be >= 0")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


class Outcome:
    EXECUTABLE = "EXECUTABLE"
    NO_PATH = "NO_PATH"
    ITERATION_LIMIT = "ITERATION_LIMIT"


@dataclass
class IterationRecord:
    index: int
    plan_status: str
    plan_expansions: int
    plan_cost: Optional[int] = None
    pi_cells: List[Cell] = field(default_factory=list)
    track_status: Optional[str] = None
    track_expansions: int = 0
    region_added: Optional[HDRegion] = None
    plan_time_s: float = 0.0
    track_time_s: float = 0.0


@dataclass
class AdaptiveResult:
    outcome: str
    path: Optional[Path]
    records: List[IterationRecord]
    regions: Tuple[HDRegion, ...]
    tunnel: Optional[Tunnel] = None

    @property
    def cost(self) -> Optional[int]:
        return self.path.cost if self.path is not None else None


def start_image(graph: AdaptiveGraph, start: HDState) -> List[AnyState]:
    """Image of the full-body start in the hybrid space, per the membership rule."""
    if graph.in_hd_region(start.x, start.y):
        return [start]
    image: List[AnyState] = []
    for rep in LD_REPS:
        l = project(rep, start)
        if ld_state_valid(graph.world, l):
            image.append(l)
    return sorted(image, key=state_key)


def plan_phase1(
    graph: AdaptiveGraph, start: HDState, goal: GoalSpec, params: AdaptivePlanParams, debug: bool = False
) -> SearchResult:
    heuristics, enable = phase1_heuristics(graph.world, graph.costs, goal.cell)
    lists = init_heuristic_lists((Rep.HD, Rep.WALK, Rep.CRAWL), enable)
    sp = SearchParams(
        w1=params.w1_plan,
        w2=params.w2_plan,
        expansion_budget=params.budget_plan,
        wall_clock_s=params.time_limit_plan_s,
    )
    starts = start_image(graph, start)
    return plan(graph, starts, lambda s: is_goal(goal, s), heuristics, lists, sp, debug=debug)


def tracking_heuristics(
    world: World,
    costs: CostTable,
    tunnel: Tunnel,
    goal: GoalSpec,
    egraph: Optional[EGraph],
    egraph_params: Optional[EGraphParams],
):
    """Anchor + inadmissible heuristics for the full-body tracking search."""
    passable = {t for t in (".", "~", "%")}
    h0 = cell_dijkstra(
        world, [goal.cell], costs.min_in_place, passable, diagonal=True, cells=set(tunnel.cells)
    )
    h1 = cell_dijkstra(
        world, [goal.cell], costs.walk_step, passable, diagonal=True, cells=set(tunnel.cells)
    )
    h2 = make_progress_heuristic(tunnel.pi_cells, tunnel.width, costs.walk_step)
    heuristics = [h0, h1, h2]
    enable = {1: (Rep.HD,), 2: (Rep.HD,)}
    if egraph is not None:
        heuristics.append(egraph_heuristic(world, egraph, goal, egraph_params, costs))
        enable[3] = (Rep.HD,)
    return heuristics, enable


def track(
    world: World,
    costs: CostTable,
    tunnel: Tunnel,
    graph: AdaptiveGraph,
    start: HDState,
    goal: GoalSpec,
    params: AdaptivePlanParams,
    egraph: Optional[EGraph] = None,
    egraph_params: Optional[EGraphParams] = None,
    budget: Optional[int] = None,
    debug: bool = False,
) -> SearchResult:
    """Full-body tracking search inside the tunnel (single-representation)."""
    if not tunnel.contains(start):
        raise ValueError(f"tracking start {start} lies outside the tunnel")
    tg = TunnelGraph(world, costs, tunnel, graph, egraph, egraph_params)
    heuristics, enable = tracking_heuristics(world, costs, tunnel, goal, egraph, egraph_params)
    lists = init_heuristic_lists((Rep.HD,), enable)
    sp = SearchParams(
        w1=params.w1_track,
        w2=params.w2_track,
        expansion_budget=budget if budget is not None else params.budget_track,
        wall_clock_s=params.time_limit_track_s,
    )
    return plan(tg, start, lambda s: is_goal(goal, s), heuristics, lists, sp, debug=debug)


def tunnel_progress(tunnel: Tunnel, cell: Cell) -> int:
    """Highest waypoint index within tunnel width of the cell (-1 if none)."""
    best = -1
    x, y = cell
    for idx, (wx, wy) in enumerate(tunnel.pi_cells):
        if max(abs(x - wx), abs(y - wy)) <= tunnel.width:
            best = idx
    return best


def select_region(result: SearchResult, tunnel: Tunnel, params: AdaptivePlanParams) -> HDRegion:
    """Place the next region where tracking got stuck.

    Budget stops: the frontier state of maximal progress along the sketch
    (ties to the lowest anchor key) gives the center. Exhaustion leaves no
    frontier; fall back to the sketch cell at the farthest progress any
    expanded state achieved.
    """
    if result.best_frontier:
        best = None
        for s, key in result.best_frontier:
            prog = tunnel_progress(tunnel, (s.x, s.y))
            cand = (-prog, key, state_key(s))
            if best is None or cand < best[0]:
                best = (cand, s)
        center = (best[1].x, best[1].y)
    else:
        prog = 0
        for s in result.closed_g:
            prog = max(prog, tunnel_progress(tunnel, (s.x, s.y)))
        center = tunnel.pi_cells[prog]
    return HDRegion(center[0], center[1], params.region_radius)


@dataclass
class Violation:
    index: int
    reason: str


def validate_path(
    world: World,
    costs: CostTable,
    path: Path,
    start: Optional[HDState] = None,
    goal: Optional[GoalSpec] = None,
) -> Optional[Violation]:
    """Check that a path is executable: every step is a legal full-body
    primitive, controller macro, or snap-form adjustment with matching cost.
    Returns None when the path is valid."""
    if start is not None and path.start != start:
        return Violation(-1, f"path starts at {path.start}, expected {start}")
    cur = path.start
    if not isinstance(cur, HDState) or not hd_state_valid(world, cur):
        return Violation(-1, f"path start {cur} is not a valid full-body state")
    for i, t in enumerate(path.steps):
        if t.src != cur:
            return Violation(i, f"step {i} source {t.src} does not chain from {cur}")
        if t.kind == Kind.HD_PRIMITIVE:
            legal = any(
                u.dst == t.dst and u.cost == t.cost for u in hd_successors(world, costs, cur)
            )
            if not legal:
                return Violation(i, f"step {i} is not a legal full-body primitive: {t}")
        elif t.kind == Kind.HD_MACRO:
            legal = any(
                u.dst == t.dst and u.cost == t.cost and u.ctrl == t.ctrl
                for u in executable_macro_successors(world, costs, cur)
            )
            if not legal:
                return Violation(i, f"step {i} is not an executable controller macro: {t}")
        elif t.kind == Kind.SNAP:
            d = t.dst
            if not isinstance(d, HDState) or (d.x, d.y, d.stance) != (cur.x, cur.y, cur.stance):
                return Violation(i, f"step {i} snap must stay on the cell and stance: {t}")
            if d.theta == cur.theta and d.phase == cur.phase:
                return Violation(i, f"step {i} snap to an identical state: {t}")
            want = costs.rotate * circular_distance(cur.theta, d.theta, N_THETA) + (
                costs.weight_shift * circular_distance(cur.phase, d.phase, N_PHASE)
            )
            if t.cost != want:
                return Violation(i, f"step {i} snap cost {t.cost} != adjustment cost {want}")
        else:
            return Violation(i, f"step {i} kind {t.kind.name} is not executable")
        cur = t.dst
    if goal is not None and not is_goal(goal, cur):
        return Violation(len(path.steps), f"path ends at {cur}, not at goal cell {goal.cell}")
    return None


def plan_adaptive(
    world: World,
    costs: CostTable,
    start: HDState,
    goal: GoalSpec,
    params: AdaptivePlanParams,
    egraph: Optional[EGraph] = None,
    egraph_params: Optional[EGraphParams] = None,
    debug: bool = False,
) -> AdaptiveResult:
    """Iterate sketch -> tunnel -> track, growing regions until executable."""
    if not hd_state_valid(world, start):
        raise ValueError(f"invalid start state {start}")
    if egraph is not None and egraph_params is None:
        egraph_params = EGraphParams()
    graph = AdaptiveGraph(world, costs)
    records: List[IterationRecord] = []
    for it in range(1, params.max_iterations + 1):
        t0 = time.perf_counter()
        p1 = plan_phase1(graph, start, goal, params, debug=debug)
        rec = IterationRecord(
            index=it,
            plan_status=p1.status.value,
            plan_expansions=p1.stats.total_expansions,
            plan_time_s=time.perf_counter() - t0,
        )
        records.append(rec)
        if p1.status == Status.EXHAUSTED:
            return AdaptiveResult(Outcome.NO_PATH, None, records, graph.regions)
        if p1.status == Status.BUDGET:
            rec.plan_status = "TIMEOUT"
            return AdaptiveResult(Outcome.ITERATION_LIMIT, None, records, graph.regions)
        rec.plan_cost = p1.cost
        tunnel = build_tunnel(world, p1.path, params.tunnel_width)
        rec.pi_cells = list(tunnel.pi_cells)
        t1 = time.perf_counter()
        tr = track(
            world, costs, tunnel, graph, start, goal, params,
            egraph=egraph, egraph_params=egraph_params, debug=debug,
        )
        rec.track_status = tr.status.value
        rec.track_expansions = tr.stats.total_expansions
        rec.track_time_s = time.perf_counter() - t1
        if tr.status == Status.PATH:
            violation = validate_path(world, costs, tr.path, start=start, goal=goal)
            if violation is not None:
                raise AssertionError(f"tracking produced an invalid path: {violation}")
            return AdaptiveResult(Outcome.EXECUTABLE, tr.path, records, graph.regions, tunnel)
        region = select_region(tr, tunnel, params)
        rec.region_added = region
        graph = graph.add_hd_region(region)
    return AdaptiveResult(Outcome.ITERATION_LIMIT, None, records, graph.regions)
