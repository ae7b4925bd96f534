"""Meta-controller and the interleaved planning/execution harness.

Hybrid paths are split into maximal runs of one controller (walk, crawl, or
full-body for raw primitives and snaps) and dispatched sequentially to
simulated controllers. Execution runs on a deterministic integer clock: the
planner spends one tick per expansion, a controller spends cost * rate ticks
per edge, and the two tasks overlap the way two threads would without any
real concurrency.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .adaptive_graph import AdaptiveGraph
from .egraph import EGraph, EGraphParams
from .planner import (
    AdaptivePlanParams,
    AdaptiveResult,
    IterationRecord,
    Outcome,
    build_tunnel,
    plan_phase1,
    select_region,
    track,
    tunnel_progress,
    validate_path,
)
from .search import Path, Status
from .states import Controller, HDState, Kind, Transition, state_key
from .world import CostTable, GoalSpec, World, is_goal

INF = math.inf


def controller_of(t: Transition) -> Controller:
    if t.kind == Kind.HD_MACRO:
        return t.ctrl
    if t.kind in (Kind.HD_PRIMITIVE, Kind.SNAP):
        return Controller.FULLBODY_CTRL
    raise ValueError(f"transition kind {t.kind.name} has no executing controller")


@dataclass
class Segment:
    ctrl: Controller
    steps: List[Transition]

    @property
    def cost(self) -> int:
        return sum(t.cost for t in self.steps)


def split_segments(path: Path) -> List[Segment]:
    """Maximal homogeneous controller runs, order preserving."""
    segments: List[Segment] = []
    for t in path.steps:
        ctrl = controller_of(t)
        if segments and segments[-1].ctrl == ctrl:
            segments[-1].steps.append(t)
        else:
            segments.append(Segment(ctrl, [t]))
    return segments


def concat_segments(start, segments: List[Segment]) -> Path:
    steps = [t for seg in segments for t in seg.steps]
    return Path(start, steps)


@dataclass(frozen=True)
class ExecParams:
    """Ticks of simulated time per unit of edge cost, per controller."""

    rates: Dict[Controller, int] = field(
        default_factory=lambda: {
            Controller.WALK_CTRL: 3,
            Controller.CRAWL_CTRL: 3,
            Controller.FULLBODY_CTRL: 3,
        }
    )


@dataclass
class ExecTrace:
    events: List[Tuple[int, str, str]] = field(default_factory=list)
    exec_time: int = 0

    def emit(self, tick: int, kind: str, payload: str = ""):
        self.events.append((tick, kind, payload))

    def of_kind(self, kind: str) -> List[Tuple[int, str, str]]:
        return [e for e in self.events if e[1] == kind]

    def idle_time(self) -> int:
        """Executor ticks spent waiting between (and before) segments."""
        idle = 0
        cursor = 0
        for tick, kind, _ in self.events:
            if kind == "segment_dispatched":
                idle += max(0, tick - cursor)
                cursor = max(cursor, tick)
            elif kind == "segment_done":
                cursor = tick
        return idle


def simulate_execute(trace: ExecTrace, segment: Segment, params: ExecParams, at_tick: Optional[int] = None) -> ExecTrace:
    """Run one segment on its controller, appending events to the trace.

    The segment starts when both the controller is free and the dispatch
    tick has passed; each edge consumes cost * rate ticks.
    """
    rate = params.rates[segment.ctrl]
    t = max(trace.exec_time, at_tick if at_tick is not None else trace.exec_time)
    trace.emit(t, "segment_dispatched", segment.ctrl.name)
    for step in segment.steps:
        t += step.cost * rate
        trace.emit(t, "waypoint_reached", f"{step.dst.x},{step.dst.y}")
    trace.emit(t, "segment_done", segment.ctrl.name)
    trace.exec_time = t
    return trace


def _dispatch_path(trace: ExecTrace, path: Path, params: ExecParams, at_tick: int):
    for seg in split_segments(path):
        simulate_execute(trace, seg, params, at_tick=at_tick)
        at_tick = trace.exec_time


def interleave_run(
    world: World,
    costs: CostTable,
    start: HDState,
    goal: GoalSpec,
    params: AdaptivePlanParams,
    lookahead: float,
    exec_params: Optional[ExecParams] = None,
    egraph: Optional[EGraph] = None,
    egraph_params: Optional[EGraphParams] = None,
) -> Tuple[AdaptiveResult, ExecTrace]:
    """Adaptive planning with tracking run in lookahead-sized bursts.

    After each burst the executable prefix reaching the frontier state of
    maximal tunnel progress is committed for execution and tracking restarts
    from its tail. Committed prefixes are never retracted; if planning fails
    after partial execution the trace records an ABORT at the last executed
    waypoint.
    """
    if lookahead <= 0:
        raise ValueError("lookahead must be positive")
    if egraph is not None and egraph_params is None:
        egraph_params = EGraphParams()
    exec_params = exec_params or ExecParams()
    trace = ExecTrace()
    planner_tick = 0
    committed: List[Transition] = []
    cur_start = start
    graph = AdaptiveGraph(world, costs)
    records: List[IterationRecord] = []

    def fail(outcome: str) -> Tuple[AdaptiveResult, ExecTrace]:
        if committed:
            tail = committed[-1].dst
            trace.emit(max(planner_tick, trace.exec_time), "abort", f"{tail.x},{tail.y}")
        result = AdaptiveResult(outcome, None, records, graph.regions)
        return result, trace

    for it in range(1, params.max_iterations + 1):
        p1 = plan_phase1(graph, cur_start, goal, params)
        planner_tick += p1.stats.total_expansions
        rec = IterationRecord(index=it, plan_status=p1.status.value, plan_expansions=p1.stats.total_expansions)
        records.append(rec)
        if p1.status == Status.EXHAUSTED:
            return fail(Outcome.NO_PATH)
        if p1.status == Status.BUDGET:
            rec.plan_status = "TIMEOUT"
            return fail(Outcome.ITERATION_LIMIT)
        rec.plan_cost = p1.cost
        tunnel = build_tunnel(world, p1.path, params.tunnel_width)
        rec.pi_cells = list(tunnel.pi_cells)

        # Tracking bursts within this iteration.
        stuck = None
        while True:
            budget = params.budget_track if lookahead == INF else int(min(lookahead, params.budget_track))
            tr = track(
                world, costs, tunnel, graph, cur_start, goal, params,
                egraph=egraph, egraph_params=egraph_params, budget=budget,
            )
            planner_tick += tr.stats.total_expansions
            rec.track_expansions += tr.stats.total_expansions
            rec.track_status = tr.status.value
            if tr.status == Status.PATH:
                committed.extend(tr.path.steps)
                trace.emit(planner_tick, "path_extended", f"{len(tr.path.steps)} steps")
                _dispatch_path(trace, tr.path, exec_params, at_tick=planner_tick)
                full = Path(start, committed)
                violation = validate_path(world, costs, full, start=start, goal=goal)
                if violation is not None:
                    raise AssertionError(f"interleaved execution produced an invalid path: {violation}")
                trace.emit(trace.exec_time, "goal_reached", f"{goal.x},{goal.y}")
                result = AdaptiveResult(Outcome.EXECUTABLE, full, records, graph.regions, tunnel)
                return result, trace
            if tr.status == Status.EXHAUSTED:
                stuck = tr
                break
            # Budget stop: commit the best executable prefix, if it moves us.
            best = None
            for s, key in tr.best_frontier:
                prog = tunnel_progress(tunnel, (s.x, s.y))
                cand = (-prog, key, state_key(s))
                if best is None or cand < best[0]:
                    best = (cand, s)
            partial = tr.path_to(best[1]) if best else None
            if partial is None or not partial.steps:
                stuck = tr
                break
            committed.extend(partial.steps)
            trace.emit(planner_tick, "path_extended", f"{len(partial.steps)} steps")
            _dispatch_path(trace, partial, exec_params, at_tick=planner_tick)
            cur_start = partial.end

        region = select_region(stuck, tunnel, params)
        rec.region_added = region
        graph = graph.add_hd_region(region)
    return fail(Outcome.ITERATION_LIMIT)
