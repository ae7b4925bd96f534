"""Benchmark runner: evenly distributed starts, two-phase success/time table.

Starts are enumerated on a stride grid over FREE cells, one query per
heading. The CSV mirrors the two-phase experiment layout: per goal, the
sketch-phase success rate, the tracking success rate normalized to sketch
successes, and mean wall times for both phases.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from multiprocessing import Pool
from typing import Dict, List, Optional, Sequence, Tuple

from .planner import AdaptivePlanParams, Outcome, plan_adaptive
from .states import HDState, N_THETA, Stance
from .world import CostTable, FREE, GoalSpec, World

CSV_COLUMNS = ("goal", "plan_success_pct", "track_success_pct", "plan_mean_time", "track_mean_time")


@dataclass(frozen=True)
class BenchQuery:
    start_id: int
    start: HDState
    goal_label: str
    goal: GoalSpec


@dataclass
class QueryOutcome:
    start_id: int
    goal_label: str
    plan_success: bool
    track_success: bool
    plan_time_s: float
    track_time_s: float


def enumerate_starts(world: World, stride: int) -> List[HDState]:
    """Stride grid over FREE cells, all headings, standing at phase 0."""
    starts = []
    for y in range(1, world.height, stride):
        for x in range(1, world.width, stride):
            if world.terrain(x, y) != FREE:
                continue
            for theta in range(N_THETA):
                starts.append(HDState(x, y, theta, Stance.STAND, 0))
    return starts


_WORKER_CTX: dict = {}


def _init_worker(world, costs, params):
    _WORKER_CTX["world"] = world
    _WORKER_CTX["costs"] = costs
    _WORKER_CTX["params"] = params


def _run_query(q: BenchQuery) -> QueryOutcome:
    world, costs, params = _WORKER_CTX["world"], _WORKER_CTX["costs"], _WORKER_CTX["params"]
    result = plan_adaptive(world, costs, q.start, q.goal, params)
    plan_success = any(r.plan_status == "PATH" for r in result.records)
    plan_time = sum(r.plan_time_s for r in result.records)
    track_time = sum(r.track_time_s for r in result.records)
    return QueryOutcome(
        q.start_id, q.goal_label, plan_success, result.outcome == Outcome.EXECUTABLE, plan_time, track_time
    )


def run_bench(
    world: World,
    costs: CostTable,
    goals: Sequence[Tuple[str, GoalSpec]],
    params: AdaptivePlanParams,
    stride: int = 4,
    jobs: int = 1,
) -> Tuple[str, List[QueryOutcome]]:
    """Run the full start grid against every goal; returns (csv_text, outcomes)."""
    starts = enumerate_starts(world, stride)
    queries = [
        BenchQuery(i, s, label, goal)
        for label, goal in goals
        for i, s in enumerate(starts)
    ]
    if jobs > 1:
        with Pool(jobs, initializer=_init_worker, initargs=(world, costs, params)) as pool:
            outcomes = pool.map(_run_query, queries)
    else:
        _init_worker(world, costs, params)
        outcomes = [_run_query(q) for q in queries]
    outcomes.sort(key=lambda o: (o.goal_label, o.start_id))

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for label, _goal in goals:
        rows = [o for o in outcomes if o.goal_label == label]
        n = len(rows)
        plan_ok = [o for o in rows if o.plan_success]
        track_ok = [o for o in plan_ok if o.track_success]
        plan_pct = 100.0 * len(plan_ok) / n if n else 0.0
        track_pct = 100.0 * len(track_ok) / len(plan_ok) if plan_ok else 0.0
        plan_mean = sum(o.plan_time_s for o in rows) / n if n else 0.0
        track_mean = sum(o.track_time_s for o in rows) / n if n else 0.0
        writer.writerow([label, f"{plan_pct:.1f}", f"{track_pct:.1f}", f"{plan_mean:.3f}", f"{track_mean:.3f}"])
    return buf.getvalue(), outcomes
