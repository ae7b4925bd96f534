"""Scenario and result file formats (JSON, documented in the README).

Result files are self-contained: they embed the map text, cost table and
query so `mrplan validate` can re-check a path without the scenario. All
fields are deterministic for a fixed scenario, so identical runs produce
byte-identical files.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .egraph import EGraphParams
from .executive import ExecTrace
from .planner import AdaptivePlanParams, AdaptiveResult, IterationRecord
from .search import Path
from .states import Controller, HDRegion, HDState, Kind, LDState, Rep, Stance, Transition
from .world import CostTable, GoalSpec, World, dump_map, load_map

TOOL_VERSION = "mrplan-0.1.0"


class ScenarioError(ValueError):
    """Malformed or inconsistent scenario file."""


@dataclass
class Scenario:
    map_text: str
    start: HDState
    goal: GoalSpec
    params: AdaptivePlanParams = field(default_factory=AdaptivePlanParams)
    costs: CostTable = field(default_factory=CostTable)
    egraph_params: EGraphParams = field(default_factory=EGraphParams)
    demo_texts: List[str] = field(default_factory=list)
    lookahead: Optional[float] = None
    seed: int = 0

    @property
    def world(self) -> World:
        return load_map(self.map_text)


def _frac(value) -> Fraction:
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    raise ScenarioError(f"weights must be integers or rational strings, got {value!r}")


def _frac_str(f: Fraction) -> str:
    return str(f)


def load_scenario(path: str) -> Scenario:
    """Read a scenario file, resolving map/demo references relative to it."""
    from .maps import CRAFTED, asset_text

    with open(path) as fh:
        doc = json.load(fh)
    base = os.path.dirname(os.path.abspath(path))

    def read_ref(ref: str, kind: str) -> str:
        if kind == "map" and ref in CRAFTED:
            return asset_text(f"maps/{ref}.txt")
        if kind == "demo" and not os.path.isabs(ref) and not os.path.exists(os.path.join(base, ref)):
            bundled = f"demos/{ref}"
            try:
                return asset_text(bundled)
            except FileNotFoundError:
                pass
        full = ref if os.path.isabs(ref) else os.path.join(base, ref)
        if not os.path.exists(full):
            raise ScenarioError(f"referenced {kind} file does not exist: {ref}")
        with open(full) as fh:
            return fh.read()

    try:
        map_text = read_ref(doc["map"], "map")
        s = doc["start"]
        start = HDState(
            int(s["x"]), int(s["y"]), int(s.get("theta", 0)),
            Stance[s.get("stance", "STAND")], int(s.get("phase", 0)),
        )
        g = doc["goal"]
        goal = GoalSpec(int(g["x"]), int(g["y"]))
    except KeyError as e:
        raise ScenarioError(f"scenario missing required field: {e}") from e
    p = doc.get("params", {})
    params = AdaptivePlanParams(
        w1_plan=_frac(p.get("w1_plan", 2)),
        w2_plan=_frac(p.get("w2_plan", 2)),
        w1_track=_frac(p.get("w1_track", 2)),
        w2_track=_frac(p.get("w2_track", 2)),
        tunnel_width=int(p.get("tunnel_width", 1)),
        region_radius=int(p.get("region_radius", 2)),
        max_iterations=int(p.get("max_iterations", 10)),
        budget_plan=int(p.get("budget_plan", 500_000)),
        budget_track=int(p.get("budget_track", 500_000)),
    )
    costs = CostTable(**doc.get("costs", {}))
    egp = EGraphParams(
        eps_e=_frac(p.get("eps_egraph", 10)),
        snap_cost_per_field=int(p.get("snap_cost_per_field", 1)),
    )
    lookahead = p.get("lookahead")
    if lookahead is not None:
        lookahead = float("inf") if lookahead == "inf" else int(lookahead)
    demos = [read_ref(d, "demo") for d in doc.get("demos", [])]
    return Scenario(
        map_text=map_text,
        start=start,
        goal=goal,
        params=params,
        costs=costs,
        egraph_params=egp,
        demo_texts=demos,
        lookahead=lookahead,
        seed=int(doc.get("seed", 0)),
    )


# -- state/path (de)serialization ---------------------------------------------


def state_to_doc(s) -> dict:
    if isinstance(s, HDState):
        return {"rep": "HD", "x": s.x, "y": s.y, "theta": s.theta,
                "stance": s.stance.name, "phase": s.phase}
    d = {"rep": s.rep.name, "x": s.x, "y": s.y}
    if s.theta is not None:
        d["theta"] = s.theta
    return d


def state_from_doc(d: dict):
    if d["rep"] == "HD":
        return HDState(d["x"], d["y"], d["theta"], Stance[d["stance"]], d["phase"])
    return LDState(Rep[d["rep"]], d["x"], d["y"], d.get("theta"))


def path_to_doc(path: Path) -> dict:
    return {
        "start": state_to_doc(path.start),
        "steps": [
            {
                "to": state_to_doc(t.dst),
                "cost": t.cost,
                "kind": t.kind.name,
                "ctrl": t.ctrl.name if t.ctrl is not None else None,
            }
            for t in path.steps
        ],
    }


def path_from_doc(d: dict) -> Path:
    start = state_from_doc(d["start"])
    steps = []
    cur = start
    for sd in d["steps"]:
        dst = state_from_doc(sd["to"])
        ctrl = Controller[sd["ctrl"]] if sd.get("ctrl") else None
        steps.append(Transition(cur, dst, sd["cost"], Kind[sd["kind"]], ctrl))
        cur = dst
    return Path(start, steps)


def record_to_doc(r: IterationRecord) -> dict:
    return {
        "index": r.index,
        "plan_status": r.plan_status,
        "plan_expansions": r.plan_expansions,
        "plan_cost": r.plan_cost,
        "pi_cells": [list(c) for c in r.pi_cells],
        "track_status": r.track_status,
        "track_expansions": r.track_expansions,
        "region_added": list(r.region_added) if r.region_added else None,
    }


def result_to_doc(
    scenario: Scenario, result: AdaptiveResult, trace: Optional[ExecTrace] = None
) -> dict:
    return {
        "tool_version": TOOL_VERSION,
        "outcome": result.outcome,
        "cost": result.cost,
        "path": path_to_doc(result.path) if result.path is not None else None,
        "regions": [list(r) for r in result.regions],
        "iterations": [record_to_doc(r) for r in result.records],
        "exec_trace": [[t, k, p] for (t, k, p) in trace.events] if trace is not None else None,
        "config": {
            "map_text": scenario.map_text,
            "start": state_to_doc(scenario.start),
            "goal": {"x": scenario.goal.x, "y": scenario.goal.y},
            "costs": {
                "walk_step": scenario.costs.walk_step,
                "rotate": scenario.costs.rotate,
                "crawl_step": scenario.costs.crawl_step,
                "stance_change": scenario.costs.stance_change,
                "rep_switch": scenario.costs.rep_switch,
                "rubble_substep": scenario.costs.rubble_substep,
                "weight_shift": scenario.costs.weight_shift,
            },
            "params": {
                "w1_plan": _frac_str(scenario.params.w1_plan),
                "w2_plan": _frac_str(scenario.params.w2_plan),
                "w1_track": _frac_str(scenario.params.w1_track),
                "w2_track": _frac_str(scenario.params.w2_track),
                "tunnel_width": scenario.params.tunnel_width,
                "region_radius": scenario.params.region_radius,
                "max_iterations": scenario.params.max_iterations,
                "budget_plan": scenario.params.budget_plan,
                "budget_track": scenario.params.budget_track,
                "eps_egraph": _frac_str(scenario.egraph_params.eps_e),
                "lookahead": "inf" if scenario.lookahead == float("inf") else scenario.lookahead,
            },
            "seed": scenario.seed,
        },
    }


def dump_result(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def load_result(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def result_world_costs(doc: dict) -> Tuple[World, CostTable]:
    cfg = doc["config"]
    return load_map(cfg["map_text"]), CostTable(**cfg["costs"])
