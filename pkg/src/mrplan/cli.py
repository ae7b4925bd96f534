"""Command-line front end: plan, bench, oracle, validate, render.

Exit codes for `plan`: 0 executable path written, 2 no path exists,
3 budget or iteration limit, 1 usage or I/O error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from fractions import Fraction
from typing import List, Optional

from .bench import run_bench
from .egraph import load_demonstrations
from .executive import ExecParams, interleave_run
from .maps import CRAFTED, load_crafted
from .planner import AdaptivePlanParams, Outcome, plan_adaptive, validate_path
from .oracle import hd_optimal_cost, refuse_oversize
from .render import render_svg
from .scenario import (
    Scenario,
    ScenarioError,
    dump_result,
    load_result,
    load_scenario,
    path_from_doc,
    result_to_doc,
    result_world_costs,
)
from .states import HDRegion, HDState, Stance
from .world import CostTable, GoalSpec, MapFormatError, WALL, World, load_map


def _read_map_arg(value: str) -> str:
    if value in CRAFTED:
        from .maps import asset_text

        return asset_text(f"maps/{value}.txt")
    with open(value) as fh:
        return fh.read()


def _parse_start(value: str) -> HDState:
    parts = value.split(",")
    if len(parts) not in (4, 5):
        raise argparse.ArgumentTypeError("start must be x,y,theta,STANCE[,phase]")
    phase = int(parts[4]) if len(parts) == 5 else 0
    return HDState(int(parts[0]), int(parts[1]), int(parts[2]), Stance[parts[3]], phase)


def _parse_goal(value: str) -> GoalSpec:
    parts = value.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("goal must be x,y")
    return GoalSpec(int(parts[0]), int(parts[1]))


def _add_param_flags(p: argparse.ArgumentParser):
    p.add_argument("--w1-plan", type=Fraction, default=None)
    p.add_argument("--w2-plan", type=Fraction, default=None)
    p.add_argument("--w1-track", type=Fraction, default=None)
    p.add_argument("--w2-track", type=Fraction, default=None)
    p.add_argument("--tunnel-width", type=int, default=None)
    p.add_argument("--region-radius", type=int, default=None)
    p.add_argument("--eps-egraph", type=Fraction, default=None)
    p.add_argument("--budget-plan", type=int, default=None)
    p.add_argument("--budget-track", type=int, default=None)
    p.add_argument("--max-iterations", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)


def _apply_param_flags(scenario: Scenario, args) -> Scenario:
    params = scenario.params
    updates = {}
    for flag, name in (
        ("w1_plan", "w1_plan"),
        ("w2_plan", "w2_plan"),
        ("w1_track", "w1_track"),
        ("w2_track", "w2_track"),
        ("tunnel_width", "tunnel_width"),
        ("region_radius", "region_radius"),
        ("budget_plan", "budget_plan"),
        ("budget_track", "budget_track"),
        ("max_iterations", "max_iterations"),
    ):
        value = getattr(args, flag)
        if value is not None:
            updates[name] = value
    if updates:
        params = replace(params, **updates)
    scenario.params = params
    if args.eps_egraph is not None:
        scenario.egraph_params = replace(scenario.egraph_params, eps_e=args.eps_egraph)
    if args.seed is not None:
        scenario.seed = args.seed
    return scenario


def cmd_plan(args) -> int:
    try:
        scenario = load_scenario(args.scenario)
        if args.map:
            scenario.map_text = _read_map_arg(args.map)
        for demo in args.demo or []:
            with open(demo) as fh:
                scenario.demo_texts.append(fh.read())
        scenario = _apply_param_flags(scenario, args)
        world = scenario.world
        if world.terrain(*scenario.goal.cell) == WALL:
            raise ScenarioError("goal cell is a wall")
        egraph = None
        if scenario.demo_texts:
            egraph = load_demonstrations(world, scenario.costs, scenario.demo_texts)
    except (OSError, ScenarioError, MapFormatError, json.JSONDecodeError, KeyError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1

    lookahead = scenario.lookahead
    if args.lookahead is not None:
        lookahead = float("inf") if args.lookahead == "inf" else int(args.lookahead)
    trace = None
    if args.interleave:
        result, trace = interleave_run(
            world, scenario.costs, scenario.start, scenario.goal, scenario.params,
            lookahead if lookahead is not None else float("inf"),
            egraph=egraph, egraph_params=scenario.egraph_params,
        )
    else:
        result = plan_adaptive(
            world, scenario.costs, scenario.start, scenario.goal, scenario.params,
            egraph=egraph, egraph_params=scenario.egraph_params,
        )
    doc = result_to_doc(scenario, result, trace)
    out = args.out or "result.json"
    with open(out, "w") as fh:
        fh.write(dump_result(doc))
    if args.render:
        svg = render_svg(world, result.path, result.regions, scenario.start.cell, scenario.goal.cell)
        with open(args.render, "w") as fh:
            fh.write(svg)
    print(f"{result.outcome} cost={result.cost} -> {out}")
    if result.outcome == Outcome.EXECUTABLE:
        return 0
    if result.outcome == Outcome.NO_PATH:
        return 2
    return 3


def cmd_bench(args) -> int:
    try:
        map_text = _read_map_arg(args.map)
        world = load_map(map_text)
        goals = []
        for spec in args.goal:
            label, _, cell = spec.partition(":")
            if not cell:
                raise ValueError(f"goal must be label:x,y, got {spec!r}")
            goals.append((label, _parse_goal(cell)))
    except (OSError, MapFormatError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    params = AdaptivePlanParams()
    scenario = Scenario(map_text=map_text, start=HDState(1, 1, 0, Stance.STAND, 0), goal=goals[0][1], params=params)

    class _Shim:
        pass

    shim = _Shim()
    for name in ("w1_plan", "w2_plan", "w1_track", "w2_track", "tunnel_width", "region_radius",
                 "budget_plan", "budget_track", "max_iterations", "eps_egraph", "seed"):
        setattr(shim, name, getattr(args, name))
    scenario = _apply_param_flags(scenario, shim)
    csv_text, _ = run_bench(world, scenario.costs, goals, scenario.params, stride=args.stride, jobs=args.jobs)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(csv_text)
        print(f"bench table -> {args.out}")
    else:
        sys.stdout.write(csv_text)
    return 0


def cmd_oracle(args) -> int:
    try:
        world = load_map(_read_map_arg(args.map))
        refuse_oversize(world)
        start = args.start
        goal = args.goal
        if world.terrain(*goal.cell) == WALL:
            raise ValueError("goal cell is a wall")
        costs = CostTable()
        best = hd_optimal_cost(world, costs, start, goal)
    except (OSError, MapFormatError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    print("NO_PATH" if best is None else str(best))
    return 0


def cmd_validate(args) -> int:
    try:
        doc = load_result(args.result)
        world, costs = result_world_costs(doc)
    except (OSError, json.JSONDecodeError, KeyError, MapFormatError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    if doc["path"] is None:
        print(f"ok: outcome {doc['outcome']} carries no path")
        return 0
    path = path_from_doc(doc["path"])
    cfg = doc["config"]
    from .scenario import state_from_doc

    start = state_from_doc(cfg["start"])
    goal = GoalSpec(cfg["goal"]["x"], cfg["goal"]["y"])
    violation = validate_path(world, costs, path, start=start, goal=goal)
    if violation is None:
        print(f"ok: {len(path.steps)} steps, cost {path.cost}")
        return 0
    print(f"violation at step {violation.index}: {violation.reason}", file=sys.stderr)
    return 1


def cmd_render(args) -> int:
    try:
        doc = load_result(args.result)
        world, _costs = result_world_costs(doc)
    except (OSError, json.JSONDecodeError, KeyError, MapFormatError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    path = path_from_doc(doc["path"]) if doc["path"] else None
    regions = tuple(HDRegion(*r) for r in doc.get("regions", []))
    cfg = doc["config"]
    svg = render_svg(
        world, path, regions,
        (cfg["start"]["x"], cfg["start"]["y"]), (cfg["goal"]["x"], cfg["goal"]["y"]),
    )
    with open(args.out, "w") as fh:
        fh.write(svg)
    print(f"svg -> {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mrplan", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="run the adaptive planner on a scenario")
    p.add_argument("--scenario", required=True)
    p.add_argument("--map", help="override the scenario map (crafted name or path)")
    p.add_argument("--out", help="result file (default result.json)")
    p.add_argument("--render", help="also write an SVG to this path")
    p.add_argument("--interleave", action="store_true")
    p.add_argument("--lookahead", help="tracking expansions per burst, or 'inf'")
    p.add_argument("--demo", action="append", help="demonstration file (repeatable)")
    _add_param_flags(p)
    p.set_defaults(func=cmd_plan)

    b = sub.add_parser("bench", help="two-phase success/time table over a start grid")
    b.add_argument("--map", required=True)
    b.add_argument("--goal", action="append", required=True, help="label:x,y (repeatable)")
    b.add_argument("--stride", type=int, default=4)
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--out")
    _add_param_flags(b)
    b.set_defaults(func=cmd_bench)

    o = sub.add_parser("oracle", help="brute-force optimal full-body cost")
    o.add_argument("--map", required=True)
    o.add_argument("--start", type=_parse_start, required=True, help="x,y,theta,STANCE[,phase]")
    o.add_argument("--goal", type=_parse_goal, required=True, help="x,y")
    o.set_defaults(func=cmd_oracle)

    v = sub.add_parser("validate", help="re-check the path inside a result file")
    v.add_argument("--result", required=True)
    v.set_defaults(func=cmd_validate)

    r = sub.add_parser("render", help="draw a result file as SVG")
    r.add_argument("--result", required=True)
    r.add_argument("--out", required=True)
    r.set_defaults(func=cmd_render)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
