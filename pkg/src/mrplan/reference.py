"""Independent rule-table enumeration of the hybrid transition set.

This is the verification twin of AdaptiveGraph.successors: it spells the
membership and replacement rules out longhand, state class by state class,
without reusing the graph's emit/filter code paths. Tests compare the two
extensionally on whole maps; keep this file boring and literal.
"""
from __future__ import annotations

from typing import List

from .adaptive_graph import AdaptiveGraph
from .primitives import hd_successors, ld_successors
from .projection import cross_project, inverse_project, project
from .states import HDState, Kind, LDState, N_THETA, Rep, Stance, Transition
from .world import FREE, World, ld_state_valid


def reference_successors(g: AdaptiveGraph, s) -> List[Transition]:
    """Expected hybrid successor set of s, as an unordered list."""
    world, costs = g.world, g.costs

    def inside(x, y):
        return g.in_hd_region(x, y)

    out: List[Transition] = []
    if isinstance(s, HDState):
        # Full-body member: raw transitions; region exits become projections
        # into each mode where the projection is a valid mode state.
        for t in hd_successors(world, costs, s):
            if inside(t.dst.x, t.dst.y):
                out.append(t)
            else:
                for rep in (Rep.WALK, Rep.CRAWL):
                    l = project(rep, t.dst)
                    if ld_state_valid(world, l):
                        out.append(Transition(s, l, t.cost + g.projection_cost, Kind.HD_PRIMITIVE))
        return out

    # Mode member: own-mode transitions, lifted on region entry.
    for t in ld_successors(world, costs, s):
        if inside(t.dst.x, t.dst.y):
            for h in inverse_project(world, t.dst.rep, t.dst):
                out.append(Transition(s, h, t.cost, Kind.LD_PRIMITIVE))
        else:
            out.append(t)
    # Full-body transitions seeded at the nominal lifts, kept only when the
    # target lands inside a region.
    for h in inverse_project(world, s.rep, s):
        for t in hd_successors(world, costs, h):
            if inside(t.dst.x, t.dst.y):
                out.append(Transition(s, t.dst, t.cost, Kind.HD_PRIMITIVE))
    # Cross-mode switch at the same cell, FREE terrain only.
    if world.terrain(s.x, s.y) == FREE:
        other = Rep.CRAWL if s.rep == Rep.WALK else Rep.WALK
        for l in cross_project(world, s.rep, other, s):
            out.append(Transition(s, l, costs.rep_switch, Kind.REP_SWITCH))
    return out
