"""The hybrid adaptive graph: mode states everywhere, full-body states in regions.

Membership is decided by cell alone: a state belongs to the hybrid space as a
full-body state iff its cell lies inside some region, and as a mode state iff
it does not. The successor rules keep every emitted target on the right side
of that split:

* full-body source: raw full-body transitions; targets that exit all regions
  are re-tagged as cost-preserving projections into every mode whose
  projection is valid there (one transition per mode);
* mode source: mode transitions, with targets that enter a region lifted to
  their nominal full-body configurations; plus full-body transitions seeded
  from the source's nominal lifts when those land inside a region; plus the
  domain's cross-mode switch transitions.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import List, Tuple

from .primitives import hd_successors, ld_successors, special_projection_successors
from .projection import inverse_project, project
from .states import (
    AnyState,
    HDRegion,
    HDState,
    Kind,
    LDState,
    LD_REPS,
    Transition,
    transition_key,
)
from .world import CostTable, World, hd_state_valid, ld_state_valid


class MembershipError(ValueError):
    """State offered to the adaptive graph on the wrong side of the region split."""


@dataclass(frozen=True)
class AdaptiveGraph:
    """Immutable snapshot of the hybrid search space for one region list."""

    world: World
    costs: CostTable
    regions: Tuple[HDRegion, ...] = ()
    projection_cost: int = 0  # surcharge on region-exit re-tagging, 0 keeps cost dominance

    def in_hd_region(self, x: int, y: int) -> bool:
        for r in self.regions:
            if max(abs(x - r.x), abs(y - r.y)) <= r.radius:
                return True
        return False

    def add_hd_region(self, region: HDRegion) -> "AdaptiveGraph":
        """New snapshot with one more region; overlap and repeats are allowed."""
        if not self.world.in_bounds(region.x, region.y):
            raise ValueError(f"region center {region.x, region.y} out of bounds")
        if region.radius < 0:
            raise ValueError("region radius must be >= 0")
        return replace(self, regions=self.regions + (region,))

    def member(self, s: AnyState) -> bool:
        inside = self.in_hd_region(s.x, s.y)
        return inside if isinstance(s, HDState) else not inside

    def successors(self, s: AnyState) -> List[Transition]:
        return ad_successors(self, s)


def ad_successors(g: AdaptiveGraph, s: AnyState) -> List[Transition]:
    """Hybrid transition set at s, in deterministic sorted order."""
    if isinstance(s, HDState):
        if not hd_state_valid(g.world, s):
            raise MembershipError(f"invalid full-body state {s}")
        if not g.in_hd_region(s.x, s.y):
            raise MembershipError(f"full-body state {s} lies outside every region")
        out = _hd_member_successors(g, s)
    else:
        if not ld_state_valid(g.world, s):
            raise MembershipError(f"invalid mode state {s}")
        if g.in_hd_region(s.x, s.y):
            raise MembershipError(f"mode state {s} lies inside a region")
        out = _ld_member_successors(g, s)
    dedup = sorted(set(out), key=transition_key)
    return dedup


def _hd_member_successors(g: AdaptiveGraph, s: HDState) -> List[Transition]:
    out: List[Transition] = []
    for t in hd_successors(g.world, g.costs, s):
        if g.in_hd_region(t.dst.x, t.dst.y):
            out.append(t)
        else:
            for rep in LD_REPS:
                l = project(rep, t.dst)
                if ld_state_valid(g.world, l):
                    out.append(Transition(s, l, t.cost + g.projection_cost, t.kind))
    return out


def _ld_member_successors(g: AdaptiveGraph, s: LDState) -> List[Transition]:
    out: List[Transition] = []
    for t in ld_successors(g.world, g.costs, s):
        if not g.in_hd_region(t.dst.x, t.dst.y):
            out.append(t)
        else:
            for h in inverse_project(g.world, t.dst.rep, t.dst):
                out.append(Transition(s, h, t.cost, t.kind))
    for h in inverse_project(g.world, s.rep, s):
        for t in hd_successors(g.world, g.costs, h):
            if g.in_hd_region(t.dst.x, t.dst.y):
                out.append(Transition(s, t.dst, t.cost, t.kind))
    for t in special_projection_successors(g.world, g.costs, s):
        # Switch targets share the source cell, so they stay outside regions.
        out.append(t)
    return out
