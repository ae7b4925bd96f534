"""Primitive transition sets of the toy multi-mode domain.

Full-body actions: rotate, weight shift, stance change, and a forward step
whose terrain gate depends on stance. Stepping into or out of rubble is the
deliberately expensive case: it demands a stand stance at gait phase 3, so
crossing one rubble cell takes at least four full-body actions.

Mode actions: walk (forward along heading + turns) and crawl (4-connected
moves). A walk step that touches rubble is legal in the walk representation
but is NOT executable by the walk controller; such steps exist only so the
first planning phase can sketch routes that the tracking phase then has to
realize with full-body actions.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List

from .projection import inverse_project, project
from .states import (
    Controller,
    HDState,
    Kind,
    LDState,
    N_PHASE,
    N_THETA,
    Rep,
    Stance,
    Transition,
)
from .world import (
    CARDINAL_THETAS,
    CROUCH_TERRAIN,
    CostTable,
    DIR8,
    FREE,
    RUBBLE,
    STAND_TERRAIN,
    World,
    hd_state_valid,
    ld_state_valid,
)


def hd_successors(world: World, costs: CostTable, s: HDState) -> List[Transition]:
    """Raw full-body transitions from a valid state."""
    out: List[Transition] = []
    nphase = (s.phase + 1) % N_PHASE
    for d in (-1, 1):
        dst = HDState(s.x, s.y, (s.theta + d) % N_THETA, s.stance, nphase)
        out.append(Transition(s, dst, costs.rotate, Kind.HD_PRIMITIVE))
    out.append(
        Transition(s, HDState(s.x, s.y, s.theta, s.stance, nphase), costs.weight_shift, Kind.HD_PRIMITIVE)
    )
    here = world.terrain(s.x, s.y)
    if here == FREE:
        other = Stance.CROUCH if s.stance == Stance.STAND else Stance.STAND
        out.append(
            Transition(s, HDState(s.x, s.y, s.theta, other, 0), costs.stance_change, Kind.HD_PRIMITIVE)
        )
    dx, dy = DIR8[s.theta]
    tx, ty = s.x + dx, s.y + dy
    there = world.terrain(tx, ty)
    if here == RUBBLE or there == RUBBLE:
        # Rubble stepping: stand only, gated on gait phase 3, resets the phase.
        if s.stance == Stance.STAND and s.phase == N_PHASE - 1 and there in STAND_TERRAIN:
            dst = HDState(tx, ty, s.theta, Stance.STAND, 0)
            out.append(Transition(s, dst, costs.rubble_substep, Kind.HD_PRIMITIVE))
    else:
        ok = there in STAND_TERRAIN if s.stance == Stance.STAND else there in CROUCH_TERRAIN
        if ok:
            cost = costs.walk_step if s.stance == Stance.STAND else costs.crawl_step
            dst = HDState(tx, ty, s.theta, s.stance, nphase)
            out.append(Transition(s, dst, cost, Kind.HD_PRIMITIVE))
    return out


def ld_successors(world: World, costs: CostTable, s: LDState) -> List[Transition]:
    """Mode transitions from a valid mode state."""
    out: List[Transition] = []
    if s.rep == Rep.WALK:
        dx, dy = DIR8[s.theta]
        tx, ty = s.x + dx, s.y + dy
        here = world.terrain(s.x, s.y)
        there = world.terrain(tx, ty)
        if here == FREE and there == FREE:
            out.append(Transition(s, LDState(Rep.WALK, tx, ty, s.theta), costs.walk_step, Kind.LD_PRIMITIVE))
        elif here in STAND_TERRAIN and there in STAND_TERRAIN:
            # Rubble-touching footsteps: legal in the representation, not
            # executable by the walk controller; tracked with full-body moves.
            out.append(
                Transition(s, LDState(Rep.WALK, tx, ty, s.theta), costs.rubble_substep, Kind.LD_PRIMITIVE)
            )
        for d in (-1, 1):
            dst = LDState(Rep.WALK, s.x, s.y, (s.theta + d) % N_THETA)
            out.append(Transition(s, dst, costs.rotate, Kind.LD_PRIMITIVE))
    elif s.rep == Rep.CRAWL:
        here = world.terrain(s.x, s.y)
        for theta in CARDINAL_THETAS:
            dx, dy = DIR8[theta]
            tx, ty = s.x + dx, s.y + dy
            if here in CROUCH_TERRAIN and world.terrain(tx, ty) in CROUCH_TERRAIN:
                out.append(Transition(s, LDState(Rep.CRAWL, tx, ty), costs.crawl_step, Kind.LD_PRIMITIVE))
    else:
        raise ValueError("ld_successors requires a low-dimensional state")
    return out


def ld_action_executable(world: World, t: Transition) -> bool:
    """True iff the mode action can be handed to its controller directly.

    The walk controller operates on FREE terrain only; every crawl action is
    executable on the terrain that admitted it.
    """
    if t.src.rep == Rep.WALK:
        return world.terrain(t.src.x, t.src.y) == FREE and world.terrain(t.dst.x, t.dst.y) == FREE
    return True


def special_projection_successors(world: World, costs: CostTable, s: LDState) -> List[Transition]:
    """Cross-mode hop at one cell: the dedicated mount/dismount transition.

    Emitted only on FREE cells; targets are the cross projections of s into
    the other mode. These targets exist purely to enter the other
    representation and are only ever expanded there.
    """
    from .projection import cross_project

    if world.terrain(s.x, s.y) != FREE:
        return []
    other = Rep.CRAWL if s.rep == Rep.WALK else Rep.WALK
    out = []
    for dst in cross_project(world, s.rep, other, s):
        out.append(Transition(s, dst, costs.rep_switch, Kind.REP_SWITCH))
    return out


_CTRL = {Rep.WALK: Controller.WALK_CTRL, Rep.CRAWL: Controller.CRAWL_CTRL}


def executable_macro_successors(world: World, costs: CostTable, s: HDState) -> List[Transition]:
    """Full-body macros that delegate one executable mode action to a controller.

    Mirrors the executable mode actions of the projection matching the
    current stance, landing on the nominal configuration of the mode target
    (crawl macros keep the current heading). Used only by the tracking phase.
    """
    rep = Rep.WALK if s.stance == Stance.STAND else Rep.CRAWL
    l = project(rep, s)
    out: List[Transition] = []
    for t in ld_successors(world, costs, l):
        if not ld_action_executable(world, t):
            continue
        if rep == Rep.WALK:
            dst = HDState(t.dst.x, t.dst.y, t.dst.theta, Stance.STAND, 0)
        else:
            dst = HDState(t.dst.x, t.dst.y, s.theta, Stance.CROUCH, 0)
        out.append(Transition(s, dst, t.cost, Kind.HD_MACRO, _CTRL[rep]))
    return out


@dataclass(frozen=True)
class HDGraph:
    """The bare full-body graph (raw primitives only)."""

    world: World
    costs: CostTable

    def successors(self, s: HDState) -> List[Transition]:
        if not hd_state_valid(self.world, s):
            raise ValueError(f"invalid full-body state {s}")
        return hd_successors(self.world, self.costs, s)


@dataclass(frozen=True)
class LDGraph:
    """One mode space in isolation (mode primitives only)."""

    world: World
    costs: CostTable
    rep: Rep

    def successors(self, s: LDState) -> List[Transition]:
        if s.rep != self.rep or not ld_state_valid(self.world, s):
            raise ValueError(f"invalid {self.rep.name} state {s}")
        return ld_successors(self.world, self.costs, s)
