"""State and representation model shared by every search space in the planner.

The planner reasons over one full-body ("high-dimensional") state space and
two projected low-dimensional spaces, one per locomotion mode (walk, crawl).
States of either kind can appear side by side inside the hybrid adaptive
graph, so all types here are small immutable tuples with a total ordering
helper for deterministic queue tie-breaking.
"""
from __future__ import annotations

from enum import IntEnum
from typing import NamedTuple, Optional, Tuple, Union

N_THETA = 8   # 45-degree heading increments
N_PHASE = 4   # gait phase counter


class Rep(IntEnum):
    """Representation id: the full-body space plus one space per mode."""

    HD = 0
    WALK = 1
    CRAWL = 2


LD_REPS = (Rep.WALK, Rep.CRAWL)


class Stance(IntEnum):
    STAND = 0
    CROUCH = 1


class Kind(IntEnum):
    """Transition kind; doubles as the leading successor-ordering key."""

    LD_PRIMITIVE = 0
    HD_PRIMITIVE = 1
    HD_MACRO = 2
    PROJECTION = 3
    REP_SWITCH = 4
    SNAP = 5


class Controller(IntEnum):
    WALK_CTRL = 0
    CRAWL_CTRL = 1
    FULLBODY_CTRL = 2


class HDState(NamedTuple):
    """Full configuration: cell, heading, stance and gait phase."""

    x: int
    y: int
    theta: int
    stance: Stance
    phase: int

    @property
    def rep(self) -> Rep:
        return Rep.HD

    @property
    def cell(self) -> Tuple[int, int]:
        return (self.x, self.y)


class LDState(NamedTuple):
    """Projected state in one low-dimensional representation.

    Walk states carry a heading; crawl states do not (theta is None).
    """

    rep: Rep
    x: int
    y: int
    theta: Optional[int] = None

    @property
    def cell(self) -> Tuple[int, int]:
        return (self.x, self.y)


AnyState = Union[HDState, LDState]


class HDRegion(NamedTuple):
    """Chebyshev ball of cells in which full-body states replace projections."""

    x: int
    y: int
    radius: int


class Transition(NamedTuple):
    """Directed edge between two states of possibly different representations."""

    src: AnyState
    dst: AnyState
    cost: int
    kind: Kind
    ctrl: Optional[Controller] = None


def state_key(s: AnyState) -> Tuple[int, int, int, int, int, int]:
    """Total ordering key across mixed HD/LD states (rep, x, y, theta, stance, phase)."""
    if isinstance(s, HDState):
        return (int(Rep.HD), s.x, s.y, s.theta, int(s.stance), s.phase)
    theta = -1 if s.theta is None else s.theta
    return (int(s.rep), s.x, s.y, theta, -1, -1)


def transition_key(t: Transition) -> tuple:
    """Deterministic successor ordering: (kind, rep, x, y, theta, stance, phase, cost)."""
    return (int(t.kind),) + state_key(t.dst) + (t.cost,)


def fmt_state(s: AnyState) -> str:
    """Compact stable rendering used by debug traces and error messages."""
    if isinstance(s, HDState):
        st = "S" if s.stance == Stance.STAND else "C"
        return f"HD({s.x},{s.y},{s.theta},{st},{s.phase})"
    if s.rep == Rep.WALK:
        return f"WALK({s.x},{s.y},{s.theta})"
    return f"CRAWL({s.x},{s.y})"
