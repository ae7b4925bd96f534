"""Projections between the full-body space and the per-mode spaces.

project() is a pure many-to-one field drop and is defined for every valid
full-body state. inverse_project() returns only the nominal configurations a
mode controller leaves the robot in (phase 0; stand for walk, crouch for
crawl), filtered by terrain validity. cross_project() maps a mode state into
another mode through those shared full-body preimages.
"""
from __future__ import annotations

from typing import Tuple

from .states import HDState, LDState, N_THETA, Rep, Stance
from .world import World, ld_state_valid, stance_allows

NOMINAL_STANCE = {Rep.WALK: Stance.STAND, Rep.CRAWL: Stance.CROUCH}


def project(rep: Rep, s: HDState) -> LDState:
    """Drop full-body detail down to the given mode representation."""
    if rep == Rep.WALK:
        return LDState(Rep.WALK, s.x, s.y, s.theta)
    if rep == Rep.CRAWL:
        return LDState(Rep.CRAWL, s.x, s.y)
    raise ValueError("projection target must be a low-dimensional representation")


def inverse_project(world: World, rep: Rep, l: LDState) -> Tuple[HDState, ...]:
    """Nominal full-body lifts of a mode state, terrain-filtered (may be empty)."""
    if rep not in NOMINAL_STANCE:
        raise ValueError("inverse projection source must be a low-dimensional representation")
    if l.rep != rep:
        raise ValueError(f"state rep {l.rep!r} does not match requested rep {rep!r}")
    stance = NOMINAL_STANCE[rep]
    if not stance_allows(stance, world.terrain(l.x, l.y)):
        return ()
    if rep == Rep.WALK:
        return (HDState(l.x, l.y, l.theta, Stance.STAND, 0),)
    return tuple(HDState(l.x, l.y, theta, Stance.CROUCH, 0) for theta in range(N_THETA))


def cross_project(world: World, i: Rep, j: Rep, s: LDState) -> Tuple[LDState, ...]:
    """Map a state of rep i into rep j through shared nominal preimages.

    Extensionally equal to {project(j, h) for h in inverse_project(i, s)}
    restricted to valid states of rep j, deduplicated, in deterministic order.
    """
    if i == j or Rep.HD in (i, j):
        raise ValueError("cross projection requires two distinct low-dimensional reps")
    seen = []
    for h in inverse_project(world, i, s):
        l = project(j, h)
        if ld_state_valid(world, l) and l not in seen:
            seen.append(l)
    return tuple(seen)
