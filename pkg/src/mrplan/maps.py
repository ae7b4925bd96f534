"""Curated map suite and the seeded random map generator.

Crafted maps live under assets/maps with a sidecar NOTES.md documenting each
map's intended route class; oracle certifications are committed under
assets/goldens and regenerated with `python -m mrplan.cli oracle`.
"""
from __future__ import annotations

import random
from importlib import resources
from typing import Dict, Optional, Tuple

from .world import FREE, LOW, RUBBLE, WALL, World, load_map

CRAFTED = ("corridor", "low_tunnel", "rubble_band", "three_zone", "walled", "dominance6")


def asset_text(relpath: str) -> str:
    return resources.files("mrplan").joinpath("assets", *relpath.split("/")).read_text()


def load_crafted(name: str) -> World:
    if name not in CRAFTED:
        raise KeyError(f"unknown crafted map {name!r}; choose from {CRAFTED}")
    return load_map(asset_text(f"maps/{name}.txt"))


def gen_random_map(
    seed: int,
    width: int,
    height: int,
    densities: Optional[Dict[str, float]] = None,
    start: Optional[Tuple[int, int]] = None,
    goal: Optional[Tuple[int, int]] = None,
) -> World:
    """Seeded terrain mix; the border is forced WALL and the designated
    start/goal cells (corners by default) forced FREE."""
    densities = densities or {}
    p_wall = densities.get("wall", 0.0)
    p_low = densities.get("low", 0.0)
    p_rubble = densities.get("rubble", 0.0)
    if min(p_wall, p_low, p_rubble) < 0 or p_wall + p_low + p_rubble > 1:
        raise ValueError("densities must be non-negative and sum to at most 1")
    start = start or (1, 1)
    goal = goal or (width - 2, height - 2)
    rng = random.Random(seed)
    cells = []
    for y in range(height):
        for x in range(width):
            if x in (0, width - 1) or y in (0, height - 1):
                cells.append(WALL)
                continue
            if (x, y) in (start, goal):
                cells.append(FREE)
                continue
            r = rng.random()
            if r < p_wall:
                cells.append(WALL)
            elif r < p_wall + p_low:
                cells.append(LOW)
            elif r < p_wall + p_low + p_rubble:
                cells.append(RUBBLE)
            else:
                cells.append(FREE)
    return World(width, height, tuple(cells))
