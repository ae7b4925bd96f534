"""SVG rendering of maps, paths and regions (no drawing dependencies)."""
from __future__ import annotations

from typing import List, Optional, Tuple

from .executive import split_segments
from .search import Path
from .states import Controller, HDRegion
from .world import FREE, LOW, RUBBLE, WALL, World

CELL = 24

TERRAIN_FILL = {FREE: "#ffffff", WALL: "#000000", LOW: "#9b59b6", RUBBLE: "#e67e22"}
CTRL_STROKE = {
    Controller.WALK_CTRL: "#1f77b4",
    Controller.CRAWL_CTRL: "#2ca02c",
    Controller.FULLBODY_CTRL: "#d62728",
}


def _center(x: int, y: int) -> Tuple[float, float]:
    return (x + 0.5) * CELL, (y + 0.5) * CELL


def render_svg(
    world: World,
    path: Optional[Path] = None,
    regions: Tuple[HDRegion, ...] = (),
    start: Optional[Tuple[int, int]] = None,
    goal: Optional[Tuple[int, int]] = None,
) -> str:
    w, h = world.width * CELL, world.height * CELL
    parts: List[str] = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">'
    ]
    for x, y, t in world.iter_cells():
        parts.append(
            f'<rect x="{x * CELL}" y="{y * CELL}" width="{CELL}" height="{CELL}" '
            f'fill="{TERRAIN_FILL[t]}" stroke="#cccccc" stroke-width="1"/>'
        )
    for r in regions:
        x0 = (r.x - r.radius) * CELL
        y0 = (r.y - r.radius) * CELL
        side = (2 * r.radius + 1) * CELL
        parts.append(
            f'<rect x="{x0}" y="{y0}" width="{side}" height="{side}" fill="none" '
            f'stroke="#555555" stroke-width="2" stroke-dasharray="6,4"/>'
        )
    if path is not None and path.steps:
        cur = path.start
        for seg in split_segments(path):
            pts = [_center(cur.x, cur.y)]
            for t in seg.steps:
                pts.append(_center(t.dst.x, t.dst.y))
                cur = t.dst
            coords = " ".join(f"{px:.1f},{py:.1f}" for px, py in pts)
            parts.append(
                f'<polyline points="{coords}" fill="none" '
                f'stroke="{CTRL_STROKE[seg.ctrl]}" stroke-width="3" opacity="0.85"/>'
            )
    for cell, color in ((start, "#1f77b4"), (goal, "#d62728")):
        if cell is not None:
            cx, cy = _center(*cell)
            parts.append(f'<circle cx="{cx:.1f}" cy="{cy:.1f}" r="{CELL * 0.3:.1f}" fill="{color}"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
