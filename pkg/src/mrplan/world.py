"""Grid world, terrain rules, action costs and goal specification."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

from .states import AnyState, HDState, LDState, N_PHASE, N_THETA, Rep, Stance

FREE = "."
WALL = "#"
LOW = "~"
RUBBLE = "%"

TERRAIN_CHARS = (FREE, WALL, LOW, RUBBLE)

# Heading -> cell delta, 45-degree steps, y grows downward.
DIR8 = ((1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1))
CARDINAL_THETAS = (0, 2, 4, 6)

# Terrain a stance may occupy. Rubble never allows a crouch; low clearance
# never allows standing.
STAND_TERRAIN = frozenset((FREE, RUBBLE))
CROUCH_TERRAIN = frozenset((FREE, LOW))


class MapFormatError(ValueError):
    """Raised by load_map on malformed map text."""


@dataclass(frozen=True)
class World:
    """Immutable rectangular grid; out-of-bounds cells read as WALL."""

    width: int
    height: int
    cells: Tuple[str, ...]

    def in_bounds(self, x: int, y: int) -> bool:
        return 0 <= x < self.width and 0 <= y < self.height

    def terrain(self, x: int, y: int) -> str:
        if not self.in_bounds(x, y):
            return WALL
        return self.cells[y * self.width + x]

    def iter_cells(self):
        for y in range(self.height):
            for x in range(self.width):
                yield x, y, self.cells[y * self.width + x]


def load_map(text: str) -> World:
    """Parse a map: first line "width height", then height rows of terrain chars."""
    lines = text.splitlines()
    if not lines:
        raise MapFormatError("empty map text")
    header = lines[0].split()
    if len(header) != 2:
        raise MapFormatError(f"header must be 'width height', got {lines[0]!r}")
    try:
        width, height = int(header[0]), int(header[1])
    except ValueError as e:
        raise MapFormatError(f"non-integer dimensions in header {lines[0]!r}") from e
    if width <= 0 or height <= 0:
        raise MapFormatError(f"dimensions must be positive, got {width}x{height}")
    rows = lines[1:]
    if len(rows) < height:
        raise MapFormatError(f"expected {height} rows, got {len(rows)}")
    cells = []
    for y in range(height):
        row = rows[y]
        if len(row) != width:
            raise MapFormatError(f"row {y + 1}: length {len(row)} != width {width}")
        for x, ch in enumerate(row):
            if ch not in TERRAIN_CHARS:
                raise MapFormatError(f"row {y + 1}, column {x + 1}: unknown terrain {ch!r}")
            cells.append(ch)
    return World(width, height, tuple(cells))


def dump_map(world: World) -> str:
    rows = [f"{world.width} {world.height}"]
    for y in range(world.height):
        rows.append("".join(world.cells[y * world.width : (y + 1) * world.width]))
    return "\n".join(rows) + "\n"


class CostTableError(ValueError):
    """Raised for non-positive or otherwise inconsistent cost tables."""


@dataclass(frozen=True)
class CostTable:
    """Positive integer action costs shared by the full-body and mode spaces.

    The same fields price a mode action and its full-body mirror (a stand
    step costs walk_step in both spaces), which keeps the optimal projected
    cost a lower bound on the optimal full-body cost by construction.
    """

    walk_step: int = 2
    rotate: int = 1
    crawl_step: int = 3
    stance_change: int = 5
    rep_switch: int = 5
    rubble_substep: int = 4
    weight_shift: int = 1

    def __post_init__(self):
        for name in (
            "walk_step",
            "rotate",
            "crawl_step",
            "stance_change",
            "rep_switch",
            "rubble_substep",
            "weight_shift",
        ):
            v = getattr(self, name)
            if not isinstance(v, int) or v <= 0:
                raise CostTableError(f"{name} must be a positive integer, got {v!r}")

    @property
    def min_cell_move(self) -> int:
        """Cheapest cost of any cell-changing action in any space."""
        return min(self.walk_step, self.crawl_step, self.rubble_substep)

    @property
    def min_in_place(self) -> int:
        return min(self.rotate, self.weight_shift)


@dataclass(frozen=True)
class GoalSpec:
    """Goal set: every state (any representation/heading/stance/phase) at one cell."""

    x: int
    y: int

    @property
    def cell(self) -> Tuple[int, int]:
        return (self.x, self.y)


def make_goal(world: World, x: int, y: int) -> GoalSpec:
    if world.terrain(x, y) == WALL:
        raise ValueError(f"goal cell ({x},{y}) is a wall")
    return GoalSpec(x, y)


def is_goal(spec: GoalSpec, s: AnyState) -> bool:
    return s.x == spec.x and s.y == spec.y


def stance_allows(stance: Stance, terrain: str) -> bool:
    if stance == Stance.STAND:
        return terrain in STAND_TERRAIN
    return terrain in CROUCH_TERRAIN


def hd_state_valid(world: World, s: HDState) -> bool:
    return (
        world.in_bounds(s.x, s.y)
        and 0 <= s.theta < N_THETA
        and 0 <= s.phase < N_PHASE
        and stance_allows(s.stance, world.terrain(s.x, s.y))
    )


def ld_state_valid(world: World, s: LDState) -> bool:
    """A mode state is valid iff its nominal full-body lift can occupy the cell."""
    if not world.in_bounds(s.x, s.y):
        return False
    t = world.terrain(s.x, s.y)
    if s.rep == Rep.WALK:
        return s.theta is not None and 0 <= s.theta < N_THETA and t in STAND_TERRAIN
    if s.rep == Rep.CRAWL:
        return s.theta is None and t in CROUCH_TERRAIN
    return False


def state_valid(world: World, s: AnyState) -> bool:
    if isinstance(s, HDState):
        return hd_state_valid(world, s)
    return ld_state_valid(world, s)
