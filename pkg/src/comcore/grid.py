"""Grid workspace geometry.

Cells are integer (x, y) pairs with x growing east and y growing north; the
origin is the south-west cell. The 3x3 neighbourhood around a cell (the
"collision grid") is walked anticlockwise starting from the east cell.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from typing import FrozenSet, List, NamedTuple, Tuple

from .errors import BoundsError, GridError, RingError


class Cell(NamedTuple):
    x: int
    y: int


class Heading(IntEnum):
    # clockwise order, so right = +1 and left = -1 modulo 4
    NORTH = 0
    EAST = 1
    SOUTH = 2
    WEST = 3

    @property
    def delta(self) -> Tuple[int, int]:
        return _HEADING_DELTAS[self]

    @property
    def letter(self) -> str:
        return self.name[0]

    def left(self) -> "Heading":
        return Heading((self - 1) % 4)

    def right(self) -> "Heading":
        return Heading((self + 1) % 4)

    @classmethod
    def from_letter(cls, letter: str) -> "Heading":
        try:
            return _HEADING_LETTERS[letter.upper()]
        except (KeyError, AttributeError):
            raise ValueError(f"unknown heading {letter!r}; expected one of N, E, S, W") from None


_HEADING_DELTAS = {
    Heading.NORTH: (0, 1),
    Heading.EAST: (1, 0),
    Heading.SOUTH: (0, -1),
    Heading.WEST: (-1, 0),
}
_HEADING_LETTERS = {h.name[0]: h for h in Heading}


@dataclass(frozen=True)
class GridSpec:
    cols: int
    rows: int
    cell_size_m: float = 10.0
    blocked: FrozenSet[Cell] = field(default_factory=frozenset)

    def __post_init__(self):
        if int(self.cols) != self.cols or self.cols < 1:
            raise GridError(f"cols must be a positive integer, got {self.cols!r}")
        if int(self.rows) != self.rows or self.rows < 1:
            raise GridError(f"rows must be a positive integer, got {self.rows!r}")
        if not self.cell_size_m > 0:
            raise GridError(f"cell_size_m must be positive, got {self.cell_size_m!r}")
        blocked = frozenset(Cell(*c) for c in self.blocked)
        for c in blocked:
            if not self.in_bounds(c):
                raise BoundsError(f"blocked cell {tuple(c)} is outside the {self.cols}x{self.rows} grid")
        object.__setattr__(self, "blocked", blocked)

    @property
    def cell_count(self) -> int:
        return self.cols * self.rows

    def in_bounds(self, c) -> bool:
        return 0 <= c[0] < self.cols and 0 <= c[1] < self.rows

    def passable(self, c) -> bool:
        return self.in_bounds(c) and Cell(*c) not in self.blocked

    def cells(self) -> List[Cell]:
        """All cells in row-major order (south row first)."""
        return [Cell(x, y) for y in range(self.rows) for x in range(self.cols)]


def cell_center(spec: GridSpec, c) -> Tuple[float, float]:
    if not spec.in_bounds(c):
        raise BoundsError(f"cell {tuple(c)} is outside the {spec.cols}x{spec.rows} grid")
    size = spec.cell_size_m
    return ((c[0] + 0.5) * size, (c[1] + 0.5) * size)


def neighbors(spec: GridSpec, c: Cell, h: Heading) -> List[Tuple[Cell, Heading]]:
    """Successor states reachable in one step: forward, left, right.

    A left or right move turns the heading and advances one cell in the new
    direction. Reversing is never possible.
    """
    out = []
    for nh in (h, h.left(), h.right()):
        nxt = Cell(c[0] + nh.delta[0], c[1] + nh.delta[1])
        if spec.passable(nxt):
            out.append((nxt, nh))
    return out


def chebyshev(a, b) -> int:
    return max(abs(a[0] - b[0]), abs(a[1] - b[1]))


def manhattan(a, b) -> int:
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


# E, NE, N, NW, W, SW, S, SE
RING_OFFSETS: Tuple[Tuple[int, int], ...] = (
    (1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1),
)
_RING_INDEX = {off: i for i, off in enumerate(RING_OFFSETS)}
CARDINAL_RING_INDICES = frozenset((0, 2, 4, 6))


def ring_cells(center) -> List[Cell]:
    cx, cy = center
    return [Cell(cx + dx, cy + dy) for dx, dy in RING_OFFSETS]


def ring_index(center, c) -> int:
    """Position of ``c`` in the anticlockwise ring around ``center``."""
    try:
        return _RING_INDEX[(c[0] - center[0], c[1] - center[1])]
    except KeyError:
        raise RingError(f"cell {tuple(c)} is not on the ring around {tuple(center)}") from None


def ring_count(center, from_cell, to_cell) -> int:
    """Number of anticlockwise ring steps from ``from_cell`` to ``to_cell``."""
    return (ring_index(center, to_cell) - ring_index(center, from_cell)) % 8


def ring_step(center, c) -> Cell:
    """The ring cell one step anticlockwise of ``c``."""
    dx, dy = RING_OFFSETS[(ring_index(center, c) + 1) % 8]
    return Cell(center[0] + dx, center[1] + dy)
