"""Conflict detection, encounter classification and vessel labelling.

A conflict is two agents on the same cell at the same timestep. The cells
each agent occupies one step before and after form the collision window;
counting anticlockwise around the conflict cell from one agent's previous
cell to the other's tells head-on (4) from crossing (2 or 6) and, for
crossings, which vessel gives way.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Tuple

from .errors import RingError, RoleNotApplicable, UnclassifiableConflict, WindowUnavailable
from .grid import CARDINAL_RING_INDICES, Cell, ring_count, ring_index
from .pathfinder import Solution


class ConflictType(Enum):
    HEAD_ON = "head-on"
    CROSSING = "crossing"


class VesselRole(Enum):
    STAND_ON = "stand-on"
    GIVE_WAY = "give-way"


@dataclass(frozen=True)
class Conflict:
    agent_i: int
    agent_j: int
    vertex: Cell
    t: int
    ctype: ConflictType


@dataclass(frozen=True)
class CollisionWindow:
    """Both agents' cells at t-1, t and t+1 around a conflict at ``vertex``."""

    agent_i: int
    agent_j: int
    t: int
    vertex: Cell
    prev_i: Cell
    next_i: Cell
    prev_j: Cell
    next_j: Cell

    def cells(self, agent_id: int) -> Tuple[Cell, Cell, Cell]:
        if agent_id == self.agent_i:
            return (self.prev_i, self.vertex, self.next_i)
        if agent_id == self.agent_j:
            return (self.prev_j, self.vertex, self.next_j)
        raise KeyError(agent_id)

    def swapped(self) -> "CollisionWindow":
        return CollisionWindow(self.agent_j, self.agent_i, self.t, self.vertex,
                               self.prev_j, self.next_j, self.prev_i, self.next_i)


def first_collision(solution: Solution) -> Optional[Tuple[int, int, int, Cell]]:
    """Earliest (t, agent_i, agent_j, cell) with two agents on one cell.

    Ties at the same t go to the smallest (agent_i, agent_j) pair; with more
    than two agents on a cell only the two lowest ids are reported. Agents
    leave the grid after their last waypoint.
    """
    horizon = max(len(p) for p in solution.paths)
    for t in range(horizon):
        occupants: Dict[Cell, List[int]] = {}
        for p in solution.paths:
            if t < len(p.waypoints):
                occupants.setdefault(p.waypoints[t], []).append(p.agent_id)
        best = None
        for cell, ids in occupants.items():
            if len(ids) > 1:
                pair = tuple(sorted(ids)[:2])
                if best is None or pair < best[0]:
                    best = (pair, cell)
        if best is not None:
            (i, j), cell = best
            return t, i, j, cell
    return None


def collision_window(solution: Solution, t: int, agent_i: int, agent_j: int) -> CollisionWindow:
    pi, pj = solution.path(agent_i), solution.path(agent_j)
    vertex = pi.at(t)
    if t < 1:
        raise WindowUnavailable(
            f"agents {agent_i} and {agent_j} collide at {tuple(vertex)} at t=0; no previous step exists")
    for p in (pi, pj):
        if p.at(t + 1) is None:
            raise WindowUnavailable(
                f"agents {agent_i} and {agent_j} collide at {tuple(vertex)} at t={t}, "
                f"the last waypoint of agent {p.agent_id}; no next step exists")
    return CollisionWindow(agent_i, agent_j, t, vertex,
                           pi.at(t - 1), pi.at(t + 1), pj.at(t - 1), pj.at(t + 1))


def validate(solution: Solution) -> Optional[Tuple[Conflict, CollisionWindow]]:
    """Return the first conflict in ``solution`` with its window, or None."""
    hit = first_collision(solution)
    if hit is None:
        return None
    t, i, j, cell = hit
    window = collision_window(solution, t, i, j)
    return Conflict(i, j, cell, t, classify(window)), window


def _checked_count(window: CollisionWindow) -> int:
    v = window.vertex
    try:
        for c in (window.prev_i, window.prev_j, window.next_i, window.next_j):
            ring_index(v, c)
        for c in (window.prev_i, window.prev_j):
            if ring_index(v, c) not in CARDINAL_RING_INDICES:
                raise UnclassifiableConflict(
                    f"previous cell {tuple(c)} is diagonal to the conflict cell {tuple(v)}", window)
    except RingError as exc:
        raise UnclassifiableConflict(f"collision window does not fit the collision grid: {exc}", window) from None
    return ring_count(v, window.prev_i, window.prev_j)


def classify(window: CollisionWindow) -> ConflictType:
    n = _checked_count(window)
    if n == 4:
        return ConflictType.HEAD_ON
    if n in (2, 6):
        return ConflictType.CROSSING
    raise UnclassifiableConflict(f"ring count {n} matches no encounter type", window)


def label(window: CollisionWindow) -> Tuple[VesselRole, VesselRole]:
    """Roles (agent_i, agent_j) for a crossing encounter."""
    n = _checked_count(window)
    if n == 6:
        return VesselRole.STAND_ON, VesselRole.GIVE_WAY
    if n == 2:
        return VesselRole.GIVE_WAY, VesselRole.STAND_ON
    if n == 4:
        raise RoleNotApplicable("head-on encounters have no stand-on or give-way vessel")
    raise UnclassifiableConflict(f"ring count {n} matches no encounter type", window)
