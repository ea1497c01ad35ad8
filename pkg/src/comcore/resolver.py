"""Phase-2: splice COLREGs manoeuvres into conflicting paths.

Each resolved conflict adds one node to the solution list. Head-on vessels
both detour anticlockwise (to starboard) around the conflict cell; in a
crossing the stand-on vessel keeps its cells and the give-way vessel swings
round behind it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .conflicts import (
    CollisionWindow,
    Conflict,
    ConflictType,
    VesselRole,
    label,
    validate,
)
from .errors import (
    BoundaryResolutionError,
    ComcoreError,
    IterationLimitExceeded,
    SpliceError,
)
from .grid import Cell, GridSpec, chebyshev, ring_step
from .pathfinder import Solution, TimedPath

DEFAULT_MAX_ITERATIONS = 100


@dataclass(frozen=True)
class InsertionList:
    agent_id: int
    splice_start_t: int
    cells: Tuple[Cell, ...]

    def __post_init__(self):
        cells = tuple(Cell(*c) for c in self.cells)
        for a, b in zip(cells, cells[1:]):
            if chebyshev(a, b) != 1:
                raise SpliceError(f"agent {self.agent_id}: insertion cells {tuple(a)} and {tuple(b)} are not adjacent")
        object.__setattr__(self, "cells", cells)

    def __len__(self):
        return len(self.cells)


@dataclass(frozen=True)
class SolutionNode:
    solution: Solution
    depth: int = 0
    parent: Optional["SolutionNode"] = field(default=None, repr=False)
    resolved_conflict: Optional[Conflict] = None
    window: Optional[CollisionWindow] = None
    roles: Optional[Dict[int, VesselRole]] = None
    insertions: Tuple[InsertionList, ...] = ()


def _ring_walk(vertex: Cell, start: Cell, stop: Cell, at_least_one_step: bool = False) -> List[Cell]:
    cells = [start]
    if at_least_one_step:
        cells.append(ring_step(vertex, start))
    while cells[-1] != stop:
        cells.append(ring_step(vertex, cells[-1]))
    return cells


def _check_cells(spec: Optional[GridSpec], agent_id: int, vertex: Cell, cells) -> None:
    if spec is None:
        return
    for c in cells:
        if not spec.passable(c):
            raise BoundaryResolutionError(
                f"agent {agent_id}: manoeuvre around {tuple(vertex)} needs cell {tuple(c)}, "
                "which is outside the grid or blocked")


def head_on_insertion(window: CollisionWindow, agent_id: int, spec: Optional[GridSpec] = None) -> InsertionList:
    """Anticlockwise walk round the ring from the agent's previous cell to its next one."""
    prev, vertex, nxt = window.cells(agent_id)
    # an agent doubling back through the vertex has to go all the way round
    cells = _ring_walk(vertex, prev, nxt, at_least_one_step=(prev == nxt))
    _check_cells(spec, agent_id, vertex, cells)
    return InsertionList(agent_id, window.t - 1, tuple(cells))


def crossing_insertions(window: CollisionWindow, roles: Tuple[VesselRole, VesselRole],
                        spec: Optional[GridSpec] = None) -> Tuple[InsertionList, InsertionList]:
    """(stand-on list, give-way list) for a crossing encounter."""
    if roles[0] == VesselRole.STAND_ON:
        stand, give = window.agent_i, window.agent_j
    else:
        stand, give = window.agent_j, window.agent_i
    s_prev, vertex, s_next = window.cells(stand)
    g_prev, _, g_next = window.cells(give)

    cells = _ring_walk(vertex, g_prev, s_prev)
    if cells[-1] != g_next:
        cells += [vertex, g_next]
    _check_cells(spec, give, vertex, cells)
    return (InsertionList(stand, window.t - 1, (s_prev, vertex, s_next)),
            InsertionList(give, window.t - 1, tuple(cells)))


def splice(path: TimedPath, t: int, insertion: InsertionList) -> TimedPath:
    """Replace the waypoints at t-1, t, t+1 with the insertion list."""
    wps = path.waypoints
    if t < 1 or t + 1 >= len(wps):
        raise SpliceError(f"agent {path.agent_id}: no t-1..t+1 window at t={t} in a path of {len(wps)} waypoints")
    cells = insertion.cells
    if cells[0] != wps[t - 1] or cells[-1] != wps[t + 1]:
        raise SpliceError(
            f"agent {path.agent_id}: insertion runs {tuple(cells[0])}..{tuple(cells[-1])} "
            f"but the path has {tuple(wps[t - 1])}..{tuple(wps[t + 1])} around t={t}")
    return TimedPath(path.agent_id, wps[:t - 1] + cells + wps[t + 2:])


def resolution_lists(conflict: Conflict, window: CollisionWindow, spec: Optional[GridSpec] = None):
    """Insertion lists and roles (None for head-on) for one conflict."""
    if conflict.ctype == ConflictType.HEAD_ON:
        lists = (head_on_insertion(window, window.agent_i, spec),
                 head_on_insertion(window, window.agent_j, spec))
        return lists, None
    roles = label(window)
    return crossing_insertions(window, roles, spec), {window.agent_i: roles[0], window.agent_j: roles[1]}


def resolve(solution: Solution, conflict: Conflict, window: CollisionWindow,
            spec: Optional[GridSpec] = None) -> Solution:
    lists, _ = resolution_lists(conflict, window, spec)
    return _apply(solution, conflict.t, lists)


def _apply(solution: Solution, t: int, lists) -> Solution:
    return solution.replace(splice(solution.path(L.agent_id), t, L) for L in lists)


def phase2(initial: Solution, spec: Optional[GridSpec] = None,
           max_iterations: int = DEFAULT_MAX_ITERATIONS) -> Tuple[SolutionNode, List[SolutionNode]]:
    """Validate/resolve until the solution is conflict-free.

    Returns the goal node and the whole solution list, root first. Errors
    carry the chain built so far in their ``chain`` attribute.
    """
    node = SolutionNode(initial)
    chain = [node]
    try:
        while True:
            found = validate(node.solution)
            if found is None:
                return node, chain
            if len(chain) > max_iterations:
                raise IterationLimitExceeded(
                    f"still conflicting after {max_iterations} resolutions "
                    f"(next: agents {found[0].agent_i} and {found[0].agent_j} at t={found[0].t})", chain)
            conflict, window = found
            lists, roles = resolution_lists(conflict, window, spec)
            node = SolutionNode(_apply(node.solution, conflict.t, lists), node.depth + 1, node,
                                conflict, window, roles, tuple(lists))
            chain.append(node)
    except ComcoreError as exc:
        if getattr(exc, "chain", None) is None:
            exc.chain = chain
        raise
