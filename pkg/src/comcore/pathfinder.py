"""Phase-1: independent shortest paths per agent.

States are (cell, heading) pairs and every move costs one timestep. A* uses
the Manhattan distance to the goal, which is consistent under these moves.
"""
from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Sequence, Tuple

from .errors import ScenarioError, Unreachable
from .grid import Cell, GridSpec, Heading, manhattan, neighbors


def default_heading(start, goal) -> Heading:
    """Heading along the largest goal-ward displacement (ties: E, N, W, S)."""
    dx = goal[0] - start[0]
    dy = goal[1] - start[1]
    candidates = [
        (max(dx, 0), Heading.EAST),
        (max(dy, 0), Heading.NORTH),
        (max(-dx, 0), Heading.WEST),
        (max(-dy, 0), Heading.SOUTH),
    ]
    best = max(c[0] for c in candidates)
    return next(h for d, h in candidates if d == best)


@dataclass(frozen=True)
class AgentSpec:
    id: int
    start: Cell
    goal: Cell
    start_heading: Optional[Heading] = None

    def __post_init__(self):
        object.__setattr__(self, "start", Cell(*self.start))
        object.__setattr__(self, "goal", Cell(*self.goal))
        if self.start_heading is None:
            object.__setattr__(self, "start_heading", default_heading(self.start, self.goal))
        else:
            object.__setattr__(self, "start_heading", Heading(self.start_heading))


@dataclass(frozen=True)
class TimedPath:
    """``waypoints[t]`` is the agent's cell at timestep ``t``."""

    agent_id: int
    waypoints: Tuple[Cell, ...]

    def __post_init__(self):
        wps = tuple(Cell(*c) for c in self.waypoints)
        if not wps:
            raise ValueError(f"agent {self.agent_id}: a path needs at least one waypoint")
        object.__setattr__(self, "waypoints", wps)

    def __len__(self):
        return len(self.waypoints)

    @property
    def moves(self) -> int:
        return len(self.waypoints) - 1

    @property
    def start(self) -> Cell:
        return self.waypoints[0]

    @property
    def goal(self) -> Cell:
        return self.waypoints[-1]

    def at(self, t: int) -> Optional[Cell]:
        """Cell at timestep ``t``; None once the agent has left the grid."""
        if 0 <= t < len(self.waypoints):
            return self.waypoints[t]
        return None


@dataclass(frozen=True)
class Solution:
    """One path per agent, kept sorted by agent id."""

    paths: Tuple[TimedPath, ...]

    def __post_init__(self):
        paths = tuple(sorted(self.paths, key=lambda p: p.agent_id))
        ids = [p.agent_id for p in paths]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate agent ids in solution: {ids}")
        object.__setattr__(self, "paths", paths)

    def __len__(self):
        return len(self.paths)

    def __iter__(self):
        return iter(self.paths)

    def path(self, agent_id: int) -> TimedPath:
        for p in self.paths:
            if p.agent_id == agent_id:
                return p
        raise KeyError(agent_id)

    @property
    def agent_ids(self) -> Tuple[int, ...]:
        return tuple(p.agent_id for p in self.paths)

    @property
    def cost(self) -> int:
        return sum(p.moves for p in self.paths)

    @property
    def makespan(self) -> int:
        return max(len(p) for p in self.paths) - 1

    def replace(self, new_paths: Iterable[TimedPath]) -> "Solution":
        updated = {p.agent_id: p for p in new_paths}
        return Solution(tuple(updated.pop(p.agent_id, p) for p in self.paths))


def astar(spec: GridSpec, agent: AgentSpec) -> TimedPath:
    """Shortest heading-constrained path for a single agent.

    Open-list ties on f are broken by smaller h, then by successor order
    (forward, left, right), then by insertion order, so the result is fully
    deterministic.
    """
    start, goal = agent.start, agent.goal
    for label, c in (("start", start), ("goal", goal)):
        if not spec.passable(c):
            raise ScenarioError(f"agent {agent.id}: {label} {tuple(c)} is out of bounds or blocked")
    if start == goal:
        return TimedPath(agent.id, (start,))

    counter = itertools.count()
    root = (start, agent.start_heading)
    h0 = manhattan(start, goal)
    open_heap = [(h0, h0, 0, next(counter), root)]
    g_cost: Dict[tuple, int] = {root: 0}
    parent: Dict[tuple, Optional[tuple]] = {root: None}
    closed = set()

    while open_heap:
        _, _, _, _, state = heapq.heappop(open_heap)
        if state in closed:
            continue
        closed.add(state)
        cell, heading = state
        if cell == goal:
            return TimedPath(agent.id, _unwind(parent, state))
        g = g_cost[state]
        for nxt in neighbors(spec, cell, heading):
            if nxt in closed:
                continue
            ng = g + 1
            if ng < g_cost.get(nxt, ng + 1):
                g_cost[nxt] = ng
                parent[nxt] = state
                h = manhattan(nxt[0], goal)
                heapq.heappush(open_heap, (ng + h, h, _move_rank(heading, nxt[1]), next(counter), nxt))
    raise Unreachable(agent.id)


def _move_rank(heading: Heading, new_heading: Heading) -> int:
    # forward < left < right
    if new_heading == heading:
        return 0
    return 1 if new_heading == heading.left() else 2


def _unwind(parent, state) -> Tuple[Cell, ...]:
    cells = []
    while state is not None:
        cells.append(state[0])
        state = parent[state]
    return tuple(reversed(cells))


def plan_all(spec: GridSpec, agents: Sequence[AgentSpec]) -> Solution:
    """Run A* for every agent independently."""
    return Solution(tuple(astar(spec, a) for a in agents))
