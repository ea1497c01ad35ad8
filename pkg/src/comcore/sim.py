"""Lockstep online execution and an independent safety audit.

Agents follow their phase-1 paths. Whenever two agents are within the
trigger distance and their remaining paths conflict, phase-2 is run on the
remaining path suffixes of every agent in a triggered pair and the result
replaces their plans from the current timestep on.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from .conflicts import ConflictType, VesselRole
from .errors import ComcoreError, IterationLimitExceeded
from .grid import Cell, GridSpec
from .pathfinder import AgentSpec, Solution, TimedPath, plan_all
from .resolver import DEFAULT_MAX_ITERATIONS, SolutionNode, phase2


class SwapPolicy(Enum):
    IGNORE = "ignore"
    FLAG = "flag"
    # extension beyond the vertex-only conflict model: hold the lower id one step
    DELAY = "delay"


@dataclass(frozen=True)
class SimConfig:
    trigger_distance_cells: int = 3
    swap_policy: SwapPolicy = SwapPolicy.FLAG
    max_iterations: int = DEFAULT_MAX_ITERATIONS

    def __post_init__(self):
        if int(self.trigger_distance_cells) != self.trigger_distance_cells or self.trigger_distance_cells < 1:
            raise ValueError(f"trigger_distance_cells must be a positive integer, got {self.trigger_distance_cells!r}")
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise ValueError(f"max_iterations must be a positive integer, got {self.max_iterations!r}")
        object.__setattr__(self, "swap_policy", SwapPolicy(self.swap_policy))


@dataclass(frozen=True)
class ResolutionRecord:
    """One applied resolution, in absolute timesteps.

    ``window`` maps agent id to its (prev, vertex, next) cells and
    ``insertions`` maps agent id to the cells spliced in their place.
    """

    t: int
    vertex: Cell
    agents: Tuple[int, int]
    ctype: ConflictType
    roles: Optional[Dict[int, VesselRole]]
    window: Dict[int, Tuple[Cell, ...]]
    insertions: Dict[int, Tuple[Cell, ...]]

    @classmethod
    def from_node(cls, node: SolutionNode, offset: int = 0) -> "ResolutionRecord":
        c, w = node.resolved_conflict, node.window
        pair = (c.agent_i, c.agent_j)
        return cls(
            t=c.t + offset,
            vertex=c.vertex,
            agents=pair,
            ctype=c.ctype,
            roles=dict(node.roles) if node.roles else None,
            window={a: w.cells(a) for a in pair},
            insertions={L.agent_id: L.cells for L in node.insertions},
        )


@dataclass
class SimTrace:
    paths: Dict[int, Tuple[Cell, ...]]
    triggers: List[Tuple[int, Tuple[int, int]]] = field(default_factory=list)
    resolutions: List[ResolutionRecord] = field(default_factory=list)
    status: Dict[int, str] = field(default_factory=dict)
    holds: List[Tuple[int, int]] = field(default_factory=list)
    swap_policy: SwapPolicy = SwapPolicy.FLAG

    @property
    def horizon(self) -> int:
        return max(len(p) for p in self.paths.values())

    @property
    def snapshots(self) -> List[Tuple[Optional[Cell], ...]]:
        ids = sorted(self.paths)
        return [tuple(self.paths[a][t] if t < len(self.paths[a]) else None for a in ids)
                for t in range(self.horizon)]

    def solution(self) -> Solution:
        return Solution(tuple(TimedPath(a, p) for a, p in self.paths.items()))


def _chebyshev(a, b):
    return max(abs(a[0] - b[0]), abs(a[1] - b[1]))


def _pair_conflicts(a: List[Cell], b: List[Cell], tau: int) -> bool:
    return any(a[t] == b[t] for t in range(tau + 1, min(len(a), len(b))))


def _first_swap(a: List[Cell], b: List[Cell], tau: int) -> Optional[int]:
    for t in range(tau, min(len(a), len(b)) - 1):
        if a[t] == b[t + 1] and b[t] == a[t + 1] and a[t] != a[t + 1]:
            return t
        if a[t + 1] == b[t + 1]:
            return None
    return None


def run_sim(spec: GridSpec, agents: Sequence[AgentSpec], config: SimConfig = SimConfig()) -> SimTrace:
    initial = plan_all(spec, agents)
    plans: Dict[int, List[Cell]] = {p.agent_id: list(p.waypoints) for p in initial}
    trace = SimTrace(paths={}, swap_policy=config.swap_policy)
    budget = config.max_iterations
    tau = 0
    try:
        while any(len(p) - 1 > tau for p in plans.values()):
            _step(spec, plans, tau, config, trace)
            if len(trace.resolutions) > budget:
                raise IterationLimitExceeded(
                    f"simulation applied {len(trace.resolutions)} resolutions, over the limit of {budget}")
            tau += 1
    except ComcoreError as exc:
        exc.timestep = tau
        exc.args = (f"timestep {tau}: {exc}",) + exc.args[1:]
        trace.paths = {a: tuple(p[:tau + 1]) for a, p in plans.items()}
        trace.status = {a: ("arrived" if len(p) - 1 <= tau else "aborted") for a, p in plans.items()}
        exc.trace = trace
        raise
    trace.paths = {a: tuple(p) for a, p in plans.items()}
    trace.status = {a: "arrived" for a in plans}
    return trace


def _step(spec, plans, tau, config, trace) -> None:
    """Apply every trigger due at timestep ``tau`` until none remain."""
    for _ in range(config.max_iterations + 1):
        present = sorted(a for a, p in plans.items() if len(p) > tau)
        close = [(a, b) for k, a in enumerate(present) for b in present[k + 1:]
                 if _chebyshev(plans[a][tau], plans[b][tau]) <= config.trigger_distance_cells]

        if config.swap_policy == SwapPolicy.DELAY:
            for a, b in close:
                s = _first_swap(plans[a], plans[b], tau)
                if s is not None and s > tau and not _pair_conflicts(plans[a], plans[b], tau):
                    plans[a].insert(tau, plans[a][tau])
                    trace.holds.append((tau, a))

        triggered = [(a, b) for a, b in close if _pair_conflicts(plans[a], plans[b], tau)]
        if not triggered:
            return
        trace.triggers.extend((tau, pair) for pair in triggered)
        group = sorted({a for pair in triggered for a in pair})
        suffix = Solution(tuple(TimedPath(a, plans[a][tau:]) for a in group))
        goal, chain = phase2(suffix, spec, config.max_iterations)
        trace.resolutions.extend(ResolutionRecord.from_node(n, tau) for n in chain[1:])
        for p in goal.solution:
            plans[p.agent_id] = plans[p.agent_id][:tau] + list(p.waypoints)
    raise IterationLimitExceeded(f"triggers kept firing at timestep {tau}")


@dataclass
class SafetyReport:
    vertex_violations: List[Tuple[int, Cell, Tuple[int, int]]] = field(default_factory=list)
    swap_violations: List[Tuple[int, Tuple[Cell, Cell], Tuple[int, int]]] = field(default_factory=list)
    path_violations: List[Tuple[int, int, str]] = field(default_factory=list)
    compliance_findings: List[dict] = field(default_factory=list)

    @property
    def safe(self) -> bool:
        return not (self.vertex_violations or self.swap_violations or self.path_violations)

    @property
    def compliant(self) -> bool:
        return all(f["passed"] for f in self.compliance_findings)

    @property
    def ok(self) -> bool:
        return self.safe and self.compliant


def _starboard(approach_from, vertex) -> Tuple[int, int]:
    # right-hand normal of the direction prev -> vertex (x east, y north)
    dx, dy = vertex[0] - approach_from[0], vertex[1] - approach_from[1]
    return (dy, -dx)


def _side(c, vertex, normal) -> int:
    return (c[0] - vertex[0]) * normal[0] + (c[1] - vertex[1]) * normal[1]


def _is_ring_walk(cells, vertex) -> bool:
    """Consecutive cells are anticlockwise neighbours on the ring round vertex."""
    for a, b in zip(cells, cells[1:]):
        if _chebyshev(a, vertex) != 1 or _chebyshev(b, vertex) != 1 or _chebyshev(a, b) != 1:
            return False
        ax, ay = a[0] - vertex[0], a[1] - vertex[1]
        bx, by = b[0] - vertex[0], b[1] - vertex[1]
        if ax * by - ay * bx <= 0:
            return False
    return True


def _audit_resolution(rec: ResolutionRecord) -> dict:
    v = rec.vertex
    checks: Dict[str, bool] = {}
    if rec.ctype == ConflictType.HEAD_ON:
        for a in rec.agents:
            prev, _, nxt = rec.window[a]
            cells = rec.insertions[a]
            normal = _starboard(prev, v)
            checks[f"agent{a}_endpoints"] = cells[0] == prev and cells[-1] == nxt
            # a vessel leaving to port must cross ahead of the vertex eventually,
            # so only the first move is required to be to starboard
            checks[f"agent{a}_turns_starboard"] = len(cells) > 1 and _side(cells[1], v, normal) > 0
            checks[f"agent{a}_keeps_vertex_to_port"] = _is_ring_walk(cells, v)
            checks[f"agent{a}_avoids_vertex"] = v not in cells
    else:
        stand = next(a for a, r in rec.roles.items() if r == VesselRole.STAND_ON)
        give = next(a for a, r in rec.roles.items() if r == VesselRole.GIVE_WAY)
        s_prev, _, s_next = rec.window[stand]
        g_prev, _, g_next = rec.window[give]
        g_cells = tuple(rec.insertions[give])
        normal = _starboard(g_prev, v)
        checks["giveway_has_other_to_starboard"] = _side(s_prev, v, normal) > 0
        checks["standon_unchanged"] = tuple(rec.insertions[stand]) == (s_prev, v, s_next)
        checks["giveway_endpoints"] = g_cells[0] == g_prev and g_cells[-1] == g_next
        if s_prev in g_cells:
            k = g_cells.index(s_prev)
            checks["giveway_passes_astern"] = _is_ring_walk(g_cells[:k + 1], v) and v not in g_cells[:k]
            checks["giveway_turns_starboard"] = len(g_cells) > 1 and _side(g_cells[1], v, normal) > 0
        else:
            checks["giveway_passes_astern"] = False
            checks["giveway_turns_starboard"] = False
    return {
        "t": rec.t,
        "vertex": v,
        "agents": rec.agents,
        "ctype": rec.ctype.value,
        "checks": checks,
        "passed": all(checks.values()),
    }


def audit(trace: SimTrace, spec: GridSpec) -> SafetyReport:
    """Recompute occupancy from the executed paths and check every resolution.

    Shares no code with conflict detection or resolution.
    """
    report = SafetyReport()
    ids = sorted(trace.paths)
    paths = {a: [tuple(c) for c in trace.paths[a]] for a in ids}
    horizon = max((len(p) for p in paths.values()), default=0)

    for a in ids:
        p = paths[a]
        for t, c in enumerate(p):
            if not spec.passable(c):
                report.path_violations.append((t, a, f"cell {c} is outside the grid or blocked"))
            if t and _chebyshev(p[t - 1], c) > 1:
                report.path_violations.append((t, a, f"jump from {p[t - 1]} to {c}"))

    for t in range(horizon):
        for k, a in enumerate(ids):
            for b in ids[k + 1:]:
                pa, pb = paths[a], paths[b]
                if t < len(pa) and t < len(pb) and pa[t] == pb[t]:
                    report.vertex_violations.append((t, Cell(*pa[t]), (a, b)))
                if (trace.swap_policy != SwapPolicy.IGNORE and t + 1 < len(pa) and t + 1 < len(pb)
                        and pa[t] == pb[t + 1] and pb[t] == pa[t + 1] and pa[t] != pa[t + 1]):
                    report.swap_violations.append((t, (Cell(*pa[t]), Cell(*pb[t])), (a, b)))

    report.compliance_findings = [_audit_resolution(r) for r in trace.resolutions]
    return report
