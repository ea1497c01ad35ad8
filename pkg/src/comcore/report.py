"""End-to-end runs, run metrics and the trajectory file format.

Trajectory files never contain wall-clock timings, so identical scenarios
produce byte-identical files.
"""
from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from .conflicts import ConflictType, VesselRole
from .errors import ComcoreError, ScenarioError
from .grid import Cell, GridSpec, cell_center
from .pathfinder import Solution, plan_all
from .resolver import phase2
from .scenario import Scenario
from .sim import ResolutionRecord, SafetyReport, SimTrace, SwapPolicy, audit, run_sim

TRAJECTORY_FORMAT = "comcore-trajectory/1"


@dataclass
class AgentMetrics:
    id: int
    phase1_moves: int
    final_moves: Optional[int] = None

    @property
    def deviation(self) -> Optional[int]:
        if self.final_moves is None:
            return None
        return self.final_moves - self.phase1_moves


@dataclass
class RunReport:
    agents: List[AgentMetrics] = field(default_factory=list)
    resolutions: List[ResolutionRecord] = field(default_factory=list)
    wall_ms: float = 0.0
    status: str = "success"
    error: Optional[str] = None

    @property
    def conflicts_resolved(self) -> Dict[str, int]:
        counts = {c.value: 0 for c in ConflictType}
        for r in self.resolutions:
            counts[r.ctype.value] += 1
        return counts

    @property
    def sl_depth(self) -> int:
        return len(self.resolutions) + 1

    def to_dict(self, timing: bool = True) -> Dict[str, Any]:
        doc: Dict[str, Any] = {
            "status": self.status,
            "agents": [
                {"id": a.id, "phase1_moves": a.phase1_moves, "final_moves": a.final_moves,
                 "deviation": a.deviation}
                for a in self.agents
            ],
            "conflicts_resolved": self.conflicts_resolved,
            "sl_depth": self.sl_depth,
        }
        if self.error is not None:
            doc["error"] = self.error
        if timing:
            doc["wall_ms"] = round(self.wall_ms, 3)
        return doc


def _fail(report: RunReport, exc: ComcoreError, started: float) -> None:
    report.wall_ms = (time.perf_counter() - started) * 1000.0
    report.status = type(exc).__name__
    report.error = str(exc)
    exc.report = report


def run_plan(scenario: Scenario) -> Tuple[Solution, RunReport]:
    """Offline pipeline: phase-1 for every agent, then phase-2."""
    report = RunReport()
    started = time.perf_counter()
    try:
        initial = plan_all(scenario.grid, scenario.agents)
        report.agents = [AgentMetrics(p.agent_id, p.moves) for p in initial]
        goal, chain = phase2(initial, scenario.grid, scenario.sim.max_iterations)
    except ComcoreError as exc:
        chain = getattr(exc, "chain", None) or []
        report.resolutions = [ResolutionRecord.from_node(n) for n in chain[1:]]
        _fail(report, exc, started)
        raise
    report.wall_ms = (time.perf_counter() - started) * 1000.0
    report.resolutions = [ResolutionRecord.from_node(n) for n in chain[1:]]
    for m in report.agents:
        m.final_moves = goal.solution.path(m.id).moves
    return goal.solution, report


def run_simulate(scenario: Scenario) -> Tuple[SimTrace, RunReport]:
    """Online pipeline: lockstep execution with distance-triggered phase-2."""
    report = RunReport()
    started = time.perf_counter()
    try:
        initial = plan_all(scenario.grid, scenario.agents)
        report.agents = [AgentMetrics(p.agent_id, p.moves) for p in initial]
        trace = run_sim(scenario.grid, scenario.agents, scenario.sim)
    except ComcoreError as exc:
        partial = getattr(exc, "trace", None)
        if partial is not None:
            report.resolutions = list(partial.resolutions)
        _fail(report, exc, started)
        raise
    report.wall_ms = (time.perf_counter() - started) * 1000.0
    report.resolutions = list(trace.resolutions)
    for m in report.agents:
        m.final_moves = len(trace.paths[m.id]) - 1
    return trace, report


def plan_trace(solution: Solution, report: RunReport, swap_policy=SwapPolicy.FLAG) -> SimTrace:
    return SimTrace(
        paths={p.agent_id: p.waypoints for p in solution},
        resolutions=list(report.resolutions),
        status={p.agent_id: "arrived" for p in solution},
        swap_policy=SwapPolicy(swap_policy),
    )


def _xy(c) -> List[int]:
    return [int(c[0]), int(c[1])]


def _record_to_dict(r: ResolutionRecord) -> Dict[str, Any]:
    return {
        "t": r.t,
        "vertex": _xy(r.vertex),
        "agents": list(r.agents),
        "ctype": r.ctype.value,
        "roles": [r.roles[a].value for a in r.agents] if r.roles else None,
        "window": [[_xy(c) for c in r.window[a]] for a in r.agents],
        "insertions": [[_xy(c) for c in r.insertions[a]] for a in r.agents],
    }


def _record_from_dict(d: Dict[str, Any]) -> ResolutionRecord:
    agents = tuple(d["agents"])
    roles = d.get("roles")
    return ResolutionRecord(
        t=d["t"],
        vertex=Cell(*d["vertex"]),
        agents=agents,
        ctype=ConflictType(d["ctype"]),
        roles={a: VesselRole(r) for a, r in zip(agents, roles)} if roles else None,
        window={a: tuple(Cell(*c) for c in w) for a, w in zip(agents, d["window"])},
        insertions={a: tuple(Cell(*c) for c in w) for a, w in zip(agents, d["insertions"])},
    )


def trajectory_document(scenario: Scenario, trace: SimTrace, report: RunReport, mode: str) -> Dict[str, Any]:
    spec = scenario.grid
    return {
        "format": TRAJECTORY_FORMAT,
        "mode": mode,
        "name": scenario.name,
        "grid": scenario.to_dict()["grid"],
        "sim": scenario.to_dict()["sim"],
        "agents": [
            {
                "id": a,
                "status": trace.status.get(a, "arrived"),
                "waypoints": [
                    {"t": t, "cell": _xy(c), "pos_m": list(cell_center(spec, c))}
                    for t, c in enumerate(trace.paths[a])
                ],
            }
            for a in sorted(trace.paths)
        ],
        "triggers": [{"t": t, "agents": list(pair)} for t, pair in trace.triggers],
        "holds": [{"t": t, "agent": a} for t, a in trace.holds],
        "resolutions": [_record_to_dict(r) for r in trace.resolutions],
        "report": report.to_dict(timing=False),
    }


def dumps_trajectory(doc: Dict[str, Any]) -> str:
    return json.dumps(doc, indent=2) + "\n"


def load_trajectory(source: Union[str, os.PathLike, Dict[str, Any]]) -> Tuple[GridSpec, SimTrace]:
    if isinstance(source, dict):
        doc = source
    else:
        try:
            doc = json.loads(Path(source).read_text())
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    try:
        g = doc["grid"]
        spec = GridSpec(g["cols"], g["rows"], g.get("cell_size_m", 10.0),
                        frozenset(Cell(*c) for c in g.get("blocked", [])))
        trace = SimTrace(
            paths={a["id"]: tuple(Cell(*w["cell"]) for w in sorted(a["waypoints"], key=lambda w: w["t"]))
                   for a in doc["agents"]},
            triggers=[(tr["t"], tuple(tr["agents"])) for tr in doc.get("triggers", [])],
            resolutions=[_record_from_dict(r) for r in doc.get("resolutions", [])],
            status={a["id"]: a.get("status", "arrived") for a in doc["agents"]},
            holds=[(h["t"], h["agent"]) for h in doc.get("holds", [])],
            swap_policy=SwapPolicy(doc.get("sim", {}).get("swap_policy", "flag")),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"malformed trajectory file: {exc!r}") from None
    return spec, trace


def run_check(source) -> SafetyReport:
    spec, trace = load_trajectory(source)
    return audit(trace, spec)


def safety_report_to_dict(report: SafetyReport) -> Dict[str, Any]:
    return {
        "safe": report.safe,
        "compliant": report.compliant,
        "vertex_violations": [{"t": t, "cell": _xy(c), "agents": list(p)} for t, c, p in report.vertex_violations],
        "swap_violations": [{"t": t, "edge": [_xy(a), _xy(b)], "agents": list(p)}
                            for t, (a, b), p in report.swap_violations],
        "path_violations": [{"t": t, "agent": a, "problem": msg} for t, a, msg in report.path_violations],
        "compliance_findings": [
            {**f, "vertex": _xy(f["vertex"]), "agents": list(f["agents"])} for f in report.compliance_findings
        ],
    }
