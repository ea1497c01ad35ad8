"""Scenario files and the seeded benchmark generator."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np

from .errors import ComcoreError, GenerationError, ScenarioError
from .grid import Cell, GridSpec, Heading
from .pathfinder import AgentSpec
from .sim import SimConfig, SwapPolicy

MAX_SEED = 2**64 - 1


@dataclass(frozen=True)
class Scenario:
    grid: GridSpec
    agents: tuple
    sim: SimConfig = field(default_factory=SimConfig)
    name: str = "scenario"
    seed: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        doc: Dict[str, Any] = {"name": self.name}
        if self.seed is not None:
            doc["seed"] = self.seed
        doc["grid"] = {
            "cols": self.grid.cols,
            "rows": self.grid.rows,
            "cell_size_m": self.grid.cell_size_m,
            "blocked": [list(c) for c in sorted(self.grid.blocked)],
        }
        doc["agents"] = [
            {"id": a.id, "start": list(a.start), "heading": a.start_heading.letter, "goal": list(a.goal)}
            for a in self.agents
        ]
        doc["sim"] = {
            "trigger_distance_cells": self.sim.trigger_distance_cells,
            "swap_policy": self.sim.swap_policy.value,
            "max_iterations": self.sim.max_iterations,
        }
        return doc

    def with_overrides(self, trigger: Optional[int] = None, max_iterations: Optional[int] = None) -> "Scenario":
        if trigger is None and max_iterations is None:
            return self
        sim = SimConfig(
            trigger_distance_cells=self.sim.trigger_distance_cells if trigger is None else trigger,
            swap_policy=self.sim.swap_policy,
            max_iterations=self.sim.max_iterations if max_iterations is None else max_iterations,
        )
        return Scenario(self.grid, self.agents, sim, self.name, self.seed)


def _cell(value, where: str) -> Cell:
    if (not isinstance(value, (list, tuple)) or len(value) != 2
            or not all(isinstance(v, int) and not isinstance(v, bool) for v in value)):
        raise ScenarioError(f"{where}: expected [x, y] integer pair, got {value!r}")
    return Cell(*value)


def _int(doc: dict, key: str, where: str, default=None) -> int:
    value = doc.get(key, default)
    if not isinstance(value, int) or isinstance(value, bool):
        raise ScenarioError(f"{where}.{key}: expected an integer, got {value!r}")
    return value


def parse_scenario(doc: Any) -> Scenario:
    """Build a fully validated Scenario from a decoded JSON document."""
    if not isinstance(doc, dict):
        raise ScenarioError("scenario: top level must be a JSON object")
    name = doc.get("name", "scenario")
    if not isinstance(name, str):
        raise ScenarioError(f"name: expected a string, got {name!r}")
    seed = doc.get("seed")
    if seed is not None and (not isinstance(seed, int) or not 0 <= seed <= MAX_SEED):
        raise ScenarioError(f"seed: expected an unsigned 64-bit integer, got {seed!r}")

    g = doc.get("grid")
    if not isinstance(g, dict):
        raise ScenarioError("grid: missing or not an object")
    cell_size = g.get("cell_size_m", 10.0)
    if isinstance(cell_size, bool) or not isinstance(cell_size, (int, float)):
        raise ScenarioError(f"grid.cell_size_m: expected a number, got {cell_size!r}")
    blocked_raw = g.get("blocked", [])
    if not isinstance(blocked_raw, list):
        raise ScenarioError("grid.blocked: expected a list of [x, y] pairs")
    blocked = [_cell(c, f"grid.blocked[{k}]") for k, c in enumerate(blocked_raw)]
    try:
        grid = GridSpec(_int(g, "cols", "grid"), _int(g, "rows", "grid"), float(cell_size), frozenset(blocked))
    except ComcoreError as exc:
        raise ScenarioError(f"grid: {exc}") from None

    raw_agents = doc.get("agents")
    if not isinstance(raw_agents, list) or not raw_agents:
        raise ScenarioError("agents: expected a non-empty list")
    agents: List[AgentSpec] = []
    for k, a in enumerate(raw_agents):
        where = f"agents[{k}]"
        if not isinstance(a, dict):
            raise ScenarioError(f"{where}: expected an object")
        aid = _int(a, "id", where)
        start = _cell(a.get("start"), f"{where}.start")
        goal = _cell(a.get("goal"), f"{where}.goal")
        heading = a.get("heading")
        if heading is not None:
            try:
                heading = Heading.from_letter(heading)
            except ValueError as exc:
                raise ScenarioError(f"{where}.heading: {exc}") from None
        for label, c in (("start", start), ("goal", goal)):
            if not grid.in_bounds(c):
                raise ScenarioError(f"{where}.{label}: agent {aid} {label} {list(c)} is outside the "
                                    f"{grid.cols}x{grid.rows} grid")
            if c in grid.blocked:
                raise ScenarioError(f"{where}.{label}: agent {aid} {label} {list(c)} is a blocked cell")
        agents.append(AgentSpec(aid, start, goal, heading))

    ids = [a.id for a in agents]
    if sorted(ids) != list(range(len(ids))):
        raise ScenarioError(f"agents: ids must be unique and numbered 0..{len(ids) - 1}, got {ids}")
    agents.sort(key=lambda a: a.id)
    for label in ("start", "goal"):
        seen: Dict[Cell, int] = {}
        for a in agents:
            c = getattr(a, label)
            if c in seen:
                raise ScenarioError(f"agents: agents {seen[c]} and {a.id} share {label} cell {list(c)}")
            seen[c] = a.id

    s = doc.get("sim", {})
    if not isinstance(s, dict):
        raise ScenarioError("sim: expected an object")
    policy = s.get("swap_policy", "flag")
    try:
        sim = SimConfig(
            trigger_distance_cells=_int(s, "trigger_distance_cells", "sim", 3),
            swap_policy=SwapPolicy(policy),
            max_iterations=_int(s, "max_iterations", "sim", 100),
        )
    except ValueError as exc:
        raise ScenarioError(f"sim: {exc}") from None
    return Scenario(grid, tuple(agents), sim, name, seed)


def load_scenario(source: Union[str, os.PathLike]) -> Scenario:
    """Load a scenario from a file path or from JSON text."""
    if isinstance(source, str) and source.lstrip().startswith("{"):
        text = source
    else:
        text = Path(source).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return parse_scenario(doc)


def dumps_scenario(scenario: Scenario) -> str:
    return json.dumps(scenario.to_dict(), indent=2) + "\n"


def save_scenario(scenario: Scenario, path: Union[str, os.PathLike]) -> None:
    Path(path).write_text(dumps_scenario(scenario))


def gen_bench(agent_count: int, grid_size: int, seed: int) -> Scenario:
    """Random square-grid scenario; starts and goals are all distinct cells."""
    if agent_count < 1:
        raise GenerationError(f"agent_count must be at least 1, got {agent_count}")
    if grid_size < 1:
        raise GenerationError(f"grid_size must be at least 1, got {grid_size}")
    if not 0 <= seed <= MAX_SEED:
        raise GenerationError(f"seed must be an unsigned 64-bit integer, got {seed}")
    cells = grid_size * grid_size
    if 2 * agent_count > cells:
        raise GenerationError(
            f"{agent_count} agents need {2 * agent_count} distinct start/goal cells; "
            f"a {grid_size}x{grid_size} grid has {cells}")
    rng = np.random.default_rng(seed)
    picks = [int(i) for i in rng.choice(cells, size=2 * agent_count, replace=False)]
    agents = tuple(
        AgentSpec(k, Cell(s % grid_size, s // grid_size), Cell(g % grid_size, g // grid_size))
        for k, (s, g) in enumerate(zip(picks[:agent_count], picks[agent_count:]))
    )
    return Scenario(GridSpec(grid_size, grid_size, 10.0), agents,
                    name=f"bench-{agent_count}a-{grid_size}x{grid_size}-seed{seed}", seed=seed)
