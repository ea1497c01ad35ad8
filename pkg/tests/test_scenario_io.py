import json
import re

import pytest
from hypothesis import given, settings, strategies as st

from comcore.cli import main
from comcore.errors import BoundaryResolutionError, GenerationError, ScenarioError
from comcore.pathfinder import plan_all
from comcore.report import (
    dumps_trajectory,
    load_trajectory,
    plan_trace,
    run_check,
    run_plan,
    run_simulate,
    trajectory_document,
)
from comcore.scenario import dumps_scenario, gen_bench, load_scenario, parse_scenario
from comcore.svg import emit_svg

from conftest import SCENARIO_DIR
from oracles import occupancy_collisions


def doc(**overrides):
    base = {
        "name": "t",
        "grid": {"cols": 7, "rows": 7, "cell_size_m": 10, "blocked": []},
        "agents": [
            {"id": 0, "start": [0, 3], "heading": "E", "goal": [6, 3]},
            {"id": 1, "start": [6, 3], "heading": "W", "goal": [0, 3]},
        ],
    }
    base.update(overrides)
    return base


def test_example_scenarios_load():
    for path in sorted(SCENARIO_DIR.glob("*.json")):
        sc = load_scenario(path)
        assert [a.id for a in sc.agents] == list(range(len(sc.agents)))


def test_defaults_filled_in():
    sc = parse_scenario(doc())
    assert sc.sim.trigger_distance_cells == 3
    assert sc.sim.swap_policy.value == "flag"
    assert sc.sim.max_iterations == 100


def test_goal_out_of_bounds_names_agent():
    d = doc()
    d["agents"][1]["goal"] = [9, 3]
    with pytest.raises(ScenarioError, match=r"agents\[1\]\.goal: agent 1"):
        parse_scenario(d)


def test_duplicate_start_rejected():
    d = doc()
    d["agents"][1]["start"] = [0, 3]
    with pytest.raises(ScenarioError, match="share start"):
        parse_scenario(d)


@pytest.mark.parametrize("mutate,field", [
    (lambda d: d["agents"][0].update(heading="Q"), r"agents\[0\]\.heading"),
    (lambda d: d["agents"][1].update(id=5), "agents: ids"),
    (lambda d: d["grid"].update(blocked=[[0, 3]]), r"agents\[0\]\.start"),
    (lambda d: d["grid"].update(cols=0), "grid"),
    (lambda d: d.update(sim={"swap_policy": "bounce"}), "sim"),
])
def test_invalid_fields(mutate, field):
    d = doc()
    mutate(d)
    with pytest.raises(ScenarioError, match=field):
        parse_scenario(d)


def test_bad_json_reports_line():
    with pytest.raises(ScenarioError, match="line 3"):
        load_scenario('{\n "name": "x",\n "grid": ,\n}')


@st.composite
def scenarios(draw):
    agents = draw(st.integers(1, 6))
    grid = draw(st.integers(4, 9))
    seed = draw(st.integers(0, 2**64 - 1))
    return gen_bench(agents, grid, seed)


@settings(max_examples=100, deadline=None)
@given(scenarios())
def test_scenario_round_trip(sc):
    again = load_scenario(dumps_scenario(sc))
    assert again == sc
    assert dumps_scenario(again) == dumps_scenario(sc)


def test_gen_bench_deterministic():
    assert dumps_scenario(gen_bench(10, 7, 42)) == dumps_scenario(gen_bench(10, 7, 42))
    assert gen_bench(10, 7, 42) != gen_bench(10, 7, 43)


@pytest.mark.parametrize("seed", range(20))
def test_gen_bench_valid(seed):
    sc = gen_bench(2, 7, seed)
    cells = [a.start for a in sc.agents] + [a.goal for a in sc.agents]
    assert len(set(cells)) == 4
    assert all(sc.grid.in_bounds(c) for c in cells)


def test_gen_bench_too_many_agents():
    with pytest.raises(GenerationError):
        gen_bench(50, 2, 0)


def test_plan_report_head_on(head_on):
    _, report = run_plan(head_on)
    assert [a.deviation for a in report.agents] == [2, 2]
    assert report.conflicts_resolved == {"head-on": 1, "crossing": 0}
    assert report.sl_depth == 2


def test_plan_report_crossing(crossing):
    _, report = run_plan(crossing)
    assert [a.deviation for a in report.agents] == [2, 0]  # agent 1 stands on
    assert report.resolutions[0].roles[1].value == "stand-on"


def test_report_deviation_matches_cost(corpus):
    for sc in corpus[:120]:
        try:
            solution, report = run_plan(sc)
        except Exception:
            continue
        base = plan_all(sc.grid, sc.agents).cost
        assert sum(a.deviation for a in report.agents) == solution.cost - base


def test_failed_run_carries_report():
    sc = parse_scenario(doc(agents=[
        {"id": 0, "start": [0, 0], "heading": "E", "goal": [6, 0]},
        {"id": 1, "start": [6, 0], "heading": "W", "goal": [0, 0]},
    ]))
    with pytest.raises(BoundaryResolutionError) as info:
        run_plan(sc)
    assert info.value.report.status == "BoundaryResolutionError"


@pytest.mark.parametrize("mode", ["plan", "simulate"])
def test_trajectory_round_trip(head_on, mode):
    if mode == "plan":
        solution, report = run_plan(head_on)
        trace = plan_trace(solution, report)
    else:
        trace, report = run_simulate(head_on)
    text = dumps_trajectory(trajectory_document(head_on, trace, report, mode))
    spec, loaded = load_trajectory(json.loads(text))
    assert spec == head_on.grid
    assert loaded.paths == trace.paths
    assert loaded.resolutions == trace.resolutions
    assert loaded.triggers == trace.triggers
    assert dumps_trajectory(trajectory_document(head_on, loaded, report, mode)) == text
    assert "wall_ms" not in text


def test_trajectory_positions_are_cell_centres(head_on):
    solution, report = run_plan(head_on)
    d = trajectory_document(head_on, plan_trace(solution, report), report, "plan")
    wp = d["agents"][0]["waypoints"][0]
    assert wp["cell"] == [0, 3] and wp["pos_m"] == [5.0, 35.0]


def test_svg_single_straight_agent():
    sc = parse_scenario(doc(agents=[{"id": 0, "start": [0, 3], "heading": "E", "goal": [6, 3]}]))
    solution, _ = run_plan(sc)
    svg = emit_svg(solution, sc.grid, "one")
    assert svg == emit_svg(solution, sc.grid, "one")
    lines = re.findall(r'<polyline[^>]*points="([^"]*)"', svg)
    assert len(lines) == 1
    ys = {p.split(",")[1] for p in lines[0].split()}
    assert len(ys) == 1 and len(lines[0].split()) == 7
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")


def test_check_clean_and_dirty(tmp_path, head_on):
    solution, report = run_plan(head_on)
    good = tmp_path / "good.json"
    good.write_text(dumps_trajectory(trajectory_document(head_on, plan_trace(solution, report), report, "plan")))
    assert run_check(good).ok
    d = json.loads(good.read_text())
    d["agents"][1]["waypoints"] = d["agents"][0]["waypoints"]
    rep = run_check(d)
    assert not rep.safe
    assert len(rep.vertex_violations) == len(d["agents"][0]["waypoints"])


def test_malformed_trajectory():
    with pytest.raises(ScenarioError):
        load_trajectory({"grid": {"cols": 3}})


# CLI


def write(tmp_path, name, d):
    p = tmp_path / name
    p.write_text(json.dumps(d))
    return str(p)


def test_cli_plan_and_check(tmp_path, capsys):
    out = tmp_path / "traj.json"
    svg = tmp_path / "fig.svg"
    assert main(["plan", str(SCENARIO_DIR / "head_on.json"), "--out", str(out), "--svg", str(svg)]) == 0
    assert "status=success head-on=1" in capsys.readouterr().err
    assert svg.read_text().startswith("<svg")
    assert main(["check", str(out)]) == 0
    assert json.loads(capsys.readouterr().out)["safe"] is True


def test_cli_plan_to_stdout(capsys):
    assert main(["simulate", str(SCENARIO_DIR / "crossing.json")]) == 0
    assert json.loads(capsys.readouterr().out)["mode"] == "simulate"


def test_cli_check_finds_swap(tmp_path, capsys):
    # odd gap: the vessels trade cells between two steps and never share one
    sc = write(tmp_path, "s.json", doc(agents=[
        {"id": 0, "start": [0, 3], "heading": "E", "goal": [5, 3]},
        {"id": 1, "start": [5, 3], "heading": "W", "goal": [0, 3]},
    ]))
    out = str(tmp_path / "t.json")
    assert main(["plan", sc, "--out", out]) == 0
    capsys.readouterr()
    assert main(["check", out]) == 1
    assert len(json.loads(capsys.readouterr().out)["swap_violations"]) == 1


def test_cli_scenario_error(tmp_path, capsys):
    d = doc()
    d["agents"][1]["goal"] = [9, 3]
    assert main(["plan", write(tmp_path, "bad.json", d)]) == 2
    assert "agent 1" in capsys.readouterr().err


def test_cli_unresolvable(tmp_path):
    sc = write(tmp_path, "edge.json", doc(agents=[
        {"id": 0, "start": [0, 0], "heading": "E", "goal": [6, 0]},
        {"id": 1, "start": [6, 0], "heading": "W", "goal": [0, 0]},
    ]))
    assert main(["plan", sc]) == 3
    assert main(["simulate", sc]) == 3


def test_cli_iteration_limit(tmp_path):
    sc = write(tmp_path, "four.json", doc(grid={"cols": 9, "rows": 9}, agents=[
        {"id": 0, "start": [0, 2], "goal": [8, 2]},
        {"id": 1, "start": [8, 2], "goal": [0, 2]},
        {"id": 2, "start": [0, 6], "goal": [8, 6]},
        {"id": 3, "start": [8, 6], "goal": [0, 6]},
    ]))
    assert main(["plan", sc, "--max-iterations", "1"]) == 4
    assert main(["plan", sc]) == 0


def test_cli_io_error(tmp_path):
    assert main(["plan", str(tmp_path / "missing.json")]) == 5
    assert main(["check", str(tmp_path / "missing.json")]) == 5


def test_cli_bench(tmp_path, capsys):
    report = tmp_path / "bench.json"
    assert main(["bench", "--agents", "10", "--grid", "7", "--seed", "0", "--count", "20",
                 "--report", str(report)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert sum(summary["by_status"].values()) == 20
    assert summary["collided_successes"] == 0
    runs = json.loads(report.read_text())["runs"]
    assert [r["seed"] for r in runs] == list(range(20))


def test_successful_plans_are_collision_free(corpus):
    for sc in corpus[:60]:
        try:
            solution, _ = run_plan(sc)
        except Exception:
            continue
        assert occupancy_collisions({p.agent_id: p.waypoints for p in solution}) == []
