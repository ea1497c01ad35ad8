"""Command-line interface.

Exit codes: 0 success, 1 check found violations, 2 scenario error,
3 unresolvable conflict, 4 iteration limit, 5 I/O error.
"""
from __future__ import annotations

import argparse
import json
import statistics
import sys
from pathlib import Path

from .errors import ComcoreError, IterationLimitExceeded, ScenarioError, UnresolvableConflict
from .report import (
    dumps_trajectory,
    plan_trace,
    run_check,
    run_plan,
    run_simulate,
    safety_report_to_dict,
    trajectory_document,
)
from .scenario import gen_bench, load_scenario
from .sim import audit
from .svg import emit_svg

EXIT_OK = 0
EXIT_UNSAFE = 1
EXIT_SCENARIO = 2
EXIT_UNRESOLVABLE = 3
EXIT_ITERATIONS = 4
EXIT_IO = 5


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, ScenarioError):
        return EXIT_SCENARIO
    if isinstance(exc, UnresolvableConflict):
        return EXIT_UNRESOLVABLE
    if isinstance(exc, IterationLimitExceeded):
        return EXIT_ITERATIONS
    if isinstance(exc, OSError):
        return EXIT_IO
    if isinstance(exc, ComcoreError):
        return EXIT_SCENARIO
    return 1


def _emit(text: str, dest) -> None:
    if dest:
        Path(dest).write_text(text)
    else:
        sys.stdout.write(text)


def _summary(report) -> str:
    c = report.conflicts_resolved
    return (f"status={report.status} head-on={c['head-on']} crossing={c['crossing']} "
            f"sl_depth={report.sl_depth} wall_ms={report.wall_ms:.2f}")


def cmd_plan(args) -> int:
    scenario = load_scenario(args.scenario).with_overrides(args.trigger, args.max_iterations)
    solution, report = run_plan(scenario)
    trace = plan_trace(solution, report, scenario.sim.swap_policy)
    _emit(dumps_trajectory(trajectory_document(scenario, trace, report, "plan")), args.out)
    if args.svg:
        Path(args.svg).write_text(emit_svg(trace, scenario.grid, scenario.name))
    print(_summary(report), file=sys.stderr)
    return EXIT_OK


def cmd_simulate(args) -> int:
    scenario = load_scenario(args.scenario).with_overrides(args.trigger, args.max_iterations)
    trace, report = run_simulate(scenario)
    _emit(dumps_trajectory(trajectory_document(scenario, trace, report, "simulate")), args.out)
    if args.svg:
        Path(args.svg).write_text(emit_svg(trace, scenario.grid, scenario.name))
    print(_summary(report), file=sys.stderr)
    return EXIT_OK


def cmd_check(args) -> int:
    report = run_check(args.trajectory)
    print(json.dumps(safety_report_to_dict(report), indent=2))
    return EXIT_OK if report.ok else EXIT_UNSAFE


def bench_runs(agents: int, grid: int, seed: int, count: int, mode: str = "plan",
               trigger=None, max_iterations=None):
    runs = []
    for s in range(seed, seed + count):
        scenario = gen_bench(agents, grid, s).with_overrides(trigger, max_iterations)
        entry = {"seed": s}
        try:
            if mode == "simulate":
                trace, report = run_simulate(scenario)
            else:
                solution, report = run_plan(scenario)
                trace = plan_trace(solution, report)
            found = audit(trace, scenario.grid)
            entry["vertex_violations"] = len(found.vertex_violations)
            entry["swap_violations"] = len(found.swap_violations)
        except ComcoreError as exc:
            report = exc.report
        entry.update(
            status=report.status,
            conflicts_resolved=report.conflicts_resolved,
            total_deviation=sum(a.deviation or 0 for a in report.agents),
            wall_ms=round(report.wall_ms, 3),
        )
        if report.error:
            entry["error"] = report.error
        runs.append(entry)
    return runs


def cmd_bench(args) -> int:
    runs = bench_runs(args.agents, args.grid, args.seed, args.count, args.mode,
                      args.trigger, args.max_iterations)
    by_status = {}
    for r in runs:
        by_status[r["status"]] = by_status.get(r["status"], 0) + 1
    summary = {
        "agents": args.agents,
        "grid": args.grid,
        "seed": args.seed,
        "count": args.count,
        "mode": args.mode,
        "by_status": dict(sorted(by_status.items())),
        "collided_successes": sum(1 for r in runs if r.get("vertex_violations")),
        "swap_flagged_successes": sum(1 for r in runs if r.get("swap_violations")),
        "median_wall_ms": round(statistics.median(r["wall_ms"] for r in runs), 3) if runs else None,
    }
    if args.report:
        Path(args.report).write_text(json.dumps({"summary": summary, "runs": runs}, indent=2) + "\n")
    print(json.dumps(summary, indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="comcore", description="COLREGs-compliant multi-vessel grid planner")
    sub = parser.add_subparsers(dest="command", required=True)

    def overrides(p):
        p.add_argument("--trigger", type=int, help="override sim.trigger_distance_cells")
        p.add_argument("--max-iterations", type=int, help="override sim.max_iterations")

    p = sub.add_parser("plan", help="offline phase-1 + phase-2 planning")
    p.add_argument("scenario")
    p.add_argument("--out", help="trajectory JSON output (default: stdout)")
    p.add_argument("--svg", help="write an SVG figure")
    overrides(p)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("simulate", help="online lockstep simulation with distance triggers")
    p.add_argument("scenario")
    p.add_argument("--out", help="trajectory JSON output (default: stdout)")
    p.add_argument("--svg", help="write an SVG figure")
    overrides(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("check", help="audit a trajectory file for safety and compliance")
    p.add_argument("trajectory")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("bench", help="run seeded random scenarios")
    p.add_argument("--agents", type=int, required=True)
    p.add_argument("--grid", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--mode", choices=("plan", "simulate"), default="plan")
    p.add_argument("--report", help="write per-run JSON report")
    overrides(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ComcoreError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exit_code_for(exc)


if __name__ == "__main__":
    raise SystemExit(main())
