from pathlib import Path

import pytest

from comcore.scenario import gen_bench, load_scenario

ROOT = Path(__file__).resolve().parent.parent
SCENARIO_DIR = ROOT / "scenarios"
GOLDEN_DIR = Path(__file__).resolve().parent / "golden"


def seeded_corpus():
    """Generated scenarios shared by the invariant tests."""
    out = []
    for agents, grid, seeds in ((2, 7, 60), (3, 8, 60), (5, 9, 60), (10, 7, 120), (10, 10, 60)):
        out.extend(gen_bench(agents, grid, s) for s in range(seeds))
    return out


def golden_scenarios():
    return sorted(SCENARIO_DIR.glob("*.json"))


@pytest.fixture(scope="session")
def corpus():
    return seeded_corpus()


@pytest.fixture
def head_on():
    return load_scenario(SCENARIO_DIR / "head_on.json")


@pytest.fixture
def crossing():
    return load_scenario(SCENARIO_DIR / "crossing.json")


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
