"""Rewrite tests/golden/ from the scenarios/ directory.

Only run this after checking that a behaviour change is intended.
"""
from pathlib import Path

from comcore.cli import main

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = ROOT / "tests" / "golden"

if __name__ == "__main__":
    GOLDEN.mkdir(exist_ok=True)
    for scenario in sorted((ROOT / "scenarios").glob("*.json")):
        for cmd in ("plan", "simulate"):
            stem = GOLDEN / f"{scenario.stem}.{cmd}"
            main([cmd, str(scenario), "--out", f"{stem}.json", "--svg", f"{stem}.svg"])
