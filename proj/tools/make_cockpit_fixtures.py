#!/usr/bin/env python3
"""Writes the cockpit display fixtures from real state frames.

usage: make_cockpit_fixtures.py path/to/fepsim
"""

import json
import pathlib
import subprocess
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent
OUT = ROOT / "web" / "test" / "fixtures"


def frame(cli: str, scenario: str, t: float) -> dict:
    text = subprocess.run([cli, "frame", str(ROOT / "data" / "scenarios" / scenario),
                           "--time", str(t)], check=True, capture_output=True, text=True).stdout
    return json.loads(text)


def main() -> None:
    cli = sys.argv[1]
    OUT.mkdir(parents=True, exist_ok=True)

    # wings level cruise, angle of attack pinned to zero
    low = frame(cli, "trim_hold.json", 1.0)
    low["alpha_deg"] = 0.0
    low["normalized"]["alpha_bar"] = 0.0

    # sustained pull with the soft stop cued, angle of attack at the limit
    high = frame(cli, "longitudinal_demo.json", 2.5)
    high["alpha_deg"] = high["limits"]["alpha_max_deg"]
    high["normalized"]["alpha_bar"] = 1.0

    for name, data in (("state_alpha0.json", low), ("state_alpha1.json", high)):
        (OUT / name).write_text(json.dumps(data, indent=2) + "\n")


if __name__ == "__main__":
    main()
