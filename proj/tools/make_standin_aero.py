#!/usr/bin/env python3
"""Writes the stand-in F-16-class aerodynamic tables used by the shipped scenarios.

Smooth, simple functions sampled on the usual F-16 table grids. Not flight data.

    python3 tools/make_standin_aero.py data/aero/standin_f16.json
"""

import json
import sys

ALPHA = [-10.0 + 5.0 * i for i in range(12)]  # -10 .. 45
BETA = [-30.0, -20.0, -10.0, 0.0, 10.0, 20.0, 30.0]
TAIL = [-25.0, -10.0, 0.0, 10.0, 25.0]
AILERON = [-21.5, 0.0, 21.5]
RUDDER = [-30.0, 0.0, 30.0]


def cz_alpha(a):
    if a <= 30.0:
        return -0.065 * a
    return -1.95 - 0.02 * (a - 30.0)


def grid(axes, breakpoints, fn):
    values = []

    def walk(prefix, depth):
        if depth == len(breakpoints):
            values.append(round(fn(*prefix), 12))
            return
        for x in breakpoints[depth]:
            walk(prefix + [x], depth + 1)

    walk([], 0)
    return {"axes": axes, "breakpoints": breakpoints, "values": values}


def rate_term(value_of_alpha, rate):
    term = grid(["alpha"], [ALPHA], value_of_alpha)
    term["rate"] = rate
    return term


def aileron_power(a):
    return 0.0022 * (1.0 - 0.01 * max(a, 0.0))


def main(path):
    data = {
        "format": "fepsim-aero",
        "version": 1,
        "name": "stand-in F-16 class",
        "envelope": {"alpha_deg": [-10.0, 45.0], "beta_deg": [-30.0, 30.0], "mach_max": 0.6},
        "coefficients": {
            "Cx": [
                grid(["alpha", "tail"], [ALPHA, TAIL],
                     lambda a, e: -0.04 + 0.004 * a - 0.00002 * a * a - 0.00001 * e * e),
            ],
            "Cy": [
                grid(["beta"], [BETA], lambda b: -0.02 * b),
                grid(["alpha", "aileron"], [ALPHA, AILERON], lambda a, d: 0.0007 * d),
                grid(["alpha", "rudder"], [ALPHA, RUDDER], lambda a, d: 0.003 * d),
                rate_term(lambda a: -0.1, "p"),
                rate_term(lambda a: 0.6, "r"),
            ],
            "Cz": [
                grid(["alpha", "tail"], [ALPHA, TAIL], lambda a, e: cz_alpha(a) - 0.0076 * e),
                rate_term(lambda a: -10.0, "q"),
            ],
            "Cl": [
                grid(["alpha", "beta"], [ALPHA, BETA], lambda a, b: -0.0012 * b),
                grid(["alpha", "aileron"], [ALPHA, AILERON], lambda a, d: aileron_power(a) * d),
                grid(["alpha", "rudder"], [ALPHA, RUDDER], lambda a, d: 0.0003 * d),
                rate_term(lambda a: -0.40, "p"),
                rate_term(lambda a: 0.10, "r"),
            ],
            "Cm": [
                grid(["alpha", "tail"], [ALPHA, TAIL], lambda a, e: 0.01 - 0.004 * a - 0.012 * e),
                rate_term(lambda a: -5.0, "q"),
            ],
            "Cn": [
                grid(["alpha", "beta"], [ALPHA, BETA], lambda a, b: 0.0015 * b),
                grid(["alpha", "aileron"], [ALPHA, AILERON], lambda a, d: -0.0003 * d),
                grid(["alpha", "rudder"], [ALPHA, RUDDER], lambda a, d: -0.0015 * d),
                rate_term(lambda a: -0.04, "p"),
                rate_term(lambda a: -0.35, "r"),
            ],
        },
    }
    with open(path, "w") as f:
        json.dump(data, f, indent=1)
        f.write("\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/aero/standin_f16.json")
