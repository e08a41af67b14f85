#!/usr/bin/env python3
"""Writes the synthetic stick release capture used by `fepsim fit`."""

import math
import pathlib

import numpy as np

ROOT = pathlib.Path(__file__).resolve().parent.parent
OUT = ROOT / "data" / "captures" / "release_synthetic.csv"

MASS = 0.6
STIFFNESS = 2.0
ZETA = 0.35
RELEASE_DEG = 10.0
RATE_HZ = 200
DURATION_S = 10.0
NOISE_DEG = 0.01 * RELEASE_DEG
SEED = 7


def free_response(t, zeta, wn):
    wd = wn * math.sqrt(1.0 - zeta * zeta)
    return np.exp(-zeta * wn * t) * (np.cos(wd * t) + zeta * wn / wd * np.sin(wd * t))


def main():
    wn = math.sqrt(STIFFNESS / MASS)
    t = np.arange(int(DURATION_S * RATE_HZ) + 1) / RATE_HZ
    rng = np.random.default_rng(SEED)
    theta = RELEASE_DEG * free_response(t, ZETA, wn) + rng.normal(0.0, NOISE_DEG, t.size)
    OUT.parent.mkdir(parents=True, exist_ok=True)
    with OUT.open("w") as f:
        f.write(f"# synthetic release from {RELEASE_DEG:g} deg, zeta={ZETA:g}, "
                f"omega_n={wn:.10g} rad/s, noise sigma={NOISE_DEG:g} deg, seed={SEED}\n")
        f.write("t_s,theta_deg\n")
        for ti, th in zip(t, theta):
            f.write(f"{ti:.6f},{th:.9f}\n")


if __name__ == "__main__":
    main()
