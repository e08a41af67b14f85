#!/usr/bin/env python3
"""Writes the shipped scenario files under data/scenarios."""

import json
import pathlib

ROOT = pathlib.Path(__file__).resolve().parent.parent
OUT = ROOT / "data" / "scenarios"


def scenario(name, *, depth, initial, duration, profile, input_kind="grip",
             protection="on", envelope="default.json", source="scripted"):
    up = "../" * depth
    return {
        "format": "fepsim-scenario",
        "version": 1,
        "name": name,
        "aircraft": f"{up}../aircraft/f16_standin.json",
        "aero": f"{up}../aero/standin_f16.json",
        "envelope": f"{up}../envelope/{envelope}",
        "initial": initial,
        "dt_s": 0.001,
        "duration_s": duration,
        "protection": protection,
        "source": source,
        "input": input_kind,
        "profile": profile,
    }


def initial(altitude, airspeed, gamma=0.0, bank=0.0):
    return {"altitude_ft": altitude, "airspeed_fps": airspeed, "gamma_deg": gamma,
            "bank_deg": bank}


def write(rel, doc):
    path = OUT / rel
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=2) + "\n")


def full_aft(t0=0.5):
    return [{"t": 0.0, "pitch_lbf": 0.0}, {"t": t0, "pitch_lbf": 27.0}]


def main():
    write("trim_hold.json", scenario(
        "trim hold", depth=0, initial=initial(15000, 500), duration=10.0,
        profile=[{"t": 0.0, "pitch_lbf": 0.0, "roll_lbf": 0.0, "pedal": 0.0}]))

    write("longitudinal_demo.json", scenario(
        "longitudinal protection demo", depth=0, initial=initial(15000, 500, gamma=-30),
        duration=8.0,
        profile=[{"t": 0.0, "pitch_lbf": 0.0}, {"t": 0.5, "pitch_lbf": 27.0},
                 {"t": 3.5, "pitch_lbf": 0.0}]))

    write("live_session.json", scenario(
        "live session", depth=0, initial=initial(15000, 500), duration=600.0,
        profile=[], source="live"))

    # aggressive nose-up family: full aft stick from a dive entry
    pulls = [
        (15000, 500, -30, 6.0),
        (15000, 450, -20, 6.0),
        (10000, 550, -20, 5.0),
        (5000, 620, -5, 4.0),
        (3000, 640, -3, 4.0),
        (20000, 550, -30, 6.0),
        (25000, 600, -30, 6.0),
        (8000, 600, -15, 5.0),
        (12000, 400, -25, 6.0),
        (30000, 550, -20, 6.0),
        (2000, 620, 0, 4.0),
        (6000, 560, -10, 5.0),
    ]
    for i, (alt, v, gamma, duration) in enumerate(pulls):
        write(f"nose_up/pull_{i:02d}_{alt // 1000}k_{v}.json", scenario(
            f"full aft stick, {alt} ft, {v} ft/s, gamma {gamma} deg", depth=1,
            initial=initial(alt, v, gamma), duration=duration, profile=full_aft()))
    # store-carriage limits, where the load-factor limit binds
    for alt, v, gamma, duration in [(10000, 550, -20, 5.0), (5000, 620, -5, 4.0),
                                    (3000, 640, -3, 4.0), (8000, 600, -15, 5.0)]:
        write(f"nose_up/stores_{alt // 1000}k_{v}.json", scenario(
            f"full aft stick with stores, {alt} ft, {v} ft/s", depth=1,
            initial=initial(alt, v, gamma), duration=duration, profile=full_aft(),
            envelope="stores.json"))

    bank = {
        "right_full": (initial(15000, 500), [{"t": 0.0}, {"t": 0.5, "roll_lbf": 27.0}]),
        "left_full": (initial(15000, 500), [{"t": 0.0}, {"t": 0.5, "roll_lbf": -27.0}]),
        "right_low_fast": (initial(5000, 600), [{"t": 0.0}, {"t": 0.5, "roll_lbf": 27.0}]),
        "left_slow_pedal": (initial(15000, 400),
                            [{"t": 0.0}, {"t": 0.5, "roll_lbf": -27.0, "pedal": -1.0}]),
        "right_roll_pedal": (initial(15000, 500),
                             [{"t": 0.0}, {"t": 0.5, "roll_lbf": 27.0, "pedal": 1.0}]),
        "yaw_buildup": (initial(15000, 500),
                        [{"t": 0.0}, {"t": 0.5, "roll_lbf": 20.0, "pedal": 1.0},
                         {"t": 1.5, "roll_lbf": 0.0, "pedal": 1.0}]),
        "yaw_buildup_partial": (initial(15000, 500),
                                [{"t": 0.0}, {"t": 0.5, "roll_lbf": 14.0, "pedal": 1.0}]),
    }
    for name, (ic, profile) in bank.items():
        write(f"bank/{name}.json", scenario(
            name.replace("_", " "), depth=1, initial=ic, duration=10.0, profile=profile))

    steps = {"p": ("p_rps", 0.3), "q": ("q_rps", 0.1), "r": ("r_rps", 0.05)}
    for axis, (key, value) in steps.items():
        write(f"indi/step_{axis}.json", scenario(
            f"{axis} rate step", depth=1, initial=initial(15000, 500), duration=4.0,
            profile=[{"t": 0.0}, {"t": 1.0, key: value}], input_kind="rates",
            protection="off"))
    coupled = [{"t": 0.0}]
    for k, t in enumerate([1.0, 6.0, 11.0, 16.0]):
        s = 1.0 if k % 2 == 0 else -1.0
        coupled += [
            {"t": t, "p_rps": 0.3 * s, "q_rps": 0.08, "r_rps": 0.03 * s},
            {"t": t + 1.5, "p_rps": -0.3 * s, "q_rps": -0.05, "r_rps": -0.03 * s},
            {"t": t + 3.0},
        ]
    write("indi/coupled.json", scenario(
        "coupled rate doublets", depth=1, initial=initial(15000, 500), duration=20.0,
        profile=coupled, input_kind="rates", protection="off"))


if __name__ == "__main__":
    main()
