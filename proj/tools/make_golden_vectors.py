#!/usr/bin/env python3
"""Writes data/golden/acs_messages.json: reference encodings of ACS messages."""

import json
import pathlib
import struct

OUT = pathlib.Path(__file__).resolve().parent.parent / "data" / "golden" / "acs_messages.json"


def checksum(body: bytes) -> int:
    if len(body) % 2:
        body += b"\0"
    total = 0
    for i in range(0, len(body), 2):
        total += body[i] | (body[i + 1] << 8)
        total = (total & 0xFFFF) + (total >> 16)
    return ~total & 0xFFFF


def frame(msg_id: int, axis: int, fields: list[float]) -> str:
    payload = b"".join(struct.pack("<f", f) for f in fields)
    body = struct.pack("<BBH", msg_id, axis, len(payload)) + payload
    return (body + struct.pack("<H", checksum(body))).hex()


VALID = [
    ("control_enable_both", 2, 2, [2, 1, 0, 1]),
    ("control_jam_pitch", 2, 0, [3, 1, 1, 0]),
    ("fade_time", 5, 2, [0.5]),
    ("trim_pitch", 6, 0, [1.0]),
    ("shaker_roll", 7, 1, [2.5, 20.0]),
    ("damping_pitch", 8, 0, [0.35]),
    ("softstop_pitch_aft", 9, 0, [-12.0, 4.0]),
    ("softstop_clear", 9, 2, [0.0, 1.0]),
    ("inertia_roll", 10, 1, [0.6]),
    ("status_pitch", 20, 0, [3.25, -10.5, 4.0, 1, 5]),
    ("limited_damping", 22, 0, [1, 8, 0, 6.0]),
    ("ip_change", 50, 2, [192, 168, 1, 20, 5005]),
]


def main() -> None:
    valid = [
        {"name": n, "id": i, "axis": a, "fields": f, "hex": frame(i, a, f)}
        for n, i, a, f in VALID
    ]
    good = bytes.fromhex(frame(6, 0, [1.0]))
    bad_sum = good[:-1] + bytes([good[-1] ^ 0xFF])
    unknown = struct.pack("<BBH", 99, 0, 0)
    unknown += struct.pack("<H", checksum(unknown))
    bad_axis = struct.pack("<BBHf", 6, 7, 4, 1.0)
    bad_axis += struct.pack("<H", checksum(bad_axis))
    short = struct.pack("<BBHf", 6, 0, 8, 1.0)
    short += struct.pack("<H", checksum(short))
    bad_flag = struct.pack("<BBHffff", 2, 2, 16, 2, 0.5, 0, 1)
    bad_flag += struct.pack("<H", checksum(bad_flag))
    wrong_size = struct.pack("<BBHff", 6, 0, 8, 1.0, 2.0)
    wrong_size += struct.pack("<H", checksum(wrong_size))
    reserved = struct.pack("<BBHBB", 3, 0, 2, 0xAB, 0xCD)
    reserved += struct.pack("<H", checksum(reserved))
    invalid = [
        {"name": "bad_checksum", "hex": bad_sum.hex(), "error": "bad checksum"},
        {"name": "truncated", "hex": good[:5].hex(), "error": "truncated"},
        {"name": "length_past_end", "hex": short.hex(), "error": "truncated"},
        {"name": "trailing_byte", "hex": (good + b"\0").hex(), "error": "bad length"},
        {"name": "unknown_id", "hex": unknown.hex(), "error": "unknown id"},
        {"name": "bad_axis", "hex": bad_axis.hex(), "error": "bad axis"},
        {"name": "wrong_payload_size", "hex": wrong_size.hex(), "error": "bad payload size"},
        {"name": "non_binary_flag", "hex": bad_flag.hex(), "error": "bad field"},
    ]
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps({"valid": valid, "invalid": invalid,
                               "reserved": [{"name": "id3", "hex": reserved.hex(),
                                             "id": 3, "payload": "abcd"}]}, indent=2) + "\n")


if __name__ == "__main__":
    main()
