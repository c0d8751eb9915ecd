"""Writes data/reference.rt, the calibrated reference corridor."""

from pathlib import Path

# (start_m, end_m, limit_kmh)
SEGMENTS = [
    (0, 1500, 50),
    (1500, 4000, 70),
    (4000, 6500, 50),
    (6500, 10500, 70),
    (10500, 12500, 50),
    (12500, 14200, 70),
]
SIGNALS = [
    450, 900, 1350, 2300, 2800, 3200, 4300, 4700, 5100, 5500, 5900, 6300,
    7200, 7800, 8500, 9200, 9900, 10800, 11200, 11600, 12000, 12400, 13300,
]
CYCLE_S, GREEN_S, OFFSET_STEP_S = 90, 45, 29


def main():
    lines = [
        "# Reference corridor, about 14 km of mixed urban and arterial road.",
        "# segment <start_m> <end_m> <limit_mps>; stop <id> <position_m> <dwell_s>;",
        "# signal <position_m> <cycle_s> <green_s> <offset_s>",
        "length_m 14200",
    ]
    lines += [f"segment {a} {b} {round(kmh / 3.6, 4)}" for a, b, kmh in SEGMENTS]
    lines += ["stop stop_1 100 0", "stop stop_2 14100 0"]
    lines += [
        f"signal {pos} {CYCLE_S} {GREEN_S} {(k * OFFSET_STEP_S) % CYCLE_S}"
        for k, pos in enumerate(SIGNALS)
    ]
    out = Path(__file__).resolve().parent.parent / "data" / "reference.rt"
    out.write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
