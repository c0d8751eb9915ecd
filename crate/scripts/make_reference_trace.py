"""Writes data/reference.trip.csv: a synthetic 1 Hz trip of about 14 km
through Linz, with zone speeds, signal stops and GPS jitter.

The trace is generated, not recorded. It exists so `platoonsim ingest` has
a realistic input of the right shape and length.
"""

import math
import random
from datetime import datetime, timedelta
from pathlib import Path

EARTH_RADIUS_M = 6_371_000.0
# (lat, lon) waypoints, west to east across the city
WAYPOINTS = [
    (48.3069, 14.2858),
    (48.3031, 14.3002),
    (48.2990, 14.3151),
    (48.2962, 14.3320),
    (48.2941, 14.3492),
    (48.2960, 14.3660),
    (48.2998, 14.3815),
    (48.3012, 14.3990),
    (48.2985, 14.4160),
    (48.2952, 14.4290),
    (48.2910, 14.4400),
    (48.2870, 14.4520),
    (48.2838, 14.4648),
]
# (until_m, cruise_kmh)
ZONES = [(1500, 48), (4000, 66), (6500, 47), (10500, 67), (12500, 48), (1e9, 66)]
STOPS_M = [900, 2300, 3200, 4700, 5900, 7800, 9200, 10800, 11600, 12400, 13300]
STOP_S = 25
ACCEL, DECEL = 1.2, 1.5
START = datetime(2020, 6, 15, 11, 2, 7)
DAY_NAMES = ["Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday"]


def haversine(a, b):
    la1, lo1, la2, lo2 = map(math.radians, (*a, *b))
    h = math.sin((la2 - la1) / 2) ** 2 + math.cos(la1) * math.cos(la2) * math.sin((lo2 - lo1) / 2) ** 2
    return 2 * EARTH_RADIUS_M * math.asin(math.sqrt(h))


def bearing(a, b):
    la1, lo1, la2, lo2 = map(math.radians, (*a, *b))
    y = math.sin(lo2 - lo1) * math.cos(la2)
    x = math.cos(la1) * math.sin(la2) - math.sin(la1) * math.cos(la2) * math.cos(lo2 - lo1)
    return math.degrees(math.atan2(y, x)) % 360


def locate(cum, s):
    for i in range(1, len(cum)):
        if s <= cum[i] or i == len(cum) - 1:
            f = min(1.0, (s - cum[i - 1]) / (cum[i] - cum[i - 1]))
            a, b = WAYPOINTS[i - 1], WAYPOINTS[i]
            return (a[0] + f * (b[0] - a[0]), a[1] + f * (b[1] - a[1])), bearing(a, b)
    raise ValueError(s)


def cruise(s):
    return next(kmh for until, kmh in ZONES if s < until) / 3.6


def main():
    rng = random.Random(20200615)
    cum = [0.0]
    for a, b in zip(WAYPOINTS, WAYPOINTS[1:]):
        cum.append(cum[-1] + haversine(a, b))
    length = cum[-1]

    rows = []
    s, v, t, wait = 0.0, 0.0, 0, 0
    pending = list(STOPS_M)
    while s < length:
        if wait > 0:
            wait -= 1
            v = 0.0
        else:
            target = cruise(s) * (1 + rng.uniform(-0.04, 0.04))
            if pending and pending[0] - s < v * v / (2 * DECEL) + v:
                target = 0.0
            v = min(target, v + ACCEL) if target >= v else max(target, v - DECEL)
            if pending and s >= pending[0] - 3 and v < 0.5:
                pending.pop(0)
                wait = STOP_S
                v = 0.0
            if target == 0.0 and v == 0.0 and wait == 0:
                v = 0.5
        s += v
        (lat, lon), heading = locate(cum, min(s, length))
        jitter = 1.5 / 111_000
        when = START + timedelta(seconds=t)
        rows.append([
            f"T:{DAY_NAMES[when.weekday()]}",
            f"Y:{when.year:04} M:{when.month:02} D:{when.day:02}",
            f"H:{when.hour:02} M:{when.minute:02} S:{when.second:02}",
            f"{lat + rng.gauss(0, jitter):.6f}",
            "n",
            f"{lon + rng.gauss(0, jitter):.6f}",
            "e",
            f"{265 + 15 * math.sin(s / 2000):.1f}",
            f"{v * 3.6:.1f}",
            f"{heading:.1f}",
            "-",
        ])
        t += 1

    header = "day,date,time,lat,lat_hem,lon,lon_hem,height_m,speed_kmh,heading_deg,vox"
    out = Path(__file__).resolve().parent.parent / "data" / "reference.trip.csv"
    out.write_text(header + "\n" + "\n".join(",".join(r) for r in rows) + "\n")


if __name__ == "__main__":
    main()
