#!/usr/bin/env python3
"""Regenerates scenarios/traces/santander_sample.csv.

Synthetic but realistic day of readings from ten SmartSantander sensors
(2022-12-03). Parking sensors (np...) report irregularly, fixed measure
sensors (t...) report near-periodically, and sensor t4074 swings between
10, 20 and 30 minute gaps. Every gap is a multiple of 60 s and the GCD over
all gaps is exactly 60 s. The file is deterministic: rerunning the script
reproduces it byte for byte.
"""

import math
import os
from datetime import datetime, timezone

T0 = int(datetime(2022, 12, 3, 0, 58, tzinfo=timezone.utc).timestamp())  # 0:58 UTC

SENSORS = [
    # (id, urn tail, latitude, longitude, start offset s)
    (1, "np3870", 43.464595794678, -3.7974231243134, 300),
    (9, "t258", 43.46262, -3.80161, 120),
    (19, "np3790", 43.463623046875, -3.799674987793, 14520),
    (24, "t370", 43.46367, -3.81114, 60),
    (53, "t51", 43.47092, -3.80174, 120),
    (90, "t4074", 43.463869, -3.796732, 120),
    (110, "t506", 43.46385, -3.80545, 0),
    (135, "np3873", 43.464653015137, -3.7970464229584, 21480),
    (146, "np3864", 43.464511871338, -3.7979302406311, 42840),
    (213, "np3856", 43.464431762695, -3.7985026836395, 30360),
]


def deltas_for(sensor_id):
    if sensor_id == 1:  # parking, busy street: 114 gaps
        cycle = [300, 660, 420, 900, 540, 240, 780, 600, 360, 480]
        return cycle * 11 + [360, 480, 540, 420]
    if sensor_id == 9:  # 5 min readings with occasional skips: 265 gaps
        d = [300] * 265
        for i in range(20, 265, 25):
            d[i] = 600
        return d
    if sensor_id == 19:  # parking, quiet street: 14 gaps
        return [2940, 4980, 1620, 3900, 5400, 2160, 4440, 2760, 5040, 3300,
                1980, 4620, 3120, 3060]
    if sensor_id == 24:  # 5 min readings: 269 gaps
        d = [300] * 269
        for i in range(30, 269, 35):
            d[i] = 600
        return d
    if sensor_id == 53:  # 5 min readings with 7 min hiccups: 268 gaps
        d = [300] * 268
        for i in range(15, 256, 16):
            d[i] = 420
        d[133] = 600
        return d
    if sensor_id == 90:  # 10 min baseline swinging to 20 and 30 min: 127 gaps
        d = []
        for _ in range(4):
            d += [600] * 15 + [1200]
        for _ in range(3):
            d += [600] * 15 + [1800]
        return d + [600] * 15
    if sensor_id == 110:  # 5 min readings, two short gaps: 276 gaps
        d = [300] * 276
        d[50] = d[150] = 240
        return d
    if sensor_id == 135:  # parking with an evening burst: 101 gaps
        cycle = [480, 780, 540, 1020, 300, 840, 660, 420, 960, 600]
        return cycle * 9 + [120, 180, 240] * 3 + [120, 180]
    if sensor_id == 146:  # parking: 18 gaps
        return [1440, 3300, 900, 2700, 1980, 3840, 1200, 2520, 3060, 1740,
                2400, 1080, 3480, 1560, 2160, 1320, 2640, 1080]
    if sensor_id == 213:  # parking: 12 gaps
        return [1380, 2820, 1200, 4740, 960, 3660, 2280, 5100, 1860, 3360,
                1560, 1860]
    raise KeyError(sensor_id)


def value_for(sensor_id, urn_tail, k):
    if urn_tail.startswith("np"):
        return str(k % 2)  # car arrived / car left
    return f"{20 + 5 * math.sin((sensor_id + k) / 9):.2f}"


def main():
    rows = []
    for sensor_id, tail, lat, lon, offset in SENSORS:
        urn = f"urn:x-iot:smartsantander:u7jcfa:{tail}"
        t = T0 + offset
        times = [t]
        for gap in deltas_for(sensor_id):
            t += gap
            times.append(t)
        for k, ts in enumerate(times):
            stamp = datetime.fromtimestamp(ts, tz=timezone.utc).strftime(
                "%Y-%m-%dT%H:%M:%SZ")
            rows.append((ts, sensor_id,
                         f"{sensor_id},{urn},{lat},{lon},{stamp},stable,"
                         f"{value_for(sensor_id, tail, k)}"))
    rows.sort()

    out = os.path.join(os.path.dirname(__file__), os.pardir, "scenarios",
                       "traces", "santander_sample.csv")
    os.makedirs(os.path.dirname(out), exist_ok=True)
    with open(out, "w") as f:
        f.write("sensor_id,urn,latitude,longitude,timestamp,type,value\n")
        for _, _, line in rows:
            f.write(line + "\n")
    print(f"wrote {os.path.normpath(out)} ({len(rows)} readings)")


if __name__ == "__main__":
    main()
