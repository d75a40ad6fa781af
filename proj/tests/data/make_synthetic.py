"""Regenerates synthetic_fire.csv, the small CI fixture used by the tests."""
import csv
import random

rng = random.Random(20240601)
rows = []
for i in range(120):
    fire = i % 5 != 0 and (i % 5 != 1 or i % 2 == 0)
    t = rng.gauss(33 if fire else 27, 3.0)
    rh = rng.gauss(52 if fire else 72, 8.0)
    ws = rng.gauss(15, 3.0)
    rain = max(0.0, rng.gauss(0.2 if fire else 1.5, 0.8))
    ffmc = rng.gauss(86 if fire else 60, 7.0)
    rows.append([i % 28 + 1, 7, 2012, round(t, 1), round(rh, 1), round(ws, 1), round(rain, 2), round(ffmc, 1),
                 "fire" if fire else "not fire"])

with open("synthetic_fire.csv", "w", newline="") as f:
    f.write("Synthetic Region Dataset\n")
    w = csv.writer(f)
    w.writerow(["day", "month", "year", "Temperature", " RH", " Ws", "Rain ", "FFMC", "Classes  "])
    for r in rows:
        w.writerow(r[:-1] + [r[-1] + "   "])
