#!/usr/bin/env python3
"""Regenerate the synthetic Hong Kong fixture under data/hongkong/.

The series mimics the shape of weekly HFMD admissions (winter trough,
early-summer peak, small autumn bump) with negative-binomial noise. It is
not the CHP record; drop the real export into cases.csv to use it.
"""
import datetime as dt
import math
import pathlib

import numpy as np

ROOT = pathlib.Path(__file__).resolve().parents[1] / "hongkong"
rng = np.random.default_rng(20230102)

start = dt.date(2022, 10, 31)
end = dt.date(2024, 9, 30)
weeks = []
d = start
while d <= end:
    weeks.append(d)
    d += dt.timedelta(days=7)


def bump(day, center, width, height):
    return height * math.exp(-0.5 * ((day - center).days / width) ** 2)


def intensity(day):
    lam = 5.0
    lam += bump(day, dt.date(2023, 6, 26), 30, 16.0)
    lam += bump(day, dt.date(2023, 10, 16), 20, 6.0)
    lam += bump(day, dt.date(2024, 6, 24), 28, 13.0)
    lam += bump(day, dt.date(2024, 9, 23), 12, 3.0)
    return lam


dispersion = 25.0
counts = []
for w in weeks:
    lam = intensity(w)
    p = dispersion / (dispersion + lam)
    counts.append(int(rng.negative_binomial(dispersion, p)))

with open(ROOT / "cases.csv", "w") as f:
    f.write("date,cases\n")
    for w, c in zip(weeks, counts):
        f.write(f"{w.isoformat()},{c}\n")

# Daily weather: seasonal temperature and humidity, showery summers.
with open(ROOT / "weather_daily.csv", "w") as f:
    f.write("date,temp_c,humidity_pct,precip_mm\n")
    day = start - dt.timedelta(days=70)
    while day <= end + dt.timedelta(days=6):
        doy = day.timetuple().tm_yday
        temp = 23.0 - 6.5 * math.cos(2 * math.pi * (doy - 20) / 365.25) + rng.normal(0, 1.2)
        hum = 77.0 + 6.0 * math.sin(2 * math.pi * (doy - 60) / 365.25) + rng.normal(0, 4.0)
        hum = min(100.0, max(30.0, hum))
        wet = 0.15 + 0.3 * max(0.0, math.sin(2 * math.pi * (doy - 90) / 365.25))
        rain = float(rng.gamma(0.8, 18.0)) if rng.random() < wet else 0.0
        cells = [f"{temp:.1f}", f"{hum:.1f}", f"{rain:.1f}"]
        # A handful of station outages leave blank cells.
        if rng.random() < 0.01:
            cells[1] = ""
        f.write(f"{day.isoformat()},{','.join(cells)}\n")
        day += dt.timedelta(days=1)

# Monthly territory-wide totals, roughly four times the admission counts.
monthly = {}
for w, c in zip(weeks, counts):
    key = f"{w.year:04d}-{w.month:02d}"
    monthly[key] = monthly.get(key, 0) + c
with open(ROOT / "gov_monthly.csv", "w") as f:
    f.write("month,region,total_cases\n")
    for key in sorted(monthly):
        f.write(f"{key},Hong Kong,{4 * monthly[key] + int(rng.integers(0, 10))}\n")

window = [c for w, c in zip(weeks, counts) if dt.date(2023, 1, 9) <= w <= dt.date(2024, 9, 30)]
print(f"weeks={len(weeks)} window={len(window)} mean={np.mean(window):.2f} "
      f"sd={np.std(window, ddof=1):.2f} max={max(window)}")
