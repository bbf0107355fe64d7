#!/usr/bin/env python3
"""Regenerate the weekly school/holiday calendars under data/calendar/.

Weeks start on Monday. A week is labelled with a break status when the
majority of its weekdays fall inside a school break; holidays are listed
when any day of the week is a public holiday.
"""
import datetime as dt
import pathlib

OUT = pathlib.Path(__file__).resolve().parents[1] / "calendar"
D = dt.date

REGIONS = {
    "hk": {
        "first_week": D(2022, 10, 31),
        "holidays": {
            D(2022, 12, 26): "Christmas Day (observed)",
            D(2022, 12, 27): "Boxing Day (observed)",
            D(2023, 1, 2): "New Year (observed)",
            D(2023, 1, 23): "Lunar New Year",
            D(2023, 1, 24): "Lunar New Year",
            D(2023, 1, 25): "Lunar New Year",
            D(2023, 4, 5): "Ching Ming Festival",
            D(2023, 4, 7): "Good Friday",
            D(2023, 4, 8): "Easter",
            D(2023, 4, 10): "Easter Monday",
            D(2023, 5, 1): "Labour Day",
            D(2023, 5, 26): "Buddha's Birthday",
            D(2023, 6, 22): "Tuen Ng Festival",
            D(2023, 7, 1): "HKSAR Establishment Day",
            D(2023, 9, 30): "Day after Mid-Autumn Festival",
            D(2023, 10, 2): "National Day (observed)",
            D(2023, 10, 23): "Chung Yeung Festival",
            D(2023, 12, 25): "Christmas Day",
            D(2023, 12, 26): "Boxing Day",
            D(2024, 1, 1): "New Year",
            D(2024, 2, 10): "Lunar New Year",
            D(2024, 2, 12): "Lunar New Year",
            D(2024, 2, 13): "Lunar New Year",
            D(2024, 3, 29): "Good Friday",
            D(2024, 3, 30): "Easter",
            D(2024, 4, 1): "Easter Monday",
            D(2024, 4, 4): "Ching Ming Festival",
            D(2024, 5, 1): "Labour Day",
            D(2024, 5, 15): "Buddha's Birthday",
            D(2024, 6, 10): "Tuen Ng Festival",
            D(2024, 7, 1): "HKSAR Establishment Day",
            D(2024, 9, 18): "Day after Mid-Autumn Festival",
            D(2024, 10, 1): "National Day",
            D(2024, 10, 11): "Chung Yeung Festival",
            D(2024, 12, 25): "Christmas Day",
            D(2024, 12, 26): "Boxing Day",
        },
        "breaks": [
            (D(2022, 12, 21), D(2023, 1, 2), "winter_break"),
            (D(2023, 1, 19), D(2023, 1, 28), "winter_break"),
            (D(2023, 7, 19), D(2023, 8, 31), "summer_break"),
            (D(2023, 12, 21), D(2024, 1, 1), "winter_break"),
            (D(2024, 2, 8), D(2024, 2, 17), "winter_break"),
            (D(2024, 7, 17), D(2024, 8, 31), "summer_break"),
            (D(2024, 12, 21), D(2025, 1, 1), "winter_break"),
        ],
    },
    "cn": {
        "first_week": D(2023, 1, 2),
        "holidays": {
            D(2023, 1, 2): "New Year (observed)",
            **{D(2023, 1, 21) + dt.timedelta(days=i): "Spring Festival" for i in range(7)},
            D(2023, 4, 5): "Qingming Festival",
            **{D(2023, 4, 29) + dt.timedelta(days=i): "Labour Day" for i in range(5)},
            **{D(2023, 6, 22) + dt.timedelta(days=i): "Dragon Boat Festival" for i in range(3)},
            D(2023, 9, 29): "Mid-Autumn Festival",
            **{D(2023, 9, 30) + dt.timedelta(days=i): "National Day" for i in range(7)},
            D(2024, 1, 1): "New Year",
            **{D(2024, 2, 10) + dt.timedelta(days=i): "Spring Festival" for i in range(8)},
            **{D(2024, 4, 4) + dt.timedelta(days=i): "Qingming Festival" for i in range(3)},
            **{D(2024, 5, 1) + dt.timedelta(days=i): "Labour Day" for i in range(5)},
            D(2024, 6, 10): "Dragon Boat Festival",
            **{D(2024, 9, 15) + dt.timedelta(days=i): "Mid-Autumn Festival" for i in range(3)},
            **{D(2024, 10, 1) + dt.timedelta(days=i): "National Day" for i in range(7)},
        },
        "breaks": [
            (D(2023, 1, 14), D(2023, 2, 5), "winter_break"),
            (D(2023, 7, 1), D(2023, 8, 31), "summer_break"),
            (D(2024, 1, 27), D(2024, 2, 17), "winter_break"),
            (D(2024, 7, 6), D(2024, 8, 31), "summer_break"),
        ],
    },
}

# The CN school calendar also marks the Spring Festival label on the week of
# 1 February 2024, when most schools had already closed for the winter.
REGIONS["cn"]["holidays"][D(2024, 2, 1)] = "Spring Festival"

for name, region in REGIONS.items():
    rows = []
    week = region["first_week"]
    while week <= D(2024, 12, 30):
        days = [week + dt.timedelta(days=i) for i in range(7)]
        status = "in_session"
        for lo, hi, label in region["breaks"]:
            weekdays_off = sum(1 for d in days[:5] if lo <= d <= hi)
            if weekdays_off >= 3:
                status = label
        names = []
        for d in days:
            h = region["holidays"].get(d)
            if h and h not in names:
                names.append(h)
        rows.append(f"{week.isoformat()},{status},{';'.join(names)}")
        week += dt.timedelta(days=7)
    (OUT / f"{name}_2023_2024.csv").write_text("week_start,school_status,holidays\n" + "\n".join(rows) + "\n")
    print(name, len(rows))
