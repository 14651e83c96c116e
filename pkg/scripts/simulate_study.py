#!/usr/bin/env python3
"""Generate a synthetic study dataset for exercising the stats pipeline.

Writes ``responses.csv`` and ``participants.csv`` in the documented input
schema: one response row per (participant, forecast) with six activity
ratings, and one participant row with condition, GRIPS score, and coding
flags. Output is fully determined by the seed.

Group-level effects are built in (higher perceived risk under icon
conditions, a small negative risk-propensity slope) so downstream reports
have visible structure, but the numbers are synthetic: they stand in for
unavailable study data rather than reproducing it.
"""

from __future__ import annotations

import argparse
import csv
import random
from pathlib import Path

CONDITIONS = ("baseline", "summary-last", "icons", "per-day-icons")
GROUP_MEAN_RISK = {
    "baseline": 404.0,
    "summary-last": 442.0,
    "icons": 461.0,
    "per-day-icons": 465.0,
}
ACTIVITY_SPREAD = (-18.0, -10.0, 4.0, 8.0, 6.0, 10.0)
PER_DAY_MENTION_RATE = 0.97
SUMMARY_ONLY_MENTION_RATE = {
    "baseline": 0.65,
    "summary-last": 0.60,
    "icons": 0.55,
    "per-day-icons": 0.30,
}
GRIPS_SLOPE = -8.0


def clamp(value: float, low: float, high: float) -> float:
    return min(max(value, low), high)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", type=Path, default=Path("study-data"))
    parser.add_argument("--seed", type=int, default=49)
    parser.add_argument("--per-group", type=int, default=32)
    parser.add_argument("--forecasts", type=int, default=5)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    args.out_dir.mkdir(parents=True, exist_ok=True)

    participants = []
    responses = []
    pid_width = len(str(args.per_group * len(CONDITIONS)))
    counter = 0
    for condition in CONDITIONS:
        for _ in range(args.per_group):
            counter += 1
            pid = f"P{counter:0{pid_width}d}"
            grips = round(clamp(rng.gauss(3.2, 0.9), 1.0, 5.0), 2)
            base = GROUP_MEAN_RISK[condition] + GRIPS_SLOPE * (grips - 3.2)
            base += rng.gauss(0.0, 110.0)
            mentioned_per_day = rng.random() < PER_DAY_MENTION_RATE
            mentioned_summary = rng.random() < SUMMARY_ONLY_MENTION_RATE[condition]
            participants.append(
                (pid, condition, f"{grips:g}", str(mentioned_per_day).lower(),
                 str(mentioned_summary).lower())
            )
            for f in range(args.forecasts):
                forecast_id = f"day-{f + 1}"
                per_activity = base / 6.0
                ratings = [
                    f"{clamp(per_activity + offset + rng.gauss(0.0, 9.0), 0.0, 100.0):.1f}"
                    for offset in ACTIVITY_SPREAD
                ]
                responses.append([pid, forecast_id, *ratings])

    with open(args.out_dir / "participants.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["participant_id", "condition", "grips_score",
             "mentioned_per_day_info", "mentioned_summary_only_info"]
        )
        writer.writerows(participants)
    with open(args.out_dir / "responses.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["participant_id", "forecast_id", "car_trip", "day_hike", "mountaineering",
             "backcountry_skiing", "single_night_camping", "multi_night_camping"]
        )
        writer.writerows(responses)
    print(f"wrote {len(participants)} participants, {len(responses)} responses "
          f"to {args.out_dir}")


if __name__ == "__main__":
    main()
