#!/usr/bin/env python3
"""Plot mean battery state-of-charge traces from a report run.

Usage:
    res5g report --scenario ... --weather ... --out out/report
    python3 docs/plot_soc.py out/report/soc_trace.csv soc.png
"""

import csv
import sys
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def main(trace_path: str, out_path: str) -> None:
    series = defaultdict(list)
    with open(trace_path, newline="", encoding="utf-8") as handle:
        rows = (line for line in handle if not line.startswith("#"))
        for record in csv.DictReader(rows):
            key = (record["day"], record["mode"])
            series[key].append((int(record["step"]), float(record["mean_soc"])))

    days = sorted({day for day, _ in series})
    fig, axes = plt.subplots(1, len(days), figsize=(4 * len(days), 3.2), sharey=True)
    if len(days) == 1:
        axes = [axes]
    for ax, day in zip(axes, days):
        for mode in ("none", "pv", "wt", "pv+wt"):
            points = sorted(series.get((day, mode), []))
            if points:
                ax.plot([s for s, _ in points], [v for _, v in points], label=mode)
        ax.set_title(day.replace("weather_", ""))
        ax.set_xlabel("hour")
        ax.set_ylim(-0.02, 1.02)
    axes[0].set_ylabel("mean state of charge")
    axes[-1].legend(loc="upper right", fontsize="small")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    print(f"wrote {out_path}")


if __name__ == "__main__":
    if len(sys.argv) != 3:
        raise SystemExit(__doc__)
    main(sys.argv[1], sys.argv[2])
