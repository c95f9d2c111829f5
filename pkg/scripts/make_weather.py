#!/usr/bin/env python3
"""Regenerate the bundled synthetic seasonal weather traces.

Each trace is one 24-hour day with smooth diurnal shapes chosen to give
the four classic regimes: a windy, dim winter day; a hot, bright summer
day; a breezy spring equinox; and a calm, mild autumn equinox. Values
are deterministic; rerunning this script reproduces the files byte for
byte. The golden acceptance outputs are frozen against these traces, so
regenerate them too after any change here.
"""

from __future__ import annotations

import math
from pathlib import Path

DATA_DIR = Path(__file__).resolve().parent.parent / "src" / "res5g" / "data"

HEADER = "step,temperature_C,wind_mps,irradiance_Wm2,pressure_Pa"


def diurnal(mean: float, amplitude: float, peak_hour: float, t: float) -> float:
    return mean + amplitude * math.sin(2.0 * math.pi * (t - peak_hour + 6.0) / 24.0)


def daylight(peak: float, sunrise: float, sunset: float, t: float) -> float:
    if t < sunrise or t > sunset:
        return 0.0
    return peak * math.sin(math.pi * (t - sunrise) / (sunset - sunrise))


def day(
    temp_mean: float,
    temp_amp: float,
    wind_mean: float,
    wind_amp: float,
    wind_peak_hour: float,
    irr_peak: float,
    sunrise: float,
    sunset: float,
    pressure: float,
) -> list[str]:
    rows = [HEADER]
    for t in range(24):
        temp = diurnal(temp_mean, temp_amp, 15.0, t)
        wind = max(0.0, diurnal(wind_mean, wind_amp, wind_peak_hour, t))
        irr = daylight(irr_peak, sunrise, sunset, t)
        p = pressure - 40.0 * math.sin(2.0 * math.pi * (t - 4.0) / 24.0)
        rows.append(f"{t},{temp:.2f},{wind:.2f},{irr:.1f},{p:.0f}")
    return rows


PROFILES = {
    "weather_vernal_equinox.csv": dict(
        temp_mean=9.0,
        temp_amp=5.0,
        wind_mean=9.5,
        wind_amp=1.5,
        wind_peak_hour=14.0,
        irr_peak=550.0,
        sunrise=6.0,
        sunset=18.0,
        pressure=101800.0,
    ),
    "weather_summer_solstice.csv": dict(
        temp_mean=24.5,
        temp_amp=6.5,
        wind_mean=3.2,
        wind_amp=1.3,
        wind_peak_hour=16.0,
        irr_peak=900.0,
        sunrise=4.0,
        sunset=21.0,
        pressure=101250.0,
    ),
    "weather_autumn_equinox.csv": dict(
        temp_mean=11.5,
        temp_amp=3.5,
        wind_mean=2.2,
        wind_amp=1.0,
        wind_peak_hour=12.0,
        irr_peak=420.0,
        sunrise=6.0,
        sunset=18.0,
        pressure=101100.0,
    ),
    "weather_winter_solstice.csv": dict(
        temp_mean=-0.5,
        temp_amp=2.5,
        wind_mean=10.0,
        wind_amp=3.0,
        wind_peak_hour=13.0,
        irr_peak=110.0,
        sunrise=8.0,
        sunset=15.5,
        pressure=102400.0,
    ),
}


def main() -> None:
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    for name, profile in PROFILES.items():
        path = DATA_DIR / name
        path.write_text("\n".join(day(**profile)) + "\n", encoding="utf-8")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
