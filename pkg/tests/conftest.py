import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from res5g.scenario_io import scenario_from_dict


def toy_scenario_dict(**overrides) -> dict:
    """A single-site scenario small enough for hand-checked ledgers."""
    document = {
        "name": "toy",
        "seed": 7,
        "runs": 2,
        "res_mode": "pv+wt",
        "window": {"start_step": 0, "step_count": 24, "dt_hours": 1.0},
        "bounds": {"xmin": 0.0, "ymin": 0.0, "xmax": 400.0, "ymax": 400.0},
        "users": {"count": 12, "demand": {"kind": "constant", "mbps": 10.0}},
        "battery": {"count_parallel": 1},
        "radio": {"tx_power_policy": "max"},
        "sites": [
            {
                "position": [200.0, 200.0],
                "antenna_height_m": 39.0,
                "building_altitude_m": 34.0,
            }
        ],
    }
    document.update(overrides)
    return document


@pytest.fixture
def toy_config():
    return scenario_from_dict(toy_scenario_dict())


def weather_csv(rows) -> str:
    """Build weather CSV text from (step, temp, wind, irr, pressure) rows."""
    lines = ["step,temperature_C,wind_mps,irradiance_Wm2,pressure_Pa"]
    lines.extend(",".join(str(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def constant_weather_csv(steps, temp=10.0, wind=0.0, irradiance=0.0, pressure=101500.0) -> str:
    return weather_csv((i, temp, wind, irradiance, pressure) for i in range(steps))


@pytest.fixture
def constant_weather_file(tmp_path):
    def make(steps=24, **kwargs):
        path = tmp_path / f"weather_{steps}_{len(list(tmp_path.iterdir()))}.csv"
        path.write_text(constant_weather_csv(steps, **kwargs), encoding="utf-8")
        return path

    return make
