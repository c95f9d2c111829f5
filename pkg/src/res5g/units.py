"""Decibel and power unit conversions.

All internal power arithmetic is done in watts; dB/dBm values only appear
at configuration and link-budget boundaries.
"""

import math


def db_to_linear(value_db: float) -> float:
    return 10.0 ** (value_db / 10.0)


def linear_to_db(value: float) -> float:
    if value <= 0.0:
        raise ValueError(f"cannot express non-positive value {value} in dB")
    return 10.0 * math.log10(value)


def dbm_to_watts(value_dbm: float) -> float:
    return 10.0 ** (value_dbm / 10.0) / 1000.0


def watts_to_dbm(value_w: float) -> float:
    if value_w <= 0.0:
        raise ValueError(f"cannot express non-positive power {value_w} W in dBm")
    return 10.0 * math.log10(value_w * 1000.0)
