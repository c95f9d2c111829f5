"""Wind turbine bank output for one cell.

A turbine produces power between its cut-in and cut-out speeds according
to a power curve sampled as (speed, output) anchor points; between the
rated and cut-out speeds the output is pinned at the rated power. The
bank output scales the single-turbine curve by the turbine count and the
ratio of actual air density at hub altitude to the standard test density.

When no datasheet curve is supplied, a cubic ramp between cut-in and
rated speed is sampled at 0.5 m/s spacing, which matches momentum-theory
scaling well enough for sizing studies.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field

from .atmosphere import PhysicalConstants, SiteGeometry, WeatherSample, air_density_at, wind_speed_at

CURVE_ANCHOR_SPACING_MPS = 0.5


def cubic_ramp_curve(
    rated_power_w: float,
    cut_in_mps: float,
    rated_speed_mps: float,
    spacing_mps: float = CURVE_ANCHOR_SPACING_MPS,
) -> tuple[tuple[float, float], ...]:
    """Default power-curve anchors: cubic ramp from cut-in to rated speed."""
    anchors: list[tuple[float, float]] = []
    span = rated_speed_mps - cut_in_mps
    v = cut_in_mps
    while v < rated_speed_mps - 1e-12:
        anchors.append((v, rated_power_w * ((v - cut_in_mps) / span) ** 3))
        v += spacing_mps
    anchors.append((rated_speed_mps, rated_power_w))
    return tuple(anchors)


@dataclass(frozen=True)
class WindTurbineConfig:
    """Parameters of the turbine bank attached to one cell.

    ``power_curve`` accepts datasheet anchors as (speed m/s, output W)
    pairs covering at least [cut_in, rated_speed]; ``None`` selects the
    cubic default. Rotor radius and blade count are metadata.
    """

    rated_power_w: float = 1000.0
    rated_speed_mps: float = 10.0
    cut_in_mps: float = 3.0
    cut_out_mps: float = 16.2
    hub_altitude_m: float = 42.0  # ground-relative
    count_serial: int = 1
    count_parallel: int = 1
    stc_air_density: float = 1.225
    rotor_radius_m: float = 1.09
    blade_count: int = 3
    nominal_voltage_v: float = 48.0
    power_curve: tuple[tuple[float, float], ...] | None = None
    _anchors: tuple[tuple[float, float], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not 0.0 < self.cut_in_mps < self.rated_speed_mps <= self.cut_out_mps:
            raise ValueError(
                "wind speeds must satisfy 0 < cut-in < rated <= cut-out, got "
                f"{self.cut_in_mps}/{self.rated_speed_mps}/{self.cut_out_mps}"
            )
        if self.count_serial < 1 or self.count_parallel < 1:
            raise ValueError("turbine counts must be >= 1")
        if self.rated_power_w < 0.0:
            raise ValueError("rated power must be >= 0")
        if self.stc_air_density <= 0.0:
            raise ValueError("standard air density must be positive")
        anchors = self.power_curve
        if anchors is None:
            anchors = cubic_ramp_curve(self.rated_power_w, self.cut_in_mps, self.rated_speed_mps)
        else:
            anchors = tuple((float(v), float(p)) for v, p in anchors)
            self._validate_anchors(anchors)
        object.__setattr__(self, "_anchors", anchors)

    def _validate_anchors(self, anchors: tuple[tuple[float, float], ...]) -> None:
        if len(anchors) < 2:
            raise ValueError("a power curve needs at least two anchor points")
        speeds = [v for v, _ in anchors]
        if any(b <= a for a, b in zip(speeds, speeds[1:])):
            raise ValueError("power curve speeds must be strictly increasing")
        if speeds[0] > self.cut_in_mps + 1e-9 or speeds[-1] < self.rated_speed_mps - 1e-9:
            raise ValueError(
                "power curve anchors must cover the cut-in..rated speed interval"
            )
        ramp = [p for v, p in anchors if v <= self.rated_speed_mps + 1e-9]
        if any(b < a for a, b in zip(ramp, ramp[1:])):
            raise ValueError("power curve must be non-decreasing up to the rated speed")
        for v, p in anchors:
            if p < 0.0:
                raise ValueError("power curve outputs must be >= 0")
            if v >= self.rated_speed_mps - 1e-9 and abs(p - self.rated_power_w) > 1e-6 * max(
                1.0, self.rated_power_w
            ):
                raise ValueError(
                    "power curve must equal the rated power at and beyond the rated speed"
                )

    @property
    def turbine_count(self) -> int:
        return self.count_serial * self.count_parallel


def power_curve_eval(cfg: WindTurbineConfig, wind_speed_mps: float) -> float:
    """Single-turbine output at standard air density.

    Zero outside [cut-in, cut-out], exactly the rated power on
    [rated, cut-out], and piecewise-linear interpolation of the curve
    anchors in between.
    """
    if wind_speed_mps < 0.0:
        raise ValueError(f"wind speed must be >= 0, got {wind_speed_mps}")
    if wind_speed_mps < cfg.cut_in_mps or wind_speed_mps > cfg.cut_out_mps:
        return 0.0
    if wind_speed_mps >= cfg.rated_speed_mps:
        return cfg.rated_power_w
    anchors = cfg._anchors
    speeds = [v for v, _ in anchors]
    idx = bisect.bisect_right(speeds, wind_speed_mps)
    if idx == 0:
        return anchors[0][1]
    if idx >= len(anchors):
        return anchors[-1][1]
    (v0, p0), (v1, p1) = anchors[idx - 1], anchors[idx]
    return p0 + (p1 - p0) * (wind_speed_mps - v0) / (v1 - v0)


def wt_power(
    sample: WeatherSample,
    geom: SiteGeometry,
    consts: PhysicalConstants,
    cfg: WindTurbineConfig,
) -> float:
    """Bank output power in W: turbine count x curve output at hub-height
    wind speed x (hub air density / standard density)."""
    hub_speed = wind_speed_at(sample, geom, cfg.hub_altitude_m)
    density = air_density_at(sample, geom, consts, cfg.hub_altitude_m)
    return cfg.turbine_count * power_curve_eval(cfg, hub_speed) * density / cfg.stc_air_density
