"""Altitude corrections for station-level weather measurements.

Weather records come from a station at a fixed absolute altitude; the
simulator needs wind speed, temperature, pressure and air density at the
(ground-relative) altitudes of turbine hubs, PV panels and equipment rooms.
Wind speed is extrapolated with the logarithmic shear profile, temperature
with the standard tropospheric lapse rate, pressure with the barometric
formula using altitude-dependent gravity, and density from the partial
pressures of dry air and (saturated) water vapor.

Every function here is pure; instances are frozen dataclasses, so the
whole module is safe for unrestricted parallel use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InconsistentWeatherError, InvalidGeometryError

KELVIN_OFFSET = 273.15

#: Tropospheric temperature lapse rate in K per metre of altitude gain.
LAPSE_RATE_K_PER_M = 0.0065


@dataclass(frozen=True)
class WeatherSample:
    """One station-level weather record for a single simulation step.

    ``timestamp`` is the simulation step index (hours since the start of
    the trace). Temperature, wind speed and pressure are as measured at
    the weather station; irradiance is global horizontal.
    """

    timestamp: int
    station_temperature_c: float
    station_wind_mps: float
    irradiance_wm2: float
    station_pressure_pa: float

    def __post_init__(self) -> None:
        if self.irradiance_wm2 < 0.0:
            raise ValueError(f"irradiance must be >= 0, got {self.irradiance_wm2}")
        if self.station_wind_mps < 0.0:
            raise ValueError(f"wind speed must be >= 0, got {self.station_wind_mps}")
        if self.station_pressure_pa <= 0.0:
            raise ValueError(f"pressure must be > 0, got {self.station_pressure_pa}")
        if self.station_temperature_c <= -KELVIN_OFFSET:
            raise ValueError(
                f"temperature must be above absolute zero, got {self.station_temperature_c}"
            )


@dataclass(frozen=True)
class SiteGeometry:
    """Vertical reference frame shared by all altitude corrections.

    ``terrain_altitude_m`` converts ground-relative altitudes to absolute
    ones; ``station_altitude_m`` is the absolute altitude of the weather
    station; ``reference_altitude_m`` is the level of the pressure reading
    (sea level by default); ``surface_roughness_m`` parameterises the wind
    shear profile.
    """

    terrain_altitude_m: float = 54.44
    station_altitude_m: float = 90.0
    reference_altitude_m: float = 0.0
    surface_roughness_m: float = 3.0

    def __post_init__(self) -> None:
        if not self.surface_roughness_m > 0.0:
            raise InvalidGeometryError(
                f"surface roughness must be > 0, got {self.surface_roughness_m}"
            )
        if not self.station_altitude_m > self.surface_roughness_m:
            raise InvalidGeometryError(
                "weather station altitude must exceed the surface roughness length "
                f"({self.station_altitude_m} <= {self.surface_roughness_m})"
            )


@dataclass(frozen=True)
class PhysicalConstants:
    """Gas and gravity constants used by the pressure/density chain."""

    dry_air_gas_constant: float = 287.058  # J/(kg*K)
    vapor_gas_constant: float = 461.495  # J/(kg*K)
    universal_gas_constant: float = 8.31432  # N*m/(mol*K)
    air_molar_mass: float = 0.0289644  # kg/mol
    sea_level_gravity: float = 9.80665  # m/s^2
    earth_radius: float = 6371009.0  # m

    def __post_init__(self) -> None:
        for name, value in self.__dict__.items():
            if not value > 0.0:
                raise ValueError(f"physical constant {name} must be > 0, got {value}")


def gravity_at(height_m: float, consts: PhysicalConstants) -> float:
    """Gravitational acceleration at ``height_m`` above the reference
    sphere: g0 * (re / (re + h))^2."""
    ratio = consts.earth_radius / (consts.earth_radius + height_m)
    return consts.sea_level_gravity * ratio * ratio


def wind_speed_at(sample: WeatherSample, geom: SiteGeometry, height_m: float) -> float:
    """Wind speed at ground-relative altitude ``height_m``.

    Logarithmic shear profile anchored at the station measurement:
    v(h) = v_station * ln((h + h_terrain) / z0) / ln(h_station / z0).
    A zero station reading maps to zero at every altitude.
    """
    absolute_m = height_m + geom.terrain_altitude_m
    if absolute_m <= geom.surface_roughness_m:
        raise InvalidGeometryError(
            f"target altitude {absolute_m} m is not above the roughness length "
            f"{geom.surface_roughness_m} m"
        )
    denominator = math.log(geom.station_altitude_m / geom.surface_roughness_m)
    if denominator <= 0.0:
        raise InvalidGeometryError(
            "station altitude must exceed the roughness length for the shear profile"
        )
    return sample.station_wind_mps * math.log(absolute_m / geom.surface_roughness_m) / denominator


def temperature_at(sample: WeatherSample, geom: SiteGeometry, height_m: float) -> float:
    """Ambient temperature in Celsius at ground-relative altitude
    ``height_m``, lapse-rate corrected from the station reading."""
    rise_m = height_m + geom.terrain_altitude_m - geom.station_altitude_m
    return sample.station_temperature_c - LAPSE_RATE_K_PER_M * rise_m


def vapor_pressure(temperature_c: float) -> float:
    """Saturation water vapor pressure in Pa (Magnus form).

    The base expression 6.1078 * 10^(7.5 T / (T + 237.3)) yields hPa and
    is converted to Pa here so it can be combined with SI gas constants.
    """
    if temperature_c <= -KELVIN_OFFSET:
        raise ValueError(f"temperature must be above absolute zero, got {temperature_c}")
    exponent = 7.5 * temperature_c / (temperature_c + 237.3)
    return 6.1078 * 10.0 ** exponent * 100.0


def pressure_at(
    sample: WeatherSample,
    geom: SiteGeometry,
    consts: PhysicalConstants,
    height_m: float,
) -> float:
    """Air pressure in Pa at ground-relative altitude ``height_m``.

    Barometric formula anchored at the station's reference-level reading,
    with gravity evaluated at the target altitude and the lapse-corrected
    ambient temperature (in kelvin) in the denominator.
    """
    t_kelvin = temperature_at(sample, geom, height_m) + KELVIN_OFFSET
    if t_kelvin <= 0.0:
        raise ValueError(f"temperature at altitude is below absolute zero ({t_kelvin} K)")
    rise_m = height_m + geom.terrain_altitude_m - geom.reference_altitude_m
    exponent = (
        -gravity_at(height_m, consts)
        * consts.air_molar_mass
        * rise_m
        / (consts.universal_gas_constant * t_kelvin)
    )
    return sample.station_pressure_pa * math.exp(exponent)


def air_density_at(
    sample: WeatherSample,
    geom: SiteGeometry,
    consts: PhysicalConstants,
    height_m: float,
) -> float:
    """Moist air density in kg/m^3 at ground-relative altitude ``height_m``.

    Two-component ideal-gas sum over the dry-air and water-vapor partial
    pressures. No humidity input exists, so the vapor term uses the
    saturation pressure at the local temperature.
    """
    temperature_c = temperature_at(sample, geom, height_m)
    t_kelvin = temperature_c + KELVIN_OFFSET
    p_total = pressure_at(sample, geom, consts, height_m)
    p_vapor = vapor_pressure(temperature_c)
    p_dry = p_total - p_vapor
    if p_dry < 0.0:
        raise InconsistentWeatherError(
            f"vapor pressure {p_vapor:.1f} Pa exceeds total pressure {p_total:.1f} Pa; "
            "weather input is inconsistent"
        )
    return p_dry / (consts.dry_air_gas_constant * t_kelvin) + p_vapor / (
        consts.vapor_gas_constant * t_kelvin
    )
