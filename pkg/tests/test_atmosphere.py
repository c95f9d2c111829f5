import math

import pytest
from hypothesis import given, strategies as st

import oracles
from res5g.atmosphere import (
    PhysicalConstants,
    SiteGeometry,
    WeatherSample,
    air_density_at,
    gravity_at,
    pressure_at,
    temperature_at,
    vapor_pressure,
    wind_speed_at,
)
from res5g.errors import InconsistentWeatherError, InvalidGeometryError

GEOM = SiteGeometry(terrain_altitude_m=54.44, station_altitude_m=90.0, surface_roughness_m=3.0)
CONSTS = PhysicalConstants()

#: Geometry that pins pressure_at(h=0) to the station reading and
#: temperature_at(h=0) to station + 0.0065 * station_altitude.
SEA_LEVEL_GEOM = SiteGeometry(terrain_altitude_m=0.0, station_altitude_m=90.0)


def sample(temp=10.0, wind=5.0, irradiance=0.0, pressure=101325.0):
    return WeatherSample(0, temp, wind, irradiance, pressure)


class TestWeatherSampleInvariants:
    def test_negative_irradiance_rejected(self):
        with pytest.raises(ValueError, match="irradiance"):
            WeatherSample(0, 10.0, 1.0, -5.0, 101325.0)

    def test_negative_wind_rejected(self):
        with pytest.raises(ValueError, match="wind"):
            WeatherSample(0, 10.0, -1.0, 0.0, 101325.0)

    def test_nonpositive_pressure_rejected(self):
        with pytest.raises(ValueError, match="pressure"):
            WeatherSample(0, 10.0, 1.0, 0.0, 0.0)

    def test_subzero_kelvin_rejected(self):
        with pytest.raises(ValueError, match="absolute zero"):
            WeatherSample(0, -300.0, 1.0, 0.0, 101325.0)


class TestSiteGeometryInvariants:
    def test_station_below_roughness_rejected(self):
        with pytest.raises(InvalidGeometryError):
            SiteGeometry(station_altitude_m=2.0, surface_roughness_m=3.0)

    def test_nonpositive_roughness_rejected(self):
        with pytest.raises(InvalidGeometryError):
            SiteGeometry(surface_roughness_m=0.0)


class TestWindSpeed:
    def test_station_altitude_identity(self):
        # h + terrain equals the station altitude, so the ratio is one.
        assert wind_speed_at(sample(), GEOM, 90.0 - 54.44) == pytest.approx(5.0, rel=1e-12)

    def test_zero_wind_maps_to_zero(self):
        calm = sample(wind=0.0)
        for h in (0.0, 10.0, 49.0, 120.0):
            assert wind_speed_at(calm, GEOM, h) == 0.0

    def test_hub_height_value(self):
        expected = oracles.wind_speed(5.0, 49.0, 54.44, 3.0, 90.0)
        got = wind_speed_at(sample(), GEOM, 49.0)
        assert got == pytest.approx(expected, rel=1e-12)
        assert got == pytest.approx(5.205, abs=5e-4)

    def test_target_below_roughness_rejected(self):
        low = SiteGeometry(terrain_altitude_m=0.0, station_altitude_m=90.0, surface_roughness_m=3.0)
        with pytest.raises(InvalidGeometryError):
            wind_speed_at(sample(), low, 1.0)

    @given(st.floats(0.0, 30.0), st.floats(0.0, 100.0))
    def test_linear_in_station_speed(self, speed, h):
        one = wind_speed_at(sample(wind=1.0), GEOM, h)
        many = wind_speed_at(sample(wind=speed), GEOM, h)
        assert many == pytest.approx(speed * one, rel=1e-9, abs=1e-12)


class TestTemperature:
    def test_station_altitude_identity(self):
        assert temperature_at(sample(temp=10.0), GEOM, 90.0 - 54.44) == pytest.approx(10.0)

    def test_lapse_above_station(self):
        assert temperature_at(sample(temp=10.0), GEOM, 49.0) == pytest.approx(9.91264, abs=1e-9)

    def test_lapse_below_station(self):
        assert temperature_at(sample(temp=-5.0), GEOM, 0.0) == pytest.approx(-4.76886, abs=1e-9)

    @given(st.floats(-20.0, 40.0), st.floats(0.0, 200.0), st.floats(0.1, 100.0))
    def test_strictly_decreasing_with_slope(self, temp, h, dh):
        t0 = temperature_at(sample(temp=temp), GEOM, h)
        t1 = temperature_at(sample(temp=temp), GEOM, h + dh)
        assert t1 - t0 == pytest.approx(-0.0065 * dh, rel=1e-9, abs=1e-9)


class TestGravity:
    def test_surface_value_exact(self):
        assert gravity_at(0.0, CONSTS) == CONSTS.sea_level_gravity

    def test_quarter_at_one_earth_radius(self):
        assert gravity_at(CONSTS.earth_radius, CONSTS) == pytest.approx(
            CONSTS.sea_level_gravity / 4.0, rel=1e-12
        )

    @given(st.floats(0.0, 1e7), st.floats(1.0, 1e6))
    def test_strictly_decreasing(self, h, dh):
        assert gravity_at(h + dh, CONSTS) < gravity_at(h, CONSTS)


class TestPressure:
    def test_reference_level_identity(self):
        geom = SiteGeometry(terrain_altitude_m=0.0, station_altitude_m=90.0)
        s = sample(pressure=98000.0)
        assert pressure_at(s, geom, CONSTS, 0.0) == pytest.approx(98000.0, rel=1e-12)

    def test_barometric_value(self):
        # Station temperature chosen so the kelvin input at h=0 is 15 C.
        s = sample(temp=15.0 + 0.0065 * (54.44 - 90.0))
        expected = oracles.pressure(
            101325.0, 0.0, 54.44, 0.0, 15.0,
            CONSTS.sea_level_gravity, CONSTS.earth_radius,
            CONSTS.air_molar_mass, CONSTS.universal_gas_constant,
        )
        got = pressure_at(s, GEOM, CONSTS, 0.0)
        assert got == pytest.approx(expected, rel=1e-12)
        assert got == pytest.approx(100672.0, abs=2.0)

    @given(st.floats(0.0, 200.0), st.floats(1.0, 500.0))
    def test_positive_and_decreasing_in_altitude(self, h, dh):
        s = sample(temp=15.0)
        p0 = pressure_at(s, GEOM, CONSTS, h)
        p1 = pressure_at(s, GEOM, CONSTS, h + dh)
        assert 0.0 < p1 < p0


class TestVaporPressure:
    def test_zero_celsius_exact(self):
        assert vapor_pressure(0.0) == pytest.approx(610.78, rel=1e-12)

    def test_known_values(self):
        assert vapor_pressure(15.0) == pytest.approx(1705.3, abs=0.1)
        assert vapor_pressure(25.0) == pytest.approx(3167.0, abs=1.0)

    @given(st.floats(-40.0, 60.0))
    def test_matches_oracle(self, t):
        assert vapor_pressure(t) == pytest.approx(oracles.vapor_pressure(t), rel=1e-12)


class TestAirDensity:
    def test_moist_value_at_sea_level(self):
        s = sample(temp=15.0 + 0.0065 * (0.0 - 90.0), pressure=101325.0)
        got = air_density_at(s, SEA_LEVEL_GEOM, CONSTS, 0.0)
        expected = oracles.air_density(
            101325.0, oracles.vapor_pressure(15.0), 15.0,
            CONSTS.dry_air_gas_constant, CONSTS.vapor_gas_constant,
        )
        assert got == pytest.approx(expected, rel=1e-12)
        assert got == pytest.approx(1.217, abs=2e-3)

    def test_dry_air_matches_standard_density(self):
        # Zero vapor contribution: evaluate the dry-air term directly.
        rho_dry = 101325.0 / (CONSTS.dry_air_gas_constant * (15.0 + 273.15))
        assert rho_dry == pytest.approx(1.225, rel=1e-3)

    def test_monotone_decreasing_in_temperature(self):
        def density_at(temp):
            s = sample(temp=temp + 0.0065 * (0.0 - 90.0), pressure=101325.0)
            return air_density_at(s, SEA_LEVEL_GEOM, CONSTS, 0.0)

        assert density_at(35.0) < density_at(15.0)

    def test_positive_over_normal_ranges(self):
        for temp in (-20.0, 0.0, 20.0, 40.0):
            s = sample(temp=temp, pressure=101000.0)
            assert air_density_at(s, GEOM, CONSTS, 45.0) > 0.0

    def test_inconsistent_weather_rejected(self):
        # Saturation pressure at 90 C exceeds a near-vacuum total pressure.
        hot = sample(temp=90.0, pressure=2000.0)
        geom = SiteGeometry(terrain_altitude_m=0.0, station_altitude_m=90.0)
        with pytest.raises(InconsistentWeatherError):
            air_density_at(hot, geom, CONSTS, 0.0)
