from dataclasses import replace

import pytest
from hypothesis import given, strategies as st

import oracles
from res5g.errors import DegenerateDenominatorError
from res5g.pv_harvest import (
    PvArrayConfig,
    cell_temperature,
    mp_efficiency_stc,
    pv_power,
    pv_power_at_cell_temperature,
)

CFG = PvArrayConfig()


def mp_eff_oracle(cfg=CFG):
    return cfg.rated_power_w / (cfg.module_length_m * cfg.module_width_m * cfg.stc_irradiance_wm2)


def oracle_cell_temp(ambient, irr, cfg=CFG):
    return oracles.pv_cell_temperature(
        ambient,
        irr,
        cfg.noct_cell_temp_c,
        cfg.noct_ambient_c,
        cfg.noct_irradiance_wm2,
        cfg.temp_coeff_per_c,
        mp_eff_oracle(cfg),
        cfg.transmittance * cfg.absorptance,
        cfg.stc_cell_temp_c,
    )


class TestMpEfficiency:
    def test_reference_module(self):
        assert mp_efficiency_stc(CFG) == pytest.approx(0.09726, abs=1e-5)

    def test_doubling_area_halves_efficiency(self):
        double = replace(CFG, module_length_m=2 * CFG.module_length_m)
        assert mp_efficiency_stc(double) == pytest.approx(mp_efficiency_stc(CFG) / 2.0, rel=1e-12)

    def test_zero_rated_power(self):
        assert mp_efficiency_stc(replace(CFG, rated_power_w=0.0)) == 0.0


class TestCellTemperature:
    def test_zero_irradiance_is_ambient(self):
        for ambient in (-10.0, 0.0, 20.0, 35.0):
            assert cell_temperature(ambient, 0.0, CFG) == ambient

    def test_heating_under_noct_irradiance(self):
        t = cell_temperature(20.0, 800.0, CFG)
        assert t > 20.0
        assert t == pytest.approx(oracle_cell_temp(20.0, 800.0), rel=1e-12)

    def test_less_heating_at_lower_irradiance(self):
        assert cell_temperature(20.0, 400.0, CFG) < cell_temperature(20.0, 800.0, CFG)

    @given(st.floats(0.0, 1200.0), st.floats(-20.0, 40.0))
    def test_matches_oracle(self, irr, ambient):
        assert cell_temperature(ambient, irr, CFG) == pytest.approx(
            oracle_cell_temp(ambient, irr), rel=1e-12, abs=1e-12
        )

    def test_degenerate_denominator_rejected(self):
        # A strongly negative temperature coefficient at high irradiance
        # drives the shared denominator non-positive.
        steep = replace(CFG, temp_coeff_per_c=-0.05)
        with pytest.raises(DegenerateDenominatorError):
            cell_temperature(20.0, 8000.0, steep)

    def test_negative_irradiance_rejected(self):
        with pytest.raises(ValueError):
            cell_temperature(20.0, -1.0, CFG)


class TestPvPower:
    def test_night_is_zero(self):
        assert pv_power(0.0, 10.0, CFG) == 0.0

    def test_stc_identity(self):
        # At STC irradiance with the cell pinned to the STC temperature the
        # bracket is one: output is count * rated * derating.
        assert pv_power_at_cell_temperature(1000.0, 25.0, CFG) == pytest.approx(
            64 * 20.0 * 0.723, rel=1e-12
        )
        assert pv_power_at_cell_temperature(1000.0, 25.0, CFG) == pytest.approx(925.44)

    def test_linear_temperature_derating(self):
        assert pv_power_at_cell_temperature(1000.0, 35.0, CFG) == pytest.approx(
            925.44 * (1.0 - 0.005 * 10.0), rel=1e-12
        )

    def test_extreme_temperature_floors_at_zero(self):
        assert pv_power_at_cell_temperature(1000.0, 300.0, CFG) == 0.0

    def test_linear_in_array_count(self):
        double = replace(CFG, count_parallel=2 * CFG.count_parallel)
        assert pv_power(700.0, 15.0, double) == pytest.approx(
            2.0 * pv_power(700.0, 15.0, CFG), rel=1e-12
        )

    @given(st.floats(1.0, 1200.0), st.floats(-10.0, 40.0))
    def test_matches_oracle(self, irr, ambient):
        t_cell = oracle_cell_temp(ambient, irr)
        want = oracles.pv_power(
            64, CFG.rated_power_w, CFG.derating, irr,
            CFG.stc_irradiance_wm2, CFG.temp_coeff_per_c, t_cell, CFG.stc_cell_temp_c,
        )
        assert pv_power(irr, ambient, CFG) == pytest.approx(want, rel=1e-9, abs=1e-9)

    def test_linear_in_irradiance_at_fixed_cell_temperature(self):
        p1 = pv_power_at_cell_temperature(250.0, 30.0, CFG)
        p2 = pv_power_at_cell_temperature(750.0, 30.0, CFG)
        assert p2 == pytest.approx(3.0 * p1, rel=1e-12)

    def test_temperature_derivative_matches_finite_difference(self):
        irr = 650.0
        t_cell = 40.0
        h = 1e-4
        numeric = (
            pv_power_at_cell_temperature(irr, t_cell + h, CFG)
            - pv_power_at_cell_temperature(irr, t_cell - h, CFG)
        ) / (2.0 * h)
        analytic = (
            CFG.array_count
            * CFG.rated_power_w
            * CFG.derating
            * (irr / CFG.stc_irradiance_wm2)
            * CFG.temp_coeff_per_c
        )
        assert numeric == pytest.approx(analytic, rel=1e-6)
        assert analytic < 0.0
