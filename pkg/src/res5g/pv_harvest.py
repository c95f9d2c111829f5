"""Photovoltaic array output for one cell.

Array output follows the HOMER-style rated-power model: nameplate power
scaled by a derating factor, the irradiance ratio to standard test
conditions, and a linear temperature correction around the STC cell
temperature. The operating cell temperature itself comes from the NOCT
energy-balance formula, which needs the ambient temperature already
corrected to the panels' altitude.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateDenominatorError


@dataclass(frozen=True)
class PvArrayConfig:
    """Parameters of the PV bank attached to one cell.

    Defaults describe a 20 W module wired 4-in-series x 16-in-parallel.
    The nominal electrical ratings are carried for documentation only;
    the power model uses areas, rated power and the thermal parameters.
    """

    count_serial: int = 4
    count_parallel: int = 16
    rated_power_w: float = 20.0
    derating: float = 0.723
    temp_coeff_per_c: float = -0.005
    stc_irradiance_wm2: float = 1000.0
    noct_irradiance_wm2: float = 800.0
    stc_cell_temp_c: float = 25.0
    noct_cell_temp_c: float = 47.0
    noct_ambient_c: float = 20.0
    transmittance: float = 0.9486832980505138  # 0.3 * sqrt(10)
    absorptance: float = 0.9486832980505138
    module_length_m: float = 0.576
    module_width_m: float = 0.357
    altitude_m: float = 34.0  # ground-relative altitude of the panels
    nominal_voltage_v: float = 12.0
    max_power_voltage_v: float = 17.2
    max_power_current_a: float = 1.16

    def __post_init__(self) -> None:
        if self.count_serial < 1 or self.count_parallel < 1:
            raise ValueError("panel counts must be >= 1")
        if self.stc_irradiance_wm2 <= 0.0 or self.noct_irradiance_wm2 <= 0.0:
            raise ValueError("reference irradiances must be positive")
        if self.module_length_m * self.module_width_m <= 0.0:
            raise ValueError("module dimensions must be positive")
        if not 0.0 < self.derating <= 1.0:
            raise ValueError(f"derating factor must lie in (0, 1], got {self.derating}")
        if self.rated_power_w < 0.0:
            raise ValueError("rated power must be >= 0")
        if self.transmittance * self.absorptance <= 0.0:
            raise ValueError("transmittance/absorptance product must be positive")

    @property
    def array_count(self) -> int:
        return self.count_serial * self.count_parallel


def mp_efficiency_stc(cfg: PvArrayConfig) -> float:
    """Maximum power point efficiency of one module at STC: rated power
    over (module area x STC irradiance)."""
    return cfg.rated_power_w / (cfg.module_length_m * cfg.module_width_m * cfg.stc_irradiance_wm2)


def cell_temperature(ambient_at_panel_c: float, irradiance_wm2: float, cfg: PvArrayConfig) -> float:
    """Operating PV cell temperature in Celsius.

    NOCT energy balance: the ambient temperature and an irradiance-driven
    heating term share the common denominator
    1 + (T_noct - Ta_noct) * (G/G_noct) * (alpha_p * mu_stc / (tau*alpha)).
    At zero irradiance the result is exactly the ambient temperature.
    """
    if irradiance_wm2 < 0.0:
        raise ValueError(f"irradiance must be >= 0, got {irradiance_wm2}")
    noct_rise = cfg.noct_cell_temp_c - cfg.noct_ambient_c
    irradiance_ratio = irradiance_wm2 / cfg.noct_irradiance_wm2
    cover_product = cfg.transmittance * cfg.absorptance
    mu_stc = mp_efficiency_stc(cfg)
    denominator = 1.0 + noct_rise * irradiance_ratio * (
        cfg.temp_coeff_per_c * mu_stc / cover_product
    )
    if denominator <= 0.0:
        raise DegenerateDenominatorError(
            f"cell temperature denominator is {denominator}; "
            "the PV thermal configuration is non-physical"
        )
    heating = noct_rise * irradiance_ratio * (
        1.0 - mu_stc * (1.0 - cfg.temp_coeff_per_c * cfg.stc_cell_temp_c) / cover_product
    )
    return (ambient_at_panel_c + heating) / denominator


def pv_power_at_cell_temperature(
    irradiance_wm2: float, cell_temp_c: float, cfg: PvArrayConfig
) -> float:
    """Array output at a known cell temperature, floored at zero.

    count * rated * derating * (G/G_stc) * (1 + alpha_p * (Tc - Tc_stc));
    the floor keeps extreme temperature corrections from turning the
    array into a sink.
    """
    if irradiance_wm2 < 0.0:
        raise ValueError(f"irradiance must be >= 0, got {irradiance_wm2}")
    bracket = 1.0 + cfg.temp_coeff_per_c * (cell_temp_c - cfg.stc_cell_temp_c)
    raw = (
        cfg.array_count
        * cfg.rated_power_w
        * cfg.derating
        * (irradiance_wm2 / cfg.stc_irradiance_wm2)
        * bracket
    )
    return max(0.0, raw)


def pv_power(irradiance_wm2: float, ambient_at_panel_c: float, cfg: PvArrayConfig) -> float:
    """Array output power in W from irradiance and panel-level ambient
    temperature."""
    t_cell = cell_temperature(ambient_at_panel_c, irradiance_wm2, cfg)
    return pv_power_at_cell_temperature(irradiance_wm2, t_cell, cfg)
