"""res5g: hourly energy prosumption simulator for renewable-powered 5G cells.

The package models a small urban 5G deployment whose cells draw power
from photovoltaic arrays, wind turbines and battery banks before falling
back to the grid, and reports battery-lifetime-extension and
grid-energy-reduction metrics against a grid-only baseline.
"""

__version__ = "0.1.0"

from .atmosphere import (
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
from .battery_store import (
    BatteryConfig,
    BatteryState,
    StepEnergyResult,
    apply_step,
    energy_balance,
    initial_state,
)
from .cell_power import (
    CellEnergyConfig,
    CellLoad,
    CellRadioConfig,
    PowerBreakdown,
    amplifier_power,
    cooling_power,
    signal_processing_power,
    total_cell_power,
    transceiver_power,
)
from .pv_harvest import PvArrayConfig, cell_temperature, mp_efficiency_stc, pv_power
from .radio_access import (
    AssociationResult,
    BaseStationSite,
    McsEntry,
    UserTerminal,
    associate,
    free_space_path_loss,
    max_allowable_path_loss,
    path_loss,
)
from .scenario_io import (
    ScenarioConfig,
    WeatherTrace,
    generate_users,
    load_scenario,
    load_weather,
    save_scenario,
)
from .sim_engine import (
    CellEntry,
    ModeSummary,
    StepLedger,
    average_soc_trace,
    battery_lifetime,
    compute_metrics,
    simulate_run,
    simulate_runs,
)
from .wind_harvest import WindTurbineConfig, power_curve_eval, wt_power

__all__ = [name for name in dir() if not name.startswith("_")]
