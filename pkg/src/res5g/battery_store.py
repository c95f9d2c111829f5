"""Battery bank state and per-step energy accounting for one cell.

The bank absorbs harvest surpluses (scaled by the charging efficiency and
clamped at the remaining headroom) and covers deficits (scaled by the
discharging efficiency and clamped at the energy above the depth-of-
discharge floor). Whatever a deficit step cannot pull from the bank is
drawn from the grid; whatever a surplus step cannot push into the bank is
spilled. The grid never charges the bank.

State transitions are pure: ``apply_step`` returns a new state plus the
step's accounting, so different cells can advance in parallel.
"""

from __future__ import annotations

from dataclasses import dataclass

#: Grid/spill amounts below this many Wh are rounding residue, not flows.
RESIDUE_EPS_WH = 1e-9


@dataclass(frozen=True)
class BatteryConfig:
    """Parameters of one cell's accumulator bank.

    Defaults describe a 48 V LiFePO4 unit of 3112 Wh, six in parallel.
    Voltages, currents, nominal capacity and cycle life are metadata; the
    energy model uses unit energy, counts, efficiency and the DoD floor.
    Charge/discharge current limits are not enforced at hourly steps.
    """

    unit_energy_wh: float = 3112.0
    count_serial: int = 1
    count_parallel: int = 6
    efficiency: float = 0.95
    initial_soc: float = 1.0
    max_depth_of_discharge: float = 1.0
    cycle_life: int = 2000
    nominal_voltage_v: float = 51.2
    charging_voltage_v: float = 57.6
    discharging_voltage_v: float = 51.2
    charging_current_a: float = 30.0
    rapid_charging_current_a: float = 50.0
    discharging_current_a: float = 50.0
    capacity_ah: float = 60.78

    def __post_init__(self) -> None:
        if not 0.0 < self.efficiency <= 1.0:
            raise ValueError(f"battery efficiency must lie in (0, 1], got {self.efficiency}")
        if self.count_serial < 1 or self.count_parallel < 1:
            raise ValueError("battery counts must be >= 1")
        if self.unit_energy_wh <= 0.0:
            raise ValueError("unit energy must be positive")
        if not 0.0 <= self.initial_soc <= 1.0:
            raise ValueError(f"initial state of charge must lie in [0, 1], got {self.initial_soc}")
        if not 0.0 < self.max_depth_of_discharge <= 1.0:
            raise ValueError(
                f"max depth of discharge must lie in (0, 1], got {self.max_depth_of_discharge}"
            )

    @property
    def max_energy_wh(self) -> float:
        return self.count_serial * self.count_parallel * self.unit_energy_wh

    @property
    def floor_wh(self) -> float:
        """Lowest stored energy the DoD limit allows."""
        return self.max_energy_wh * (1.0 - self.max_depth_of_discharge)


@dataclass(frozen=True)
class BatteryState:
    """Stored energy of one bank, always within [floor, max]."""

    stored_wh: float


@dataclass(frozen=True)
class StepEnergyResult:
    """Accounting of one step: signed stored-energy change, grid draw and
    spilled surplus (never both positive in the same step)."""

    battery_delta_wh: float
    grid_wh: float
    spilled_wh: float


def initial_state(cfg: BatteryConfig) -> BatteryState:
    return BatteryState(cfg.initial_soc * cfg.max_energy_wh)


def energy_balance(
    p_pv_w: float, p_wt_w: float, p_load_w: float, dc_loss: float, dt_h: float
) -> float:
    """Step energy balance in Wh: harvest minus the load inflated by the
    DC supply loss, times the step length."""
    if dt_h <= 0.0:
        raise ValueError(f"step length must be positive, got {dt_h}")
    if not 0.0 <= dc_loss < 1.0:
        raise ValueError(f"DC loss must lie in [0, 1), got {dc_loss}")
    return (p_pv_w + p_wt_w - p_load_w / (1.0 - dc_loss)) * dt_h


def apply_step(
    state: BatteryState, cfg: BatteryConfig, delta_e_wh: float
) -> tuple[BatteryState, StepEnergyResult]:
    """Advance the bank by one step's energy balance.

    Surplus: stored += min(surplus * efficiency, headroom); the unstored
    remainder is spilled. Deficit: stored -= min(deficit / efficiency,
    energy above the floor); the uncovered remainder is grid energy.
    """
    if delta_e_wh > 0.0:
        target = min(state.stored_wh + delta_e_wh * cfg.efficiency, cfg.max_energy_wh)
        new_stored = max(target, state.stored_wh)
        delta = new_stored - state.stored_wh
        spilled = max(0.0, delta_e_wh - delta / cfg.efficiency)
        grid = 0.0
    else:
        target = max(state.stored_wh + delta_e_wh / cfg.efficiency, cfg.floor_wh)
        new_stored = min(target, state.stored_wh)
        delta = new_stored - state.stored_wh
        delivered = -delta * cfg.efficiency
        grid = max(0.0, -delta_e_wh - delivered)
        spilled = 0.0
    # Clamp arithmetic residue so an exactly-covered step reports exact zeros.
    if grid < RESIDUE_EPS_WH:
        grid = 0.0
    if spilled < RESIDUE_EPS_WH:
        spilled = 0.0
    return BatteryState(new_stored), StepEnergyResult(delta, grid, spilled)
