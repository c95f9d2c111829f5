"""Per-step simulation pipeline and energy metrics.

One run walks the simulation window hour by hour: weather sample, user
association (computed once per run since users do not move and their
demands are fixed), per-cell power draw at the building-level ambient
temperature, PV/WT harvest according to the active supply mode, the
energy balance against the battery, and finally the grid draw covering
any residual deficit. Every step emits an immutable per-cell ledger
entry.

Metrics compare supply modes against the grid-only baseline simulated
with the same seeds and weather, so differences isolate the effect of
the harvest plants:

* battery lifetime: cumulative hours in which a cell's bank delivered
  energy or held charge above its depth-of-discharge floor;
* AEBL: mean percentage lifetime extension over cells and runs;
* AREC: mean percentage reduction of network grid energy over runs.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .atmosphere import temperature_at
from .battery_store import apply_step, energy_balance, initial_state
from .cell_power import PowerBreakdown, total_cell_power
from .pv_harvest import pv_power
from .radio_access import AssociationResult, associate
from .scenario_io import ScenarioConfig, WeatherTrace, generate_users
from .wind_harvest import wt_power

#: SoC slack below which a battery counts as sitting on its floor.
SOC_FLOOR_EPS = 1e-12


@dataclass(frozen=True)
class CellEntry:
    """Energy accounting of one cell for one step."""

    site: int
    cell: int
    band_mhz: float
    users: int
    active_antennas: int
    power: PowerBreakdown
    p_pv_w: float
    p_wt_w: float
    delta_e_wh: float
    battery_delta_wh: float
    grid_wh: float
    spilled_wh: float
    soc: float


@dataclass(frozen=True)
class StepLedger:
    """All cells' accounting for one step."""

    step: int
    entries: tuple[CellEntry, ...]


@dataclass(frozen=True)
class ModeSummary:
    """Per-mode aggregate of one weather day over all runs.

    ``harvest_total_kwh`` sums over all cells (mean over runs);
    ``harvest_per_cell_kwh`` divides it by the cell count;
    ``harvest_peak_kw`` is the largest per-cell single-step harvest.
    ``aebl_pct``/``arec_pct`` are ``None`` when the baseline denominator
    is degenerate (battery never alive, or zero grid energy).
    """

    mode: str
    runs: int
    harvest_total_kwh: float
    harvest_per_cell_kwh: float
    harvest_peak_kw: float
    grid_kwh: float
    aebl_pct: float | None
    arec_pct: float | None
    mean_soc: tuple[float, ...]


def _mode_flags(mode: str) -> tuple[bool, bool]:
    if mode not in ("none", "pv", "wt", "pv+wt"):
        raise ValueError(f"unknown RES mode {mode!r}")
    return mode in ("pv", "pv+wt"), mode in ("wt", "pv+wt")


@functools.lru_cache(maxsize=128)
def _cached_association(config: ScenarioConfig, seed: int) -> AssociationResult:
    users = generate_users(config, seed)
    return associate(
        users,
        config.base_stations(),
        mcs_table=config.radio.mcs_table,
        antenna_policy=config.radio.antenna_policy,
        full_activation_users=config.radio.full_activation_users,
        fallback_offset_db=config.radio.fallback_offset_db,
        tx_power_policy=config.radio.tx_power_policy,
    )


def simulate_run(
    config: ScenarioConfig,
    weather: WeatherTrace,
    seed: int,
    mode: str | None = None,
) -> list[StepLedger]:
    """Simulate one run and return one ledger per step.

    ``mode`` overrides the scenario's supply mode so the same seed can be
    replayed under different plant configurations.
    """
    mode = config.res_mode if mode is None else mode
    use_pv, use_wt = _mode_flags(mode)
    window = config.window
    if len(weather) < window.step_count:
        raise ValueError(
            f"weather trace covers {len(weather)} steps, window needs {window.step_count}"
        )
    assoc = _cached_association(config, seed)
    geometry = config.geometry
    constants = config.constants

    batteries = {
        (s, c): initial_state(cell.battery)
        for s, site in enumerate(config.sites)
        for c, cell in enumerate(site.cells)
    }
    ledgers: list[StepLedger] = []
    for step in range(window.start_step, window.start_step + window.step_count):
        sample = weather.sample_at(step)
        entries: list[CellEntry] = []
        for s, site in enumerate(config.sites):
            for c, cell in enumerate(site.cells):
                load = assoc.loads[s][c]
                ambient_building = temperature_at(
                    sample, geometry, cell.energy.building_altitude_m
                )
                power = total_cell_power(load, ambient_building, cell.radio, cell.energy)
                p_pv = 0.0
                if use_pv and cell.pv is not None:
                    ambient_panel = temperature_at(sample, geometry, cell.pv.altitude_m)
                    p_pv = pv_power(sample.irradiance_wm2, ambient_panel, cell.pv)
                p_wt = 0.0
                if use_wt and cell.wt is not None:
                    p_wt = wt_power(sample, geometry, constants, cell.wt)
                delta_e = energy_balance(
                    p_pv, p_wt, power.p_total, cell.energy.dc_loss, window.dt_hours
                )
                state, result = apply_step(batteries[(s, c)], cell.battery, delta_e)
                batteries[(s, c)] = state
                entries.append(
                    CellEntry(
                        site=s,
                        cell=c,
                        band_mhz=cell.radio.frequency_mhz,
                        users=load.served_users,
                        active_antennas=load.active_antennas,
                        power=power,
                        p_pv_w=p_pv,
                        p_wt_w=p_wt,
                        delta_e_wh=delta_e,
                        battery_delta_wh=result.battery_delta_wh,
                        grid_wh=result.grid_wh,
                        spilled_wh=result.spilled_wh,
                        soc=state.stored_wh / cell.battery.max_energy_wh,
                    )
                )
        ledgers.append(StepLedger(step=step, entries=tuple(entries)))
    return ledgers


def simulate_runs(
    config: ScenarioConfig,
    weather: WeatherTrace,
    modes: tuple[str, ...],
    seed: int,
    runs: int,
) -> dict[str, list[list[StepLedger]]]:
    """Simulate ``runs`` independent runs for each mode.

    Run ``r`` uses seed ``seed + r`` for every mode, so mode comparisons
    share user placements and differ only in the energy supply.
    """
    return {
        mode: [simulate_run(config, weather, seed + r, mode) for r in range(runs)]
        for mode in modes
    }


def battery_lifetime(
    ledgers: list[StepLedger],
    site: int,
    cell: int,
    dt_hours: float = 1.0,
    floor_soc: float = 0.0,
) -> float:
    """Hours within the window during which the cell's battery was alive:
    it delivered energy during the step or ended it above the floor."""
    alive_steps = 0
    for ledger in ledgers:
        for entry in ledger.entries:
            if entry.site == site and entry.cell == cell:
                delivered = entry.battery_delta_wh < -SOC_FLOOR_EPS
                charged_above_floor = entry.soc > floor_soc + SOC_FLOOR_EPS
                alive_steps += delivered or charged_above_floor
    return alive_steps * dt_hours


def average_soc_trace(runs: list[list[StepLedger]]) -> tuple[float, ...]:
    """Arithmetic mean of the state of charge over runs and cells, per
    step index."""
    if not runs:
        raise ValueError("need at least one run")
    steps = len(runs[0])
    trace = []
    for i in range(steps):
        total = 0.0
        count = 0
        for run in runs:
            for entry in run[i].entries:
                total += entry.soc
                count += 1
        trace.append(total / count)
    return tuple(trace)


def _grid_total_wh(run: list[StepLedger]) -> float:
    return sum(entry.grid_wh for ledger in run for entry in ledger.entries)


def _harvest_total_wh(run: list[StepLedger]) -> float:
    return sum((entry.p_pv_w + entry.p_wt_w) for ledger in run for entry in ledger.entries)


def _harvest_peak_w(run: list[StepLedger]) -> float:
    return max((entry.p_pv_w + entry.p_wt_w) for ledger in run for entry in ledger.entries)


def compute_metrics(
    ledgers_by_mode: dict[str, list[list[StepLedger]]],
    config: ScenarioConfig,
) -> dict[str, ModeSummary]:
    """Aggregate ledgers into per-mode summaries against the baseline.

    ``ledgers_by_mode`` must contain the ``"none"`` baseline; every mode
    must hold the same number of runs, simulated with matching seeds.
    """
    if "none" not in ledgers_by_mode:
        raise ValueError("metrics need the grid-only baseline under mode 'none'")
    baseline = ledgers_by_mode["none"]
    dt = config.window.dt_hours
    cell_keys = [
        (s, c) for s, site in enumerate(config.sites) for c in range(len(site.cells))
    ]
    floor_socs = {
        (s, c): 1.0 - config.sites[s].cells[c].battery.max_depth_of_discharge
        for s, c in cell_keys
    }

    base_lifetimes = [
        {key: battery_lifetime(run, *key, dt_hours=dt, floor_soc=floor_socs[key]) for key in cell_keys}
        for run in baseline
    ]
    base_grid = [_grid_total_wh(run) for run in baseline]

    summaries: dict[str, ModeSummary] = {}
    for mode, runs in ledgers_by_mode.items():
        if len(runs) != len(baseline):
            raise ValueError(f"mode {mode!r} has {len(runs)} runs, baseline has {len(baseline)}")
        harvest_wh = _mean(_harvest_total_wh(run) * dt for run in runs)
        peak_w = _mean(_harvest_peak_w(run) for run in runs)
        grid_wh = _mean(_grid_total_wh(run) for run in runs)

        extensions: list[float] = []
        degenerate_lifetime = False
        for run, base_run_lifetimes in zip(runs, base_lifetimes):
            for key in cell_keys:
                base_hours = base_run_lifetimes[key]
                if base_hours == 0.0:
                    degenerate_lifetime = True
                    continue
                mode_hours = battery_lifetime(
                    run, *key, dt_hours=dt, floor_soc=floor_socs[key]
                )
                extensions.append(100.0 * (mode_hours - base_hours) / base_hours)
        aebl = None if degenerate_lifetime or not extensions else _mean(extensions)

        reductions: list[float] = []
        degenerate_grid = False
        for run, base_wh in zip(runs, base_grid):
            if base_wh == 0.0:
                degenerate_grid = True
                continue
            reductions.append(100.0 * (base_wh - _grid_total_wh(run)) / base_wh)
        arec = None if degenerate_grid or not reductions else _mean(reductions)

        summaries[mode] = ModeSummary(
            mode=mode,
            runs=len(runs),
            harvest_total_kwh=harvest_wh / 1000.0,
            harvest_per_cell_kwh=harvest_wh / 1000.0 / len(cell_keys),
            harvest_peak_kw=peak_w / 1000.0,
            grid_kwh=grid_wh / 1000.0,
            aebl_pct=aebl,
            arec_pct=arec,
            mean_soc=average_soc_trace(runs),
        )
    return summaries


def _mean(values) -> float:
    items = list(values)
    return sum(items) / len(items)
