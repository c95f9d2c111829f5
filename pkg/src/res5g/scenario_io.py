"""Scenario and weather input handling.

A scenario is a single JSON document whose sections mirror the simulator's
configuration blocks (sites, radio bands, cell energy, PV/WT plants,
batteries, physical constants, users, simulation window). Every field has
a documented default, so ``{}`` is already a valid scenario: eight sites
on a 1 km x 1 km map with three bands each, both plant types and a
six-unit battery bank per cell. See docs/formats.md for the full schema.

Weather traces are CSV tables with the exact header
``step,temperature_C,wind_mps,irradiance_Wm2,pressure_Pa`` and one row
per hourly step.

Altitude fields may be given either as a number or as a two-element
``[low, high]`` pair; pairs are resolved to per-site values drawn
deterministically from the scenario seed at load time, so a loaded
configuration is fully concrete and serialising it back produces a
stable, normalised document.
"""

from __future__ import annotations

import csv
import json
import random
from dataclasses import dataclass, fields
from importlib import resources
from pathlib import Path
from typing import Any, Iterable

from .atmosphere import PhysicalConstants, SiteGeometry, WeatherSample
from .battery_store import BatteryConfig
from .cell_power import CellEnergyConfig, CellRadioConfig
from .errors import (
    PlacementExhaustedError,
    ScenarioParseError,
    ScenarioValidationError,
    WeatherTraceError,
)
from .pv_harvest import PvArrayConfig
from .radio_access import DEFAULT_MCS_TABLE, BaseStationSite, McsEntry, UserTerminal
from .wind_harvest import WindTurbineConfig

SCHEMA_VERSION = 1

WEATHER_HEADER = ("step", "temperature_C", "wind_mps", "irradiance_Wm2", "pressure_Pa")

RES_MODES = ("none", "pv", "wt", "pv+wt")

#: Radio defaults that differ between the three carrier bands.
BAND_DEFAULTS: dict[int, dict[str, Any]] = {
    800: dict(
        bandwidth_hz=80e6,
        max_antenna_elements=1,
        antenna_gain_dbi=16.0,
        feeder_loss_db=2.0,
        max_tx_power_dbm=46.0,
        noise_figure_db=8.0,
        shadow_margin_db=12.8,
        implementation_loss_db=0.0,
        spatial_duty=0.0,
    ),
    2100: dict(
        bandwidth_hz=120e6,
        max_antenna_elements=1,
        antenna_gain_dbi=18.0,
        feeder_loss_db=2.0,
        max_tx_power_dbm=49.0,
        noise_figure_db=8.0,
        shadow_margin_db=15.2,
        implementation_loss_db=0.0,
        spatial_duty=0.0,
    ),
    3500: dict(
        bandwidth_hz=120e6,
        max_antenna_elements=64,
        antenna_gain_dbi=24.0,
        feeder_loss_db=3.0,
        max_tx_power_dbm=53.0,
        noise_figure_db=7.0,
        shadow_margin_db=10.0,
        implementation_loss_db=3.0,
        spatial_duty=0.25,
    ),
}

DEFAULT_ANTENNA_HEIGHT_BOUNDS = (32.0, 46.0)
DEFAULT_BUILDING_ALTITUDE_BOUNDS = (27.0, 41.0)
DEFAULT_PV_ALTITUDE_BOUNDS = (27.0, 41.0)
DEFAULT_WT_ALTITUDE_BOUNDS = (35.0, 49.0)

DEFAULT_SITE_POSITIONS = (
    (150.0, 180.0),
    (480.0, 140.0),
    (820.0, 190.0),
    (160.0, 500.0),
    (840.0, 470.0),
    (190.0, 820.0),
    (520.0, 860.0),
    (830.0, 810.0),
)


@dataclass(frozen=True)
class SimulationWindow:
    start_step: int = 0
    step_count: int = 24
    dt_hours: float = 1.0

    def __post_init__(self) -> None:
        if self.step_count < 1:
            raise ValueError(f"step count must be >= 1, got {self.step_count}")
        if self.dt_hours <= 0.0:
            raise ValueError(f"step length must be positive, got {self.dt_hours}")


@dataclass(frozen=True)
class Bounds:
    xmin: float = 0.0
    ymin: float = 0.0
    xmax: float = 1000.0
    ymax: float = 1000.0

    def __post_init__(self) -> None:
        if self.xmax <= self.xmin or self.ymax <= self.ymin:
            raise ValueError("bounds must span a positive area")


@dataclass(frozen=True)
class Building:
    polygon: tuple[tuple[float, float], ...]
    height_m: float

    def __post_init__(self) -> None:
        if len(self.polygon) < 3:
            raise ValueError("a building footprint needs at least three vertices")
        if self.height_m <= 0.0:
            raise ValueError("building height must be positive")


@dataclass(frozen=True)
class DemandSpec:
    """Per-user throughput demand distribution."""

    kind: str = "constant"
    mbps: float = 10.0
    min_mbps: float = 5.0
    max_mbps: float = 15.0

    def __post_init__(self) -> None:
        if self.kind not in ("constant", "uniform"):
            raise ValueError(f"unknown demand kind {self.kind!r}")
        if self.kind == "constant" and self.mbps <= 0.0:
            raise ValueError("constant demand must be positive")
        if self.kind == "uniform" and not 0.0 < self.min_mbps <= self.max_mbps:
            raise ValueError("uniform demand bounds must satisfy 0 < min <= max")

    def draw(self, rng: random.Random) -> float:
        if self.kind == "constant":
            return self.mbps
        return rng.uniform(self.min_mbps, self.max_mbps)


@dataclass(frozen=True)
class UserPopulation:
    count: int = 300
    antenna_height_m: float = 1.5
    tx_power_max_dbm: float = 23.0
    antenna_gain_dbi: float = 0.0
    demand: DemandSpec = DemandSpec()

    def __post_init__(self) -> None:
        if self.count < 0:
            raise ValueError("user count must be >= 0")


@dataclass(frozen=True)
class RadioOptions:
    """Planner knobs shared by all cells."""

    mcs_table: tuple[McsEntry, ...] = DEFAULT_MCS_TABLE
    antenna_policy: str = "all"
    full_activation_users: int = 10
    fallback_offset_db: float = 0.0
    tx_power_policy: str = "budget-min"

    def __post_init__(self) -> None:
        if self.antenna_policy not in ("all", "proportional"):
            raise ValueError(f"unknown antenna policy {self.antenna_policy!r}")
        if self.full_activation_users < 1:
            raise ValueError("full activation user count must be >= 1")
        if not self.mcs_table:
            raise ValueError("the MCS table must not be empty")
        if self.tx_power_policy not in ("budget-min", "max"):
            raise ValueError(f"unknown transmit power policy {self.tx_power_policy!r}")


@dataclass(frozen=True)
class CellSetup:
    """Everything attached to one cell: radio, energy, plants, battery."""

    radio: CellRadioConfig
    energy: CellEnergyConfig
    pv: PvArrayConfig | None
    wt: WindTurbineConfig | None
    battery: BatteryConfig


@dataclass(frozen=True)
class SiteSetup:
    x: float
    y: float
    building_altitude_m: float
    antenna_height_m: float
    cells: tuple[CellSetup, ...]

    def base_station(self) -> BaseStationSite:
        return BaseStationSite(
            x=self.x,
            y=self.y,
            building_altitude_m=self.building_altitude_m,
            antenna_height_m=self.antenna_height_m,
            cells=tuple(cell.radio for cell in self.cells),
        )


@dataclass(frozen=True)
class ScenarioConfig:
    name: str = "default"
    seed: int = 1
    runs: int = 10
    res_mode: str = "pv+wt"
    window: SimulationWindow = SimulationWindow()
    bounds: Bounds = Bounds()
    constants: PhysicalConstants = PhysicalConstants()
    geometry: SiteGeometry = SiteGeometry()
    users: UserPopulation = UserPopulation()
    radio: RadioOptions = RadioOptions()
    buildings: tuple[Building, ...] = ()
    sites: tuple[SiteSetup, ...] = ()

    def __post_init__(self) -> None:
        if self.runs < 1:
            raise ValueError("runs: must be >= 1")
        if self.res_mode not in RES_MODES:
            raise ValueError(f"res_mode: must be one of {RES_MODES}, got {self.res_mode!r}")
        if not self.sites:
            raise ValueError("sites: a scenario needs at least one site")

    def base_stations(self) -> tuple[BaseStationSite, ...]:
        return tuple(site.base_station() for site in self.sites)


@dataclass(frozen=True)
class WeatherTrace:
    """Weather samples covering a window, one per step."""

    samples: tuple[WeatherSample, ...]
    start_step: int

    def sample_at(self, step: int) -> WeatherSample:
        return self.samples[step - self.start_step]

    def __len__(self) -> int:
        return len(self.samples)


# ---------------------------------------------------------------------------
# Scenario loading


def _reject_unknown_keys(section: dict, allowed: Iterable[str], path: str) -> None:
    unknown = set(section) - set(allowed)
    if unknown:
        raise ScenarioValidationError(
            f"{path}: unknown field(s) {sorted(unknown)}; allowed: {sorted(allowed)}"
        )


def _dataclass_from(section: dict, cls, path: str, **overrides):
    names = [f.name for f in fields(cls) if f.init]
    _reject_unknown_keys(section, names, path)
    kwargs = dict(section)
    kwargs.update(overrides)
    try:
        return cls(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ScenarioValidationError(f"{path}: {exc}") from exc


def _explicit_or_drawn(value: Any, drawn: float, path: str) -> float:
    """Honor a concrete per-cell altitude; pairs and omissions fall back
    to the per-site draw."""
    if value is None or isinstance(value, (list, tuple)):
        return drawn
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    raise ScenarioValidationError(f"{path}: expected a number or a [low, high] pair, got {value!r}")


def _resolve_altitude(value: Any, rng: random.Random, path: str) -> float:
    """A scalar passes through; a [low, high] pair draws uniformly."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if (
        isinstance(value, (list, tuple))
        and len(value) == 2
        and all(isinstance(v, (int, float)) for v in value)
    ):
        low, high = float(value[0]), float(value[1])
        if high < low:
            raise ScenarioValidationError(f"{path}: bounds must satisfy low <= high")
        return rng.uniform(low, high)
    raise ScenarioValidationError(f"{path}: expected a number or a [low, high] pair, got {value!r}")


def _build_cell(
    cell_section: dict,
    energy_template: dict,
    pv_template: dict | None,
    wt_template: dict | None,
    battery_template: dict,
    site_altitudes: dict[str, float],
    path: str,
) -> CellSetup:
    allowed = {"frequency_mhz", "radio", "pv", "wt", "battery"}
    _reject_unknown_keys(cell_section, allowed, path)
    if "frequency_mhz" not in cell_section:
        raise ScenarioValidationError(f"{path}: missing required field 'frequency_mhz'")
    frequency = cell_section["frequency_mhz"]
    band_defaults = BAND_DEFAULTS.get(int(frequency), {})
    radio_section = dict(band_defaults)
    radio_section.update(cell_section.get("radio", {}))
    radio = _dataclass_from(radio_section, CellRadioConfig, f"{path}.radio", frequency_mhz=frequency)

    energy = _dataclass_from(
        dict(energy_template),
        CellEnergyConfig,
        f"{path}.energy",
        building_altitude_m=site_altitudes["building"],
    )

    pv_flag = cell_section.get("pv", True)
    wt_flag = cell_section.get("wt", True)

    pv: PvArrayConfig | None = None
    if pv_template is not None and pv_flag is not False:
        pv_section = dict(pv_template)
        if isinstance(pv_flag, dict):
            pv_section.update(pv_flag)
        altitude = _explicit_or_drawn(
            pv_section.pop("altitude_m", None), site_altitudes["pv"], f"{path}.pv.altitude_m"
        )
        pv = _dataclass_from(pv_section, PvArrayConfig, f"{path}.pv", altitude_m=altitude)

    wt: WindTurbineConfig | None = None
    if wt_template is not None and wt_flag is not False:
        wt_section = dict(wt_template)
        if isinstance(wt_flag, dict):
            wt_section.update(wt_flag)
        altitude = _explicit_or_drawn(
            wt_section.pop("hub_altitude_m", None), site_altitudes["wt"], f"{path}.wt.hub_altitude_m"
        )
        if wt_section.get("power_curve") is not None:
            wt_section["power_curve"] = tuple(
                tuple(point) for point in wt_section["power_curve"]
            )
        wt = _dataclass_from(
            wt_section, WindTurbineConfig, f"{path}.wt", hub_altitude_m=altitude
        )

    battery_section = dict(battery_template)
    if isinstance(cell_section.get("battery"), dict):
        battery_section.update(cell_section["battery"])
    battery = _dataclass_from(battery_section, BatteryConfig, f"{path}.battery")
    return CellSetup(radio=radio, energy=energy, pv=pv, wt=wt, battery=battery)


def _default_cell_sections() -> list[dict]:
    return [{"frequency_mhz": band} for band in (800, 2100, 3500)]


def scenario_from_dict(document: dict) -> ScenarioConfig:
    """Build a validated configuration from a parsed scenario document."""
    if not isinstance(document, dict):
        raise ScenarioValidationError("scenario document must be a JSON object")
    allowed = {
        "schema_version",
        "name",
        "seed",
        "runs",
        "res_mode",
        "window",
        "bounds",
        "constants",
        "site_geometry",
        "users",
        "radio",
        "energy",
        "pv",
        "wt",
        "battery",
        "buildings",
        "sites",
    }
    _reject_unknown_keys(document, allowed, "scenario")
    version = document.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ScenarioValidationError(
            f"schema_version: unsupported version {version}, expected {SCHEMA_VERSION}"
        )

    seed = document.get("seed", 1)
    if not isinstance(seed, int):
        raise ScenarioValidationError(f"seed: must be an integer, got {seed!r}")
    geometry_rng = random.Random(f"geometry:{seed}")

    window = _dataclass_from(document.get("window", {}), SimulationWindow, "window")
    bounds = _dataclass_from(document.get("bounds", {}), Bounds, "bounds")
    constants = _dataclass_from(document.get("constants", {}), PhysicalConstants, "constants")
    geometry = _dataclass_from(document.get("site_geometry", {}), SiteGeometry, "site_geometry")

    users_section = dict(document.get("users", {}))
    demand_section = users_section.pop("demand", {})
    demand = _dataclass_from(demand_section, DemandSpec, "users.demand")
    users = _dataclass_from(users_section, UserPopulation, "users", demand=demand)

    radio_section = dict(document.get("radio", {}))
    mcs_rows = radio_section.pop("mcs_table", None)
    if mcs_rows is None:
        mcs_table = DEFAULT_MCS_TABLE
    else:
        try:
            mcs_table = tuple(McsEntry(float(snr), float(se)) for snr, se in mcs_rows)
        except (TypeError, ValueError) as exc:
            raise ScenarioValidationError(f"radio.mcs_table: {exc}") from exc
    radio = _dataclass_from(radio_section, RadioOptions, "radio", mcs_table=mcs_table)

    buildings = []
    for i, entry in enumerate(document.get("buildings", [])):
        if not isinstance(entry, dict):
            raise ScenarioValidationError(f"buildings[{i}]: expected an object")
        _reject_unknown_keys(entry, {"polygon", "height_m"}, f"buildings[{i}]")
        try:
            polygon = tuple((float(x), float(y)) for x, y in entry.get("polygon", ()))
            buildings.append(Building(polygon=polygon, height_m=float(entry.get("height_m", 0.0))))
        except (TypeError, ValueError) as exc:
            raise ScenarioValidationError(f"buildings[{i}]: {exc}") from exc

    energy_template = document.get("energy") or {}
    _reject_unknown_keys(
        energy_template,
        [f.name for f in fields(CellEnergyConfig) if f.name != "building_altitude_m"],
        "energy",
    )
    # A null pv/wt section disables that plant type for the whole scenario.
    pv_template = document.get("pv", {})
    wt_template = document.get("wt", {})
    battery_template = document.get("battery") or {}

    pv_altitude_spec = (
        pv_template.get("altitude_m", list(DEFAULT_PV_ALTITUDE_BOUNDS))
        if pv_template is not None
        else None
    )
    wt_altitude_spec = (
        wt_template.get("hub_altitude_m", list(DEFAULT_WT_ALTITUDE_BOUNDS))
        if wt_template is not None
        else None
    )

    site_sections = document.get("sites")
    if site_sections is None:
        site_sections = [{"position": list(pos)} for pos in DEFAULT_SITE_POSITIONS]
    if not isinstance(site_sections, list) or not site_sections:
        raise ScenarioValidationError("sites: expected a non-empty list")

    sites: list[SiteSetup] = []
    for i, section in enumerate(site_sections):
        path = f"sites[{i}]"
        if not isinstance(section, dict):
            raise ScenarioValidationError(f"{path}: expected an object")
        _reject_unknown_keys(
            section,
            {"position", "antenna_height_m", "building_altitude_m", "cells"},
            path,
        )
        position = section.get("position")
        if (
            not isinstance(position, (list, tuple))
            or len(position) != 2
            or not all(isinstance(v, (int, float)) for v in position)
        ):
            raise ScenarioValidationError(f"{path}.position: expected [x, y]")
        antenna_height = _resolve_altitude(
            section.get("antenna_height_m", list(DEFAULT_ANTENNA_HEIGHT_BOUNDS)),
            geometry_rng,
            f"{path}.antenna_height_m",
        )
        building_altitude = _resolve_altitude(
            section.get("building_altitude_m", list(DEFAULT_BUILDING_ALTITUDE_BOUNDS)),
            geometry_rng,
            f"{path}.building_altitude_m",
        )
        site_altitudes = {
            "building": building_altitude,
            "pv": _resolve_altitude(pv_altitude_spec, geometry_rng, f"{path}.pv.altitude_m")
            if pv_altitude_spec is not None
            else 0.0,
            "wt": _resolve_altitude(wt_altitude_spec, geometry_rng, f"{path}.wt.hub_altitude_m")
            if wt_altitude_spec is not None
            else 0.0,
        }

        cell_sections = section.get("cells", _default_cell_sections())
        cells = tuple(
            _build_cell(
                cell_section,
                energy_template,
                pv_template,
                wt_template,
                battery_template,
                site_altitudes,
                f"{path}.cells[{j}]",
            )
            for j, cell_section in enumerate(cell_sections)
        )
        if len(cells) != 3:
            raise ScenarioValidationError(f"{path}.cells: expected exactly 3 cells, got {len(cells)}")
        if len({cell.radio.frequency_mhz for cell in cells}) != 3:
            raise ScenarioValidationError(f"{path}.cells: cell frequencies must be distinct")
        sites.append(
            SiteSetup(
                x=float(position[0]),
                y=float(position[1]),
                building_altitude_m=building_altitude,
                antenna_height_m=antenna_height,
                cells=cells,
            )
        )

    try:
        config = ScenarioConfig(
            name=str(document.get("name", "default")),
            seed=seed,
            runs=document.get("runs", 10),
            res_mode=document.get("res_mode", "pv+wt"),
            window=window,
            bounds=bounds,
            constants=constants,
            geometry=geometry,
            users=users,
            radio=radio,
            buildings=tuple(buildings),
            sites=tuple(sites),
        )
    except (TypeError, ValueError) as exc:
        raise ScenarioValidationError(f"scenario: {exc}") from exc
    _validate_cross_constraints(config)
    return config


def _validate_cross_constraints(config: ScenarioConfig) -> None:
    wants_pv = config.res_mode in ("pv", "pv+wt")
    wants_wt = config.res_mode in ("wt", "pv+wt")
    has_pv = any(cell.pv is not None for site in config.sites for cell in site.cells)
    has_wt = any(cell.wt is not None for site in config.sites for cell in site.cells)
    if wants_pv and not has_pv:
        raise ScenarioValidationError("res_mode: PV mode selected but no cell has a PV plant")
    if wants_wt and not has_wt:
        raise ScenarioValidationError("res_mode: WT mode selected but no cell has a wind plant")
    terrain = config.geometry.terrain_altitude_m
    roughness = config.geometry.surface_roughness_m
    for i, site in enumerate(config.sites):
        for j, cell in enumerate(site.cells):
            for label, altitude in (
                ("energy.building_altitude_m", cell.energy.building_altitude_m),
                ("pv.altitude_m", cell.pv.altitude_m if cell.pv else None),
                ("wt.hub_altitude_m", cell.wt.hub_altitude_m if cell.wt else None),
            ):
                if altitude is not None and altitude + terrain <= roughness:
                    raise ScenarioValidationError(
                        f"sites[{i}].cells[{j}].{label}: altitude {altitude} m does not "
                        f"clear the surface roughness length {roughness} m"
                    )


def load_scenario(path: str | Path) -> ScenarioConfig:
    """Load and validate a scenario document from ``path``."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(f"{path}: not valid JSON ({exc})") from exc
    return scenario_from_dict(document)


# ---------------------------------------------------------------------------
# Scenario serialisation


def _cell_to_dict(cell: CellSetup) -> dict:
    radio = {f.name: getattr(cell.radio, f.name) for f in fields(CellRadioConfig) if f.init}
    frequency = radio.pop("frequency_mhz")
    section: dict[str, Any] = {"frequency_mhz": frequency, "radio": radio}
    if cell.pv is None:
        section["pv"] = False
    else:
        section["pv"] = {f.name: getattr(cell.pv, f.name) for f in fields(PvArrayConfig) if f.init}
    if cell.wt is None:
        section["wt"] = False
    else:
        wt = {
            f.name: getattr(cell.wt, f.name)
            for f in fields(WindTurbineConfig)
            if f.init and f.name != "power_curve"
        }
        wt["power_curve"] = [list(point) for point in cell.wt._anchors]
        section["wt"] = wt
    section["battery"] = {
        f.name: getattr(cell.battery, f.name) for f in fields(BatteryConfig) if f.init
    }
    return section


def scenario_to_dict(config: ScenarioConfig) -> dict:
    """Serialise a configuration to a normalised scenario document.

    The output is fully concrete (all defaults materialised, all altitude
    pairs resolved), so loading it back yields an identical configuration.
    """
    return {
        "schema_version": SCHEMA_VERSION,
        "name": config.name,
        "seed": config.seed,
        "runs": config.runs,
        "res_mode": config.res_mode,
        "window": {f.name: getattr(config.window, f.name) for f in fields(SimulationWindow)},
        "bounds": {f.name: getattr(config.bounds, f.name) for f in fields(Bounds)},
        "constants": {f.name: getattr(config.constants, f.name) for f in fields(PhysicalConstants)},
        "site_geometry": {f.name: getattr(config.geometry, f.name) for f in fields(SiteGeometry)},
        "users": {
            "count": config.users.count,
            "antenna_height_m": config.users.antenna_height_m,
            "tx_power_max_dbm": config.users.tx_power_max_dbm,
            "antenna_gain_dbi": config.users.antenna_gain_dbi,
            "demand": {f.name: getattr(config.users.demand, f.name) for f in fields(DemandSpec)},
        },
        "radio": {
            "mcs_table": [[entry.snr_db, entry.bits_per_hz] for entry in config.radio.mcs_table],
            "antenna_policy": config.radio.antenna_policy,
            "full_activation_users": config.radio.full_activation_users,
            "fallback_offset_db": config.radio.fallback_offset_db,
            "tx_power_policy": config.radio.tx_power_policy,
        },
        "buildings": [
            {"polygon": [list(p) for p in b.polygon], "height_m": b.height_m}
            for b in config.buildings
        ],
        "sites": [
            {
                "position": [site.x, site.y],
                "antenna_height_m": site.antenna_height_m,
                "building_altitude_m": site.building_altitude_m,
                "cells": [_cell_to_dict(cell) for cell in site.cells],
            }
            for site in config.sites
        ],
    }


def save_scenario(config: ScenarioConfig, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(scenario_to_dict(config), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


# ---------------------------------------------------------------------------
# Weather traces


def load_weather(path: str | Path, window: SimulationWindow) -> WeatherTrace:
    """Load a weather CSV and check it covers the simulation window."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise WeatherTraceError(f"{path}: cannot read weather file ({exc})") from exc
    lines = [line for line in text.splitlines() if line.strip() and not line.startswith("#")]
    if not lines:
        raise WeatherTraceError(f"{path}: empty weather file")
    reader = csv.reader(lines)
    header = tuple(h.strip() for h in next(reader))
    if header != WEATHER_HEADER:
        raise WeatherTraceError(
            f"{path}: header must be exactly {','.join(WEATHER_HEADER)}, got {','.join(header)}"
        )
    samples: list[WeatherSample] = []
    previous_step: int | None = None
    for row_number, row in enumerate(reader, start=2):
        if len(row) != len(WEATHER_HEADER):
            raise WeatherTraceError(f"{path}:{row_number}: expected {len(WEATHER_HEADER)} columns")
        try:
            step = int(row[0])
            values = [float(v) for v in row[1:]]
        except ValueError as exc:
            raise WeatherTraceError(f"{path}:{row_number}: {exc}") from exc
        if previous_step is not None and step != previous_step + 1:
            if step <= previous_step:
                raise WeatherTraceError(
                    f"{path}:{row_number}: non-monotone step index {step} after {previous_step}"
                )
            raise WeatherTraceError(
                f"{path}:{row_number}: missing step {previous_step + 1} (found {step})"
            )
        previous_step = step
        try:
            samples.append(
                WeatherSample(
                    timestamp=step,
                    station_temperature_c=values[0],
                    station_wind_mps=values[1],
                    irradiance_wm2=values[2],
                    station_pressure_pa=values[3],
                )
            )
        except ValueError as exc:
            raise WeatherTraceError(f"{path}:{row_number}: {exc}") from exc
    first = samples[0].timestamp
    last = samples[-1].timestamp
    if first > window.start_step or last < window.start_step + window.step_count - 1:
        raise WeatherTraceError(
            f"{path}: missing step coverage for window "
            f"[{window.start_step}, {window.start_step + window.step_count - 1}] "
            f"(file covers [{first}, {last}])"
        )
    offset = window.start_step - first
    return WeatherTrace(
        samples=tuple(samples[offset : offset + window.step_count]),
        start_step=window.start_step,
    )


# ---------------------------------------------------------------------------
# User generation

MAX_PLACEMENT_ATTEMPTS_PER_USER = 1000


def point_in_polygon(x: float, y: float, polygon: tuple[tuple[float, float], ...]) -> bool:
    """Ray-casting point-in-polygon test; boundary points count inside."""
    inside = False
    n = len(polygon)
    for i in range(n):
        x0, y0 = polygon[i]
        x1, y1 = polygon[(i + 1) % n]
        if min(y0, y1) <= y <= max(y0, y1) and min(x0, x1) <= x <= max(x0, x1):
            cross = (x1 - x0) * (y - y0) - (y1 - y0) * (x - x0)
            if abs(cross) < 1e-12:
                return True  # on the edge
        if (y0 > y) != (y1 > y):
            x_cross = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
            if x == x_cross:
                return True
            if x < x_cross:
                inside = not inside
    return inside


def generate_users(config: ScenarioConfig, seed: int) -> tuple[UserTerminal, ...]:
    """Place the configured user population uniformly on the outdoor area.

    Positions are rejection-sampled outside every building footprint and
    demands drawn from the configured distribution, both deterministic
    for a given seed. Positions and demands stay fixed for a whole run.
    """
    rng = random.Random(f"users:{seed}")
    population = config.users
    users: list[UserTerminal] = []
    bounds = config.bounds
    for index in range(population.count):
        for _ in range(MAX_PLACEMENT_ATTEMPTS_PER_USER):
            x = rng.uniform(bounds.xmin, bounds.xmax)
            y = rng.uniform(bounds.ymin, bounds.ymax)
            if not any(point_in_polygon(x, y, b.polygon) for b in config.buildings):
                break
        else:
            raise PlacementExhaustedError(
                f"could not place user {index} outside the building footprints after "
                f"{MAX_PLACEMENT_ATTEMPTS_PER_USER} attempts"
            )
        users.append(
            UserTerminal(
                x=x,
                y=y,
                demand_mbps=population.demand.draw(rng),
                antenna_height_m=population.antenna_height_m,
                tx_power_max_dbm=population.tx_power_max_dbm,
                antenna_gain_dbi=population.antenna_gain_dbi,
            )
        )
    return tuple(users)


# ---------------------------------------------------------------------------
# Bundled data


def bundled_data_dir():
    return resources.files("res5g.data")


def bundled_scenario_path() -> Path:
    return Path(str(bundled_data_dir() / "scenario.json"))


def bundled_weather_paths() -> tuple[Path, ...]:
    """The four synthetic seasonal day traces shipped with the package."""
    names = (
        "weather_vernal_equinox.csv",
        "weather_summer_solstice.csv",
        "weather_autumn_equinox.csv",
        "weather_winter_solstice.csv",
    )
    return tuple(Path(str(bundled_data_dir() / name)) for name in names)
