"""Command-line interface.

Four subcommands: ``validate`` checks a scenario (and optionally weather
files) and prints a short report; ``simulate`` runs one weather day and
writes per-step ledgers plus a per-mode summary; ``report`` runs several
weather days across supply modes and writes a comparison table plus the
mean state-of-charge traces; ``sweep`` repeats simulations over a
mode x seed grid and tabulates the outcomes.

Exit codes: 0 success, 1 usage error, 2 input validation error,
3 runtime failure. Diagnostics go to stderr; the ``RES5G_LOG``
environment variable (debug/info/warning/error) sets the log level.

Every output file embeds the tool version and a SHA-256 digest of the
input files, and reruns with identical inputs, seed, runs and version
produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .errors import ScenarioParseError, ScenarioValidationError, WeatherTraceError
from .scenario_io import (
    RES_MODES,
    ScenarioConfig,
    WeatherTrace,
    load_scenario,
    load_weather,
)
from .sim_engine import ModeSummary, StepLedger, compute_metrics, simulate_runs

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_RUNTIME = 3

LEDGER_COLUMNS = (
    "run",
    "step",
    "site",
    "cell",
    "band_mhz",
    "users",
    "antennas",
    "p_total_w",
    "p_pa_w",
    "p_cp_w",
    "p_cool_w",
    "p_aux_w",
    "p_pv_w",
    "p_wt_w",
    "delta_e_wh",
    "battery_delta_wh",
    "grid_wh",
    "spilled_wh",
    "soc",
)

REPORT_COLUMNS = (
    "day",
    "mode",
    "harvest_total_kwh",
    "harvest_per_cell_kwh",
    "harvest_peak_kw",
    "grid_kwh",
    "aebl_pct",
    "arec_pct",
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports usage problems via exit code 1."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise _UsageError(message)


def _fmt(value: float | None) -> str:
    if value is None:
        return "undefined"
    return format(value, ".10g")


def _digest(paths: list[Path]) -> str:
    sha = hashlib.sha256()
    for path in paths:
        sha.update(path.read_bytes())
    return "sha256:" + sha.hexdigest()


def _provenance_lines(digest: str) -> list[str]:
    return [f"# res5g={__version__}", f"# input_digest={digest}"]


def _write_csv(path: Path, digest: str, header: tuple[str, ...], rows: list[list[str]]) -> None:
    lines = _provenance_lines(digest)
    lines.append(",".join(header))
    lines.extend(",".join(row) for row in rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _write_json(path: Path, digest: str, payload: dict) -> None:
    document = {"tool_version": __version__, "input_digest": digest}
    document.update(payload)
    path.write_text(json.dumps(document, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _ledger_rows(runs: list[list[StepLedger]]) -> list[list[str]]:
    rows: list[list[str]] = []
    for run_index, run in enumerate(runs):
        for ledger in run:
            for e in ledger.entries:
                rows.append(
                    [
                        str(run_index),
                        str(ledger.step),
                        str(e.site),
                        str(e.cell),
                        _fmt(e.band_mhz),
                        str(e.users),
                        str(e.active_antennas),
                        _fmt(e.power.p_total),
                        _fmt(e.power.p_pa),
                        _fmt(e.power.p_cp),
                        _fmt(e.power.p_cool),
                        _fmt(e.power.p_aux),
                        _fmt(e.p_pv_w),
                        _fmt(e.p_wt_w),
                        _fmt(e.delta_e_wh),
                        _fmt(e.battery_delta_wh),
                        _fmt(e.grid_wh),
                        _fmt(e.spilled_wh),
                        _fmt(e.soc),
                    ]
                )
    return rows


def _summary_payload(summary: ModeSummary, day: str, seed: int) -> dict:
    return {
        "day": day,
        "mode": summary.mode,
        "seed": seed,
        "runs": summary.runs,
        "harvest_total_kwh": summary.harvest_total_kwh,
        "harvest_per_cell_kwh": summary.harvest_per_cell_kwh,
        "harvest_peak_kw": summary.harvest_peak_kw,
        "grid_kwh": summary.grid_kwh,
        "aebl_pct": summary.aebl_pct,
        "arec_pct": summary.arec_pct,
        "mean_soc": list(summary.mean_soc),
    }


def _summary_csv_rows(summary: ModeSummary, day: str, seed: int) -> list[list[str]]:
    rows = [
        ["day", day],
        ["mode", summary.mode],
        ["seed", str(seed)],
        ["runs", str(summary.runs)],
        ["harvest_total_kwh", _fmt(summary.harvest_total_kwh)],
        ["harvest_per_cell_kwh", _fmt(summary.harvest_per_cell_kwh)],
        ["harvest_peak_kw", _fmt(summary.harvest_peak_kw)],
        ["grid_kwh", _fmt(summary.grid_kwh)],
        ["aebl_pct", _fmt(summary.aebl_pct)],
        ["arec_pct", _fmt(summary.arec_pct)],
    ]
    rows.extend(
        [f"mean_soc[{i}]", _fmt(v)] for i, v in enumerate(summary.mean_soc)
    )
    return rows


def _load_inputs(args) -> tuple[ScenarioConfig, list[Path]]:
    scenario_path = Path(args.scenario)
    if not scenario_path.exists():
        raise ScenarioValidationError(f"{scenario_path}: scenario file does not exist")
    config = load_scenario(scenario_path)
    weather_paths = [Path(p) for p in getattr(args, "weather", []) or []]
    for path in weather_paths:
        if not path.exists():
            raise WeatherTraceError(f"{path}: weather file does not exist")
    return config, weather_paths


def _requested_modes(args, config: ScenarioConfig) -> tuple[str, ...]:
    modes = tuple(args.mode) if args.mode else (config.res_mode,)
    seen: list[str] = []
    for mode in modes:
        if mode not in seen:
            seen.append(mode)
    return tuple(seen)


def _simulate_day(
    config: ScenarioConfig,
    weather: WeatherTrace,
    modes: tuple[str, ...],
    seed: int,
    runs: int,
) -> tuple[dict[str, list[list[StepLedger]]], dict[str, ModeSummary]]:
    # The grid-only baseline is always simulated so AEBL/AREC are defined.
    sim_modes = modes if "none" in modes else ("none",) + modes
    ledgers = simulate_runs(config, weather, sim_modes, seed, runs)
    summaries = compute_metrics(ledgers, config)
    return ledgers, summaries


def _cmd_validate(args) -> int:
    config, weather_paths = _load_inputs(args)
    traces = [load_weather(path, config.window) for path in weather_paths]
    n_cells = sum(len(site.cells) for site in config.sites)
    n_pv = sum(cell.pv is not None for site in config.sites for cell in site.cells)
    n_wt = sum(cell.wt is not None for site in config.sites for cell in site.cells)
    report = {
        "scenario": config.name,
        "sites": len(config.sites),
        "cells": n_cells,
        "users": config.users.count,
        "buildings": len(config.buildings),
        "res_mode": config.res_mode,
        "pv_plants": n_pv,
        "wt_plants": n_wt,
        "window_steps": config.window.step_count,
        "seed": config.seed,
        "runs": config.runs,
        "weather_files": [str(p) for p in weather_paths],
        "weather_steps": [len(t) for t in traces],
    }
    if args.format == "json":
        print(json.dumps({"tool_version": __version__, **report}, indent=2, sort_keys=True))
    else:
        print(f"res5g {__version__} scenario report")
        for key, value in report.items():
            print(f"  {key}: {value}")
        print("scenario OK")
    return EXIT_OK


def _cmd_simulate(args) -> int:
    config, weather_paths = _load_inputs(args)
    weather = load_weather(weather_paths[0], config.window)
    modes = _requested_modes(args, config)
    seed = args.seed if args.seed is not None else config.seed
    runs = args.runs if args.runs is not None else config.runs
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    digest = _digest([Path(args.scenario), weather_paths[0]])
    day = weather_paths[0].stem

    ledgers, summaries = _simulate_day(config, weather, modes, seed, runs)
    for mode in modes:
        safe_mode = mode.replace("+", "_")
        _write_csv(
            out / f"ledger_{safe_mode}.csv", digest, LEDGER_COLUMNS, _ledger_rows(ledgers[mode])
        )
        summary = summaries[mode]
        if args.format == "json":
            _write_json(
                out / f"summary_{safe_mode}.json", digest, _summary_payload(summary, day, seed)
            )
        else:
            _write_csv(
                out / f"summary_{safe_mode}.csv",
                digest,
                ("field", "value"),
                _summary_csv_rows(summary, day, seed),
            )
    print(f"wrote {len(modes)} mode(s) to {out}")
    return EXIT_OK


def _cmd_report(args) -> int:
    config, weather_paths = _load_inputs(args)
    modes = tuple(args.mode) if args.mode else RES_MODES
    if "none" not in modes:
        modes = ("none",) + modes
    seed = args.seed if args.seed is not None else config.seed
    runs = args.runs if args.runs is not None else config.runs
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    digest = _digest([Path(args.scenario)] + weather_paths)

    table_rows: list[list[str]] = []
    soc_rows: list[list[str]] = []
    json_days: list[dict] = []
    for path in weather_paths:
        day = path.stem
        weather = load_weather(path, config.window)
        _, summaries = _simulate_day(config, weather, modes, seed, runs)
        for mode in modes:
            summary = summaries[mode]
            table_rows.append(
                [
                    day,
                    mode,
                    _fmt(summary.harvest_total_kwh),
                    _fmt(summary.harvest_per_cell_kwh),
                    _fmt(summary.harvest_peak_kw),
                    _fmt(summary.grid_kwh),
                    _fmt(summary.aebl_pct),
                    _fmt(summary.arec_pct),
                ]
            )
            for step_index, soc in enumerate(summary.mean_soc):
                soc_rows.append([day, mode, str(step_index), _fmt(soc)])
            json_days.append(_summary_payload(summary, day, seed))

    if args.format == "json":
        _write_json(out / "report.json", digest, {"seed": seed, "runs": runs, "days": json_days})
    else:
        _write_csv(out / "report.csv", digest, REPORT_COLUMNS, table_rows)
        _write_csv(out / "soc_trace.csv", digest, ("day", "mode", "step", "mean_soc"), soc_rows)
    print(f"wrote report for {len(weather_paths)} day(s) x {len(modes)} mode(s) to {out}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    config, weather_paths = _load_inputs(args)
    weather = load_weather(weather_paths[0], config.window)
    modes = tuple(args.mode) if args.mode else RES_MODES
    if "none" not in modes:
        modes = ("none",) + modes
    seeds = tuple(args.seed) if args.seed else (config.seed,)
    runs = args.runs if args.runs is not None else config.runs
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    digest = _digest([Path(args.scenario), weather_paths[0]])
    day = weather_paths[0].stem

    rows: list[list[str]] = []
    payloads: list[dict] = []
    for seed in seeds:
        _, summaries = _simulate_day(config, weather, modes, seed, runs)
        for mode in modes:
            summary = summaries[mode]
            rows.append(
                [
                    str(seed),
                    day,
                    mode,
                    _fmt(summary.harvest_total_kwh),
                    _fmt(summary.harvest_peak_kw),
                    _fmt(summary.grid_kwh),
                    _fmt(summary.aebl_pct),
                    _fmt(summary.arec_pct),
                ]
            )
            payloads.append(_summary_payload(summary, day, seed))
    if args.format == "json":
        _write_json(out / "sweep.json", digest, {"runs": runs, "entries": payloads})
    else:
        _write_csv(
            out / "sweep.csv",
            digest,
            ("seed", "day", "mode", "harvest_total_kwh", "harvest_peak_kw", "grid_kwh", "aebl_pct", "arec_pct"),
            rows,
        )
    print(f"wrote sweep over {len(seeds)} seed(s) x {len(modes)} mode(s) to {out}")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="res5g", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"res5g {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, weather_required: bool, weather_repeat: bool):
        p.add_argument("--scenario", required=True, help="scenario JSON document")
        p.add_argument(
            "--weather",
            action="append",
            required=weather_required,
            help="weather CSV trace" + (" (repeatable, one per day)" if weather_repeat else ""),
        )
        p.add_argument("--out", default="out", help="output directory (default: ./out)")
        p.add_argument(
            "--format",
            choices=("csv", "json"),
            default="csv",
            help="output document format (default: csv)",
        )
        p.add_argument("--runs", type=int, help="independent runs (default: scenario value)")

    p_validate = sub.add_parser("validate", help="check a scenario and optional weather files")
    p_validate.add_argument("--scenario", required=True)
    p_validate.add_argument("--weather", action="append")
    p_validate.add_argument("--format", choices=("csv", "json"), default="csv")
    p_validate.set_defaults(func=_cmd_validate)

    p_sim = sub.add_parser("simulate", help="simulate one weather day")
    add_common(p_sim, weather_required=True, weather_repeat=False)
    p_sim.add_argument("--mode", action="append", choices=RES_MODES, help="supply mode (repeatable)")
    p_sim.add_argument("--seed", type=int, help="base run seed (default: scenario value)")
    p_sim.set_defaults(func=_cmd_simulate)

    p_rep = sub.add_parser("report", help="compare supply modes across weather days")
    add_common(p_rep, weather_required=True, weather_repeat=True)
    p_rep.add_argument("--mode", action="append", choices=RES_MODES, help="supply mode (repeatable)")
    p_rep.add_argument("--seed", type=int, help="base run seed (default: scenario value)")
    p_rep.set_defaults(func=_cmd_report)

    p_sweep = sub.add_parser("sweep", help="cartesian simulations over modes and seeds")
    add_common(p_sweep, weather_required=True, weather_repeat=False)
    p_sweep.add_argument("--mode", action="append", choices=RES_MODES, help="supply mode (repeatable)")
    p_sweep.add_argument("--seed", type=int, action="append", help="run seed (repeatable)")
    p_sweep.set_defaults(func=_cmd_sweep)
    return parser


def _configure_logging() -> None:
    level_name = os.environ.get("RES5G_LOG", "warning").upper()
    level = getattr(logging, level_name, None)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def main(argv: list[str] | None = None) -> int:
    _configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ScenarioParseError, ScenarioValidationError, WeatherTraceError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as exc:  # pragma: no cover - defensive
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
