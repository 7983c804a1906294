"""Command-line interface.

Subcommands:
  run           simulate scenarios and export event logs plus metric CSVs
  diagnose      recompute the full diagnosis from an event log CSV alone
  export-plots  condense results into plot-ready CSVs (rbf bars, rbf-vs-rbs,
                rbs time window around a bottleneck shift)

Exit codes: 0 success, 1 malformed config or input schema, 2 I/O failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np
import pandas as pd

from . import __version__, reports
from .active_period import ActivePeriodView, bottleneck_series, extract_active_periods
from .metrics import relative_bottleneck_frequency, severity_at_instants
from .reports import SchemaError
from .scenarios import ScenarioSpec, catalog, run_scenario

SEED_ENV_VAR = "BOTTLENECK_LAB_SEED"
DEFAULT_SEED = 42
DEFAULT_WINDOW = (900.0, 1100.0)
DEFAULT_WINDOW_STATIONS = (3, 4, 5, 6)


def _default_seed() -> int:
    env = os.environ.get(SEED_ENV_VAR)
    return int(env) if env else DEFAULT_SEED


def _parse_window(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must be start:end, got {text!r}")
    if hi <= lo:
        raise argparse.ArgumentTypeError("window end must exceed start")
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bottleneck-lab",
        description="Flow-line simulation and shifting-bottleneck diagnosis.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate scenarios and export results")
    run.add_argument("--config", type=Path,
                     help="scenario config file (default: built-in catalog)")
    which = run.add_mutually_exclusive_group(required=True)
    which.add_argument("--scenario", help="run a single scenario by name")
    which.add_argument("--all", action="store_true", help="run every scenario")
    run.add_argument("--seed", type=int, default=None,
                     help=f"base seed (fallback: ${SEED_ENV_VAR}, then {DEFAULT_SEED})")
    run.add_argument("--runs", type=int, default=None,
                     help="replications per scenario (default from config, 10)")
    run.add_argument("--out", type=Path, default=Path("results"))
    run.add_argument("--jobs", type=int, default=1, help="parallel simulation workers")

    diag = sub.add_parser("diagnose", help="recompute diagnosis from an event log")
    diag.add_argument("eventlog", type=Path)
    diag.add_argument("--out", type=Path, default=Path("diagnosis"))
    diag.add_argument("--settling", type=float, default=0.0,
                      help="observation window start (default 0)")
    diag.add_argument("--interval", type=float, default=1.0,
                      help="sample spacing (default 1)")
    diag.add_argument("--label", default=None,
                      help="scenario label in output CSVs (default: log file stem)")

    plots = sub.add_parser("export-plots", help="write plot-ready CSVs from results")
    plots.add_argument("results", type=Path)
    plots.add_argument("--window", type=_parse_window, default=DEFAULT_WINDOW,
                       metavar="START:END",
                       help="rbs window relative to observation start (default 900:1100)")
    plots.add_argument("--window-scenario", default="S3-1")
    plots.add_argument("--window-run", type=int, default=0)
    plots.add_argument("--stations", type=int, nargs="+",
                       default=list(DEFAULT_WINDOW_STATIONS),
                       help="stations in the rbs window export (default 3 4 5 6)")
    return parser


def _select_scenarios(args) -> list[ScenarioSpec]:
    specs = reports.load_scenarios(args.config) if args.config else catalog()
    if not args.all:
        matches = [s for s in specs if s.name == args.scenario]
        if not matches:
            raise SchemaError(f"scenario {args.scenario!r} not found "
                              f"(available: {', '.join(s.name for s in specs)})")
        specs = matches
    return specs


def cmd_run(args) -> int:
    specs = _select_scenarios(args)
    seed = args.seed if args.seed is not None else _default_seed()
    out: Path = args.out
    out.mkdir(parents=True, exist_ok=True)

    outputs: list[Path] = []
    aggregate_rows = []
    for spec in specs:
        result = run_scenario(spec, base_seed=seed, jobs=args.jobs,
                              replications=args.runs)
        scen_dir = out / spec.name
        scen_dir.mkdir(exist_ok=True)
        for run_id, run in enumerate(result.runs):
            run_dir = scen_dir / str(run_id)
            run_dir.mkdir(exist_ok=True)
            reports.write_event_log(run_dir / "events.csv", run, run_id)
            outputs.append(run_dir / "events.csv")
        periods = {i: [extract_active_periods(tl) for tl in run.timelines]
                   for i, run in enumerate(result.runs)}
        reports.write_active_periods(scen_dir / "active_periods.csv", periods)
        reports.write_bottleneck_series(scen_dir / "bottleneck_series.csv",
                                        dict(enumerate(result.series)))
        reports.write_rbf(scen_dir / "rbf.csv", spec.name,
                          list(result.frequency_reports))
        reports.write_rbs_series(scen_dir / "rbs_series.csv", spec.name,
                                 list(result.severity_reports))
        outputs += [scen_dir / n for n in ("active_periods.csv", "bottleneck_series.csv",
                                           "rbf.csv", "rbs_series.csv")]
        aggregate_rows.append((spec.name, result.aggregate))
        print(f"{spec.name}: {len(result.runs)} runs, "
              f"mean rbf {np.round(result.aggregate.rbf_mean, 3).tolist()}")

    reports.write_aggregate(out / "aggregate.csv", aggregate_rows)
    outputs.append(out / "aggregate.csv")
    reports.write_manifest(out / "manifest.json", __version__, specs, seed, outputs)
    return 0


def cmd_diagnose(args) -> int:
    timelines_by_run = reports.read_event_log(args.eventlog)
    label = args.label or args.eventlog.stem
    out: Path = args.out
    out.mkdir(parents=True, exist_ok=True)

    periods: dict[int, list] = {}
    series_by_run = {}
    freq_reports = []
    sev_reports = []
    for run_id, timelines in sorted(timelines_by_run.items()):
        view = ActivePeriodView([extract_active_periods(tl) for tl in timelines])
        end = min(tl.end for tl in timelines)
        n = int((end - args.settling) / args.interval)
        if n < 1:
            raise SchemaError(f"{args.eventlog}: no observation instants after "
                              f"settling={args.settling}")
        ts = args.settling + args.interval * np.arange(n)
        series = bottleneck_series(view, ts)
        periods[run_id] = view.periods_by_station
        series_by_run[run_id] = series
        freq_reports.append(relative_bottleneck_frequency(series, len(timelines)))
        sev_reports.append(severity_at_instants(view, ts))

    reports.write_active_periods(out / "active_periods.csv", periods)
    reports.write_bottleneck_series(out / "bottleneck_series.csv", series_by_run)
    reports.write_rbf(out / "rbf.csv", label, freq_reports)
    reports.write_rbs_series(out / "rbs_series.csv", label, sev_reports)
    print(f"diagnosed {len(timelines_by_run)} run(s) from {args.eventlog}")
    return 0


def cmd_export_plots(args) -> int:
    results: Path = args.results
    agg_path = results / "aggregate.csv"
    if not results.is_dir() or not agg_path.exists():
        raise SchemaError(f"{results}: not a results directory (missing aggregate.csv)")
    agg = reports.read_aggregate(agg_path)

    groups = sorted({str(s).split("-")[0] for s in agg["scenario"].unique()})
    for group in groups:
        sel = agg[agg["scenario"].str.startswith(group + "-")]
        sel[["scenario", "station_id", "rbf_mean", "rbf_std"]].to_csv(
            results / f"fig_rbf_{group}.csv", index=False)

    ws = args.window_scenario
    sel = agg[agg["scenario"] == ws]
    if sel.empty:
        raise SchemaError(f"{results}: scenario {ws!r} missing from aggregate.csv")
    sel[["scenario", "station_id", "rbf_mean", "rbs_time_mean"]].to_csv(
        results / "fig_rbf_vs_rbs.csv", index=False)

    series_path = results / ws / "rbs_series.csv"
    if not series_path.exists():
        raise SchemaError(f"{series_path}: missing rbs series for window export")
    series = pd.read_csv(series_path)
    t0 = series["t"].min()
    lo, hi = (t0 + args.window[0], t0 + args.window[1])
    win = series[(series["run_id"] == args.window_run)
                 & (series["t"] >= lo) & (series["t"] < hi)
                 & (series["station_id"].isin(args.stations))]
    win.to_csv(results / "fig_rbs_window.csv", index=False)
    print(f"wrote fig_rbf_<group>.csv, fig_rbf_vs_rbs.csv, fig_rbs_window.csv "
          f"to {results}")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"run": cmd_run, "diagnose": cmd_diagnose,
               "export-plots": cmd_export_plots}[args.command]
    try:
        return handler(args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
