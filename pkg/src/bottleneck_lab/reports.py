"""CSV schemas, scenario config files and the run manifest.

All CSVs are UTF-8, comma-separated, with a header row and '.' as decimal
separator. Event-log times are written with full round-trip precision so a
diagnosis recomputed from the log matches the in-process pipeline exactly.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import pandas as pd
import yaml

from .active_period import ActivePeriod, BottleneckSeries
from .metrics import AggregateReport, FrequencyReport, SeverityReport
from .scenarios import ScenarioSpec
from .simulation import SimulationRun, StateTimeline, StationState, Variability


class SchemaError(ValueError):
    """A CSV or config file violates its expected schema."""


# --- event logs -----------------------------------------------------------

EVENT_LOG_COLUMNS = ["run_id", "station_id", "state", "start", "end"]


def write_event_log(path: Path, run: SimulationRun, run_id: int) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(EVENT_LOG_COLUMNS)
        for tl in run.timelines:
            for state, start, end in tl.intervals:
                w.writerow([run_id, tl.station_id, state.value, repr(start), repr(end)])


def read_event_log(path: Path) -> dict[int, tuple[StateTimeline, ...]]:
    """Parse an event log back into per-run timelines.

    Raises SchemaError on unknown states, missing columns, or timelines that
    are not contiguous from time 0.
    """
    rows: dict[tuple[int, int], list[tuple[StationState, float, float]]] = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [c for c in EVENT_LOG_COLUMNS
                                         if c not in reader.fieldnames]:
            raise SchemaError(f"{path}: expected columns {EVENT_LOG_COLUMNS}")
        for lineno, row in enumerate(reader, start=2):
            try:
                run_id = int(row["run_id"])
                station = int(row["station_id"])
                state = StationState.from_name(row["state"])
                start, end = float(row["start"]), float(row["end"])
            except (TypeError, ValueError) as exc:
                raise SchemaError(f"{path}:{lineno}: {exc}") from None
            rows.setdefault((run_id, station), []).append((state, start, end))

    if not rows:
        raise SchemaError(f"{path}: no event rows")

    out: dict[int, tuple[StateTimeline, ...]] = {}
    for run_id in sorted({k[0] for k in rows}):
        stations = sorted(k[1] for k in rows if k[0] == run_id)
        if stations != list(range(len(stations))):
            raise SchemaError(f"{path}: run {run_id} has gaps in station ids")
        timelines = []
        for s in stations:
            intervals = rows[(run_id, s)]
            if intervals[0][1] != 0.0:
                raise SchemaError(f"{path}: run {run_id} station {s} does not start at 0")
            for (_, _, e0), (_, s1, _) in zip(intervals, intervals[1:]):
                if e0 != s1:
                    raise SchemaError(
                        f"{path}: run {run_id} station {s} intervals not contiguous at {e0}")
            for _, a, b in intervals:
                if b <= a:
                    raise SchemaError(f"{path}: run {run_id} station {s} empty interval at {a}")
            timelines.append(StateTimeline(s, tuple(intervals)))
        out[run_id] = tuple(timelines)
    return out


# --- diagnosis exports ----------------------------------------------------

def write_active_periods(path: Path, periods_by_run: dict[int, list[list[ActivePeriod]]]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["run_id", "station_id", "start", "end"])
        for run_id, per_station in sorted(periods_by_run.items()):
            for periods in per_station:
                for p in periods:
                    w.writerow([run_id, p.station_id, repr(p.start), repr(p.end)])


def write_bottleneck_series(path: Path, series_by_run: dict[int, BottleneckSeries]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["run_id", "t", "station_id", "classification"])
        for run_id, series in sorted(series_by_run.items()):
            for t, sid, kind in zip(series.times, series.station_ids, series.kinds):
                w.writerow([run_id, f"{t:g}", int(sid), kind.value])


# --- metric exports -------------------------------------------------------

def write_rbf(path: Path, scenario: str, reports: list[FrequencyReport]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["scenario", "run_id", "station_id", "bf", "rbf"])
        for run_id, rep in enumerate(reports):
            for s in range(len(rep.bf)):
                w.writerow([scenario, run_id, s, int(rep.bf[s]), repr(float(rep.rbf[s]))])


def read_rbf(path: Path) -> pd.DataFrame:
    df = pd.read_csv(path)
    expected = ["scenario", "run_id", "station_id", "bf", "rbf"]
    if list(df.columns) != expected:
        raise SchemaError(f"{path}: expected columns {expected}")
    return df


def write_rbs_series(path: Path, scenario: str, reports: list[SeverityReport]) -> None:
    frames = []
    for run_id, rep in enumerate(reports):
        n, n_stations = rep.rbs.shape
        frames.append(pd.DataFrame({
            "scenario": scenario,
            "run_id": run_id,
            "t": pd.Series(rep.times).repeat(n_stations).to_numpy(),
            "station_id": list(range(n_stations)) * n,
            "bs": rep.bs.ravel(),
            "rbs": rep.rbs.ravel(),
        }))
    pd.concat(frames, ignore_index=True).to_csv(path, index=False, float_format="%.9g")


def write_aggregate(path: Path, rows: list[tuple[str, AggregateReport]]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["scenario", "station_id", "rbf_mean", "rbf_std", "rbs_time_mean"])
        for scenario, agg in rows:
            for s in range(len(agg.rbf_mean)):
                w.writerow([scenario, s, repr(float(agg.rbf_mean[s])),
                            repr(float(agg.rbf_std[s])), repr(float(agg.rbs_time_mean[s]))])


def read_aggregate(path: Path) -> pd.DataFrame:
    df = pd.read_csv(path)
    expected = ["scenario", "station_id", "rbf_mean", "rbf_std", "rbs_time_mean"]
    if list(df.columns) != expected:
        raise SchemaError(f"{path}: expected columns {expected}")
    return df


# --- scenario config files ------------------------------------------------

_SCENARIO_FIELDS = [
    "name", "uplifted_stations", "variability", "replication_count",
    "n_stations", "base_process_time", "process_time_uplift",
    "buffer_capacity", "settling_time", "observation_length", "sample_interval",
]


def _spec_to_dict(spec: ScenarioSpec) -> dict:
    return {
        "name": spec.name,
        "uplifted_stations": sorted(spec.uplifted_stations),
        "variability": spec.variability.name.lower(),
        "replication_count": spec.replication_count,
        "n_stations": spec.n_stations,
        "base_process_time": spec.base_process_time,
        "process_time_uplift": spec.process_time_uplift,
        "buffer_capacity": spec.buffer_capacity,
        "settling_time": spec.settling_time,
        "observation_length": spec.observation_length,
        "sample_interval": spec.sample_interval,
    }


def _spec_from_dict(d: dict) -> ScenarioSpec:
    if not isinstance(d, dict):
        raise SchemaError("scenario entry is not a mapping")
    unknown = set(d) - set(_SCENARIO_FIELDS)
    if unknown:
        raise SchemaError(f"unknown scenario fields: {sorted(unknown)}")
    for key in ("name", "uplifted_stations", "variability"):
        if key not in d:
            raise SchemaError(f"scenario entry missing {key!r}")
    kwargs = dict(d)
    kwargs["uplifted_stations"] = frozenset(int(i) for i in d["uplifted_stations"])
    kwargs["variability"] = Variability.from_name(str(d["variability"]))
    try:
        return ScenarioSpec(**kwargs)
    except (TypeError, ValueError) as exc:
        raise SchemaError(str(exc)) from None


def dump_scenarios(specs: list[ScenarioSpec]) -> str:
    return yaml.safe_dump({"scenarios": [_spec_to_dict(s) for s in specs]},
                          sort_keys=False)


def load_scenarios(path: Path) -> list[ScenarioSpec]:
    try:
        doc = yaml.safe_load(Path(path).read_text())
    except yaml.YAMLError as exc:
        raise SchemaError(f"{path}: invalid YAML: {exc}") from None
    if not isinstance(doc, dict) or "scenarios" not in doc:
        raise SchemaError(f"{path}: expected a top-level 'scenarios' list")
    specs = [_spec_from_dict(d) for d in doc["scenarios"]]
    if len({s.name for s in specs}) != len(specs):
        raise SchemaError(f"{path}: duplicate scenario names")
    return specs


def config_digest(specs: list[ScenarioSpec]) -> str:
    return hashlib.sha256(dump_scenarios(specs).encode()).hexdigest()


# --- run manifest ---------------------------------------------------------

@dataclass(frozen=True)
class RunManifest:
    version: str
    config_digest: str
    base_seed: int
    timestamp: str
    outputs: list[str]


def write_manifest(path: Path, version: str, specs: list[ScenarioSpec],
                   base_seed: int, outputs: list[Path]) -> RunManifest:
    manifest = RunManifest(
        version=version,
        config_digest=config_digest(specs),
        base_seed=base_seed,
        timestamp=datetime.now(timezone.utc).isoformat(),
        outputs=[str(p) for p in outputs],
    )
    Path(path).write_text(json.dumps(manifest.__dict__, indent=2) + "\n")
    return manifest
