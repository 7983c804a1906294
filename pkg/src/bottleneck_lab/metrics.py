"""Bottleneck diagnosis metrics.

Relative bottleneck frequency (rbf) measures how often a station is the
momentary bottleneck over the observation window: rbf_S = bf_S / n, where
bf_S counts the sampled instants at which S is the bottleneck. The rbf of
all stations sums to 1.

Relative bottleneck severity (rbs) measures, at a single instant, how close
each station's ongoing active period comes to the current bottleneck's:
rbs_S = bs_S / bs_BN. The bottleneck itself has rbs = 1; the per-station sum
may exceed 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .active_period import ActivePeriodView, BottleneckSeries, bottleneck_ids_over
from .simulation import SimulationRun


@dataclass(frozen=True)
class FrequencyReport:
    """Per-station bottleneck counts (bf) and frequencies (rbf) for one run."""

    bf: np.ndarray
    rbf: np.ndarray
    n: int


@dataclass(frozen=True)
class SeverityReport:
    """Per-instant, per-station active durations (bs) and severities (rbs).

    bs and rbs have shape (n_instants, n_stations); bottleneck_ids gives the
    bs_BN owner at each instant.
    """

    times: np.ndarray
    bs: np.ndarray
    rbs: np.ndarray
    bottleneck_ids: np.ndarray


@dataclass(frozen=True)
class AggregateReport:
    """Cross-run aggregation: rbf mean/std and time-averaged rbs per station."""

    rbf_mean: np.ndarray
    rbf_std: np.ndarray
    rbs_time_mean: np.ndarray
    n_runs: int


def bottleneck_frequency(series: BottleneckSeries, station: int) -> int:
    """Number of sampled instants at which the station is the bottleneck."""
    if len(series) == 0:
        raise ValueError("empty bottleneck series")
    return int(np.count_nonzero(series.station_ids == station))


def relative_bottleneck_frequency(series: BottleneckSeries,
                                  n_stations: int) -> FrequencyReport:
    """rbf_S = bf_S / n for every station."""
    n = len(series)
    if n == 0:
        raise ValueError("empty bottleneck series")
    bf = np.bincount(series.station_ids, minlength=n_stations)
    return FrequencyReport(bf=bf, rbf=bf / n, n=n)


def relative_bottleneck_severity(view: ActivePeriodView,
                                 t: float) -> np.ndarray | None:
    """Per-station rbs at one instant, or None when no station is active.

    The all-idle case has no defined severity (bs_BN = 0) and is reported as
    None rather than as a division result.
    """
    bs = view.elapsed_all(t)
    top = bs.max()
    if top == 0.0:
        return None
    return bs / top


def severity_at_instants(view: ActivePeriodView, ts: np.ndarray) -> SeverityReport:
    """rbs for every station at the given instants.

    The normalizer bs_BN at each instant is the elapsed duration of the
    station picked by the bottleneck identification (argmax with lowest-index
    tie-break, carried forward through all-idle instants); that station's rbs
    is exactly 1. All-idle instants yield NaN severities.
    """
    ts = np.asarray(ts, dtype=float)
    bs = view.elapsed_matrix(ts)
    ids = bottleneck_ids_over(view, ts)
    bn_bs = bs[np.arange(len(ts)), ids]
    with np.errstate(invalid="ignore", divide="ignore"):
        rbs = np.where(bn_bs[:, None] > 0, bs / np.where(bn_bs == 0, np.nan, bn_bs)[:, None],
                       np.nan)
    return SeverityReport(times=ts, bs=bs, rbs=rbs, bottleneck_ids=ids)


def severity_series(run: SimulationRun,
                    view: ActivePeriodView | None = None) -> SeverityReport:
    """rbs for every station at every observation instant of a run."""
    if view is None:
        view = ActivePeriodView.from_run(run)
    return severity_at_instants(view, run.config.sample_instants())


def aggregate_runs(frequency_reports: list[FrequencyReport],
                   severity_reports: list[SeverityReport] | None = None,
                   ) -> AggregateReport:
    """Cross-run mean and sample standard deviation of rbf, plus the cross-run
    mean of each run's time-averaged rbs."""
    if not frequency_reports:
        raise ValueError("need at least one frequency report")
    rbf = np.stack([r.rbf for r in frequency_reports])
    if rbf.ndim != 2 or len({r.rbf.shape for r in frequency_reports}) != 1:
        raise ValueError("mismatched station sets across reports")
    rbf_mean = rbf.mean(axis=0)
    rbf_std = rbf.std(axis=0, ddof=1) if len(frequency_reports) > 1 else np.zeros_like(rbf_mean)

    if severity_reports:
        if len({r.rbs.shape[1] for r in severity_reports} | {rbf.shape[1]}) != 1:
            raise ValueError("mismatched station sets across reports")
        per_run = np.stack([np.nanmean(r.rbs, axis=0) for r in severity_reports])
        rbs_time_mean = per_run.mean(axis=0)
    else:
        rbs_time_mean = np.full_like(rbf_mean, np.nan)

    return AggregateReport(rbf_mean=rbf_mean, rbf_std=rbf_std,
                           rbs_time_mean=rbs_time_mean, n_runs=len(frequency_reports))
