"""Active periods and momentary bottleneck identification.

An active period is a maximal uninterrupted stretch in which a station
processes parts; starvation or blockage ends it. The momentary bottleneck is
the station whose ongoing active period has run the longest, and bottleneck
status hands over during the overlap of the outgoing and incoming
bottlenecks' active periods (a shifting bottleneck).
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .simulation import SimulationRun, StateTimeline, StationState


@dataclass(frozen=True)
class ActivePeriod:
    station_id: int
    start: float
    end: float

    @property
    def duration(self) -> float:
        return self.end - self.start


class BottleneckKind(Enum):
    SOLE = "sole"
    SHIFTING = "shifting"


@dataclass(frozen=True)
class BottleneckSeries:
    """Per sample instant: the single bottleneck station and its kind."""

    times: np.ndarray
    station_ids: np.ndarray
    kinds: np.ndarray  # array of BottleneckKind

    def __len__(self) -> int:
        return len(self.times)


def extract_active_periods(timeline: StateTimeline) -> list[ActivePeriod]:
    """Merge consecutive Active intervals into maximal active periods."""
    periods: list[ActivePeriod] = []
    for state, start, end in timeline.intervals:
        if state is not StationState.ACTIVE:
            continue
        if periods and periods[-1].end == start:
            periods[-1] = ActivePeriod(timeline.station_id, periods[-1].start, end)
        else:
            periods.append(ActivePeriod(timeline.station_id, start, end))
    return periods


def elapsed_active(periods: list[ActivePeriod], t: float,
                   retrospective: bool = False) -> float:
    """Ongoing active duration at t: t minus the containing period's start.

    Returns 0 if no period contains t. With retrospective=True the full
    period length is returned instead of the elapsed part (offline mode).
    """
    starts = [p.start for p in periods]
    idx = bisect_right(starts, t) - 1
    if idx < 0 or t >= periods[idx].end:
        return 0.0
    if retrospective:
        return periods[idx].duration
    return t - periods[idx].start


class ActivePeriodView:
    """Per-station elapsed active durations, queryable at any time point."""

    def __init__(self, periods_by_station: list[list[ActivePeriod]],
                 retrospective: bool = False):
        self.periods_by_station = periods_by_station
        self.retrospective = retrospective
        self._starts = [np.array([p.start for p in ps]) for ps in periods_by_station]
        self._ends = [np.array([p.end for p in ps]) for ps in periods_by_station]

    @classmethod
    def from_run(cls, run: SimulationRun, retrospective: bool = False) -> "ActivePeriodView":
        return cls([extract_active_periods(tl) for tl in run.timelines],
                   retrospective=retrospective)

    @property
    def n_stations(self) -> int:
        return len(self.periods_by_station)

    def elapsed(self, station: int, t: float) -> float:
        return elapsed_active(self.periods_by_station[station], t,
                              retrospective=self.retrospective)

    def elapsed_all(self, t: float) -> np.ndarray:
        return self.elapsed_matrix(np.array([float(t)]))[0]

    def elapsed_matrix(self, ts: np.ndarray) -> np.ndarray:
        """Elapsed active durations, shape (len(ts), n_stations)."""
        ts = np.asarray(ts, dtype=float)
        out = np.zeros((len(ts), self.n_stations))
        for s in range(self.n_stations):
            starts, ends = self._starts[s], self._ends[s]
            if len(starts) == 0:
                continue
            idx = np.searchsorted(starts, ts, side="right") - 1
            valid = idx >= 0
            safe = np.where(valid, idx, 0)
            inside = valid & (ts < ends[safe])
            if self.retrospective:
                out[:, s] = np.where(inside, ends[safe] - starts[safe], 0.0)
            else:
                out[:, s] = np.where(inside, ts - starts[safe], 0.0)
        return out

    def period_at(self, station: int, t: float) -> ActivePeriod | None:
        """The active period containing t, if any."""
        periods = self.periods_by_station[station]
        starts = self._starts[station]
        idx = bisect_right(starts, t) - 1
        if idx < 0 or t >= periods[idx].end:
            return None
        return periods[idx]


def bottleneck_at(view: ActivePeriodView, t: float, fallback: int = 0) -> int:
    """Station with the longest ongoing active period at t.

    Ties break toward the lowest station index. If no station is active
    (elapsed all zero), the fallback is returned; callers tracking a series
    pass the previous instant's bottleneck as fallback (line-fill default 0).
    """
    bs = view.elapsed_all(t)
    if not bs.any():
        return fallback
    return int(np.argmax(bs))


def bottleneck_ids_over(view: ActivePeriodView, ts: np.ndarray,
                        fallback: int = 0) -> np.ndarray:
    """bottleneck_at over a sample grid, carrying the bottleneck forward
    through all-idle instants."""
    bs = view.elapsed_matrix(ts)
    ids = np.argmax(bs, axis=1)
    idle = ~bs.any(axis=1)
    for k in np.flatnonzero(idle):
        ids[k] = ids[k - 1] if k > 0 else fallback
    return ids


def classify_shifting(view: ActivePeriodView, times: np.ndarray,
                      station_ids: np.ndarray) -> BottleneckSeries:
    """Split bottleneck samples into sole and shifting ones.

    For each handover from bottleneck B1 to B2, samples falling inside the
    time overlap of B1's ongoing active period (at the last sample it holds
    the bottleneck) and B2's ongoing active period (at the first sample it
    does) are shifting; everything else is sole.
    """
    times = np.asarray(times, dtype=float)
    station_ids = np.asarray(station_ids)
    kinds = np.full(len(times), BottleneckKind.SOLE, dtype=object)

    if len(times) == 0:
        return BottleneckSeries(times, station_ids, kinds)

    # maximal runs of a constant bottleneck: (station, first index, last index)
    change = np.flatnonzero(np.diff(station_ids)) + 1
    bounds = np.concatenate(([0], change, [len(station_ids)]))
    runs = [(int(station_ids[lo]), int(lo), int(hi - 1))
            for lo, hi in zip(bounds[:-1], bounds[1:])]

    for (b1, first1, last1), (b2, first2, last2) in zip(runs[:-1], runs[1:]):
        p1 = view.period_at(b1, times[last1])
        p2 = view.period_at(b2, times[first2])
        if p1 is None or p2 is None:
            continue
        lo, hi = max(p1.start, p2.start), min(p1.end, p2.end)
        if lo >= hi:
            continue
        span = np.arange(first1, last2 + 1)
        in_overlap = (times[span] >= lo) & (times[span] < hi)
        kinds[span[in_overlap]] = BottleneckKind.SHIFTING

    return BottleneckSeries(times, station_ids, kinds)


def bottleneck_series(view: ActivePeriodView, ts: np.ndarray,
                      fallback: int = 0) -> BottleneckSeries:
    """Full pipeline: identify and classify the bottleneck at each instant."""
    ids = bottleneck_ids_over(view, ts, fallback=fallback)
    return classify_shifting(view, ts, ids)
