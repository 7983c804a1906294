import numpy as np
import pytest

from bottleneck_lab import (
    ActivePeriod,
    ActivePeriodView,
    BottleneckKind,
    StationState,
    StateTimeline,
    bottleneck_at,
    classify_shifting,
    elapsed_active,
    extract_active_periods,
)
from bottleneck_lab.active_period import bottleneck_ids_over

from conftest import random_period_layout, random_timeline
from oracles import (
    active_periods_by_tick_scan,
    elapsed_by_linear_scan,
    shifting_flags_by_overlap_scan,
)

A, S, B = StationState.ACTIVE, StationState.STARVED, StationState.BLOCKED


def tl(*intervals):
    return StateTimeline(0, tuple((s, float(a), float(b)) for s, a, b in intervals))


def view_of(*period_lists):
    return ActivePeriodView([
        [ActivePeriod(sid, float(a), float(b)) for a, b in periods]
        for sid, periods in enumerate(period_lists)])


class TestExtractActivePeriods:
    def test_inactive_interval_splits_periods(self):
        periods = extract_active_periods(tl((A, 0, 5), (S, 5, 8), (A, 8, 9)))
        assert [(p.start, p.end) for p in periods] == [(0.0, 5.0), (8.0, 9.0)]

    def test_back_to_back_active_merges(self):
        periods = extract_active_periods(tl((A, 0, 3), (A, 3, 7)))
        assert [(p.start, p.end) for p in periods] == [(0.0, 7.0)]

    def test_blocked_also_terminates(self):
        periods = extract_active_periods(tl((A, 0, 2), (B, 2, 3), (A, 3, 4)))
        assert [(p.start, p.end) for p in periods] == [(0.0, 2.0), (3.0, 4.0)]

    def test_matches_tick_scan_oracle(self):
        rng = np.random.default_rng(2024)
        for _ in range(1000):
            timeline = random_timeline(rng)
            got = [(p.start, p.end) for p in extract_active_periods(timeline)]
            assert got == active_periods_by_tick_scan(timeline)


class TestElapsedActive:
    def test_inside_single_period(self):
        assert elapsed_active([ActivePeriod(0, 0, 5)], 3.0) == 3.0

    def test_after_period_is_zero(self):
        assert elapsed_active([ActivePeriod(0, 0, 5)], 6.0) == 0.0

    def test_second_period(self):
        periods = [ActivePeriod(0, 2, 4), ActivePeriod(0, 6, 10)]
        assert elapsed_active(periods, 7.0) == 1.0

    def test_retrospective_returns_full_length(self):
        periods = [ActivePeriod(0, 2, 4), ActivePeriod(0, 6, 10)]
        assert elapsed_active(periods, 7.0, retrospective=True) == 4.0

    def test_slope_one_inside_and_reset_at_end(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            periods = random_period_layout(rng, 0)
            t = float(rng.uniform(0, 40))
            expected = elapsed_by_linear_scan(periods, t)
            assert elapsed_active(periods, t) == pytest.approx(expected)
            # slope 1: a small forward step inside the period grows elapsed
            if 0 < expected and t + 1e-3 < periods[-1].end:
                inside = elapsed_by_linear_scan(periods, t + 1e-3)
                if inside > 0:
                    assert elapsed_active(periods, t + 1e-3) == pytest.approx(expected + 1e-3)
        for p in random_period_layout(rng, 0):
            assert elapsed_active([p], p.end) == 0.0


class TestBottleneckAt:
    def test_unique_argmax(self):
        view = view_of([(0, 10)], [(1, 10)], [(7, 10)])
        # elapsed at t=8: [8, 7, 1]
        assert bottleneck_at(view, 8.0) == 0

    def test_tie_breaks_to_lowest_index(self):
        view = view_of([(2, 10)], [(2, 10)], [(5, 10)])
        assert bottleneck_at(view, 6.0) == 0

    def test_all_idle_uses_fallback(self):
        view = view_of([(0, 1)], [(0, 1)])
        assert bottleneck_at(view, 5.0, fallback=1) == 1

    def test_carry_forward_over_idle_gap(self):
        view = view_of([(0, 4)], [(1, 3)])
        ids = bottleneck_ids_over(view, np.array([2.0, 3.5, 4.5, 5.5]))
        # station 0 leads at 2.0 and 3.5; everyone idle afterwards
        assert ids.tolist() == [0, 0, 0, 0]

    def test_argmax_invariant_under_rescaling(self):
        rng = np.random.default_rng(9)
        for _ in range(100):
            layouts = [random_period_layout(rng, s) for s in range(3)]
            scale = float(rng.uniform(0.1, 10))
            scaled = [[ActivePeriod(p.station_id, p.start * scale, p.end * scale)
                       for p in ps] for ps in layouts]
            t = float(rng.uniform(0, 40))
            if not ActivePeriodView(layouts).elapsed_all(t).any():
                continue
            assert (bottleneck_at(ActivePeriodView(layouts), t)
                    == bottleneck_at(ActivePeriodView(scaled), t * scale))


class TestClassifyShifting:
    def test_overlap_marks_shifting(self):
        view = view_of([(0, 10)], [(6, 15)])
        times = np.arange(0.0, 15.0)
        ids = bottleneck_ids_over(view, times)
        series = classify_shifting(view, times, ids)
        for t, kind in zip(series.times, series.kinds):
            expected = BottleneckKind.SHIFTING if 6 <= t < 10 else BottleneckKind.SOLE
            assert kind is expected, t

    def test_disjoint_periods_all_sole(self):
        view = view_of([(0, 5)], [(7, 12)])
        times = np.arange(0.0, 12.0)
        ids = bottleneck_ids_over(view, times)
        series = classify_shifting(view, times, ids)
        assert all(k is BottleneckKind.SOLE for k in series.kinds)

    def test_matches_overlap_scan_oracle(self):
        rng = np.random.default_rng(77)
        for _ in range(1000):
            layouts = [random_period_layout(rng, s) for s in range(2)]
            view = ActivePeriodView(layouts)
            times = np.arange(0.0, 40.0)
            ids = bottleneck_ids_over(view, times)
            series = classify_shifting(view, times, ids)
            expected = shifting_flags_by_overlap_scan(layouts, times, ids)
            got = [k is BottleneckKind.SHIFTING for k in series.kinds]
            assert got == expected

    def test_every_instant_has_one_bottleneck(self):
        rng = np.random.default_rng(13)
        layouts = [random_period_layout(rng, s) for s in range(4)]
        times = np.arange(0.0, 40.0)
        ids = bottleneck_ids_over(ActivePeriodView(layouts), times)
        assert ids.shape == times.shape
        assert np.all((ids >= 0) & (ids < 4))
