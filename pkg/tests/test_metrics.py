import numpy as np
import pytest

from bottleneck_lab import (
    ActivePeriod,
    ActivePeriodView,
    BottleneckKind,
    BottleneckSeries,
    FrequencyReport,
    SeverityReport,
    aggregate_runs,
    bottleneck_frequency,
    relative_bottleneck_frequency,
    relative_bottleneck_severity,
    severity_series,
    run_simulation,
)
from bottleneck_lab import Variability

from conftest import make_line


def series_of(ids):
    ids = np.asarray(ids)
    return BottleneckSeries(times=np.arange(len(ids), dtype=float),
                            station_ids=ids,
                            kinds=np.full(len(ids), BottleneckKind.SOLE, dtype=object))


def view_with_elapsed(bs, t):
    """A view whose per-station elapsed at time t equals the given vector."""
    return ActivePeriodView([
        [] if e == 0 else [ActivePeriod(s, t - e, t + 1.0)]
        for s, e in enumerate(bs)])


class TestFrequency:
    def test_simple_count(self):
        s = series_of([1, 0, 1, 1, 2, 1, 0, 0, 2, 2])
        assert bottleneck_frequency(s, 1) == 4

    def test_never_bottleneck_counts_zero(self):
        assert bottleneck_frequency(series_of([0, 0, 0]), 2) == 0

    def test_counts_sum_to_length(self):
        rng = np.random.default_rng(1)
        ids = rng.integers(0, 5, size=200)
        s = series_of(ids)
        assert sum(bottleneck_frequency(s, k) for k in range(5)) == len(ids)

    def test_static_bottleneck_gets_one(self):
        rep = relative_bottleneck_frequency(series_of([2] * 50), 4)
        assert rep.rbf.tolist() == [0.0, 0.0, 1.0, 0.0]

    def test_rbf_invariants(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            rep = relative_bottleneck_frequency(
                series_of(rng.integers(0, 7, size=int(rng.integers(1, 300)))), 7)
            assert abs(rep.rbf.sum() - 1.0) <= 1e-9
            assert np.all((rep.rbf >= 0) & (rep.rbf <= 1))
            assert rep.bf.sum() == rep.n

    def test_empty_series_rejected(self):
        with pytest.raises(ValueError):
            relative_bottleneck_frequency(series_of([]), 3)


class TestSeverity:
    def test_direct_ratio(self):
        # hand evaluation: bs [4, 8, 2] / 8
        view = view_with_elapsed([4.0, 8.0, 2.0], t=20.0)
        assert relative_bottleneck_severity(view, 20.0).tolist() == [0.5, 1.0, 0.25]

    def test_inactive_station_is_zero(self):
        view = view_with_elapsed([4.0, 0.0, 2.0], t=20.0)
        assert relative_bottleneck_severity(view, 20.0)[1] == 0.0

    def test_all_equal_all_one(self):
        view = view_with_elapsed([3.0, 3.0, 3.0], t=20.0)
        assert relative_bottleneck_severity(view, 20.0).tolist() == [1.0, 1.0, 1.0]

    def test_all_idle_reports_no_activity(self):
        view = view_with_elapsed([0.0, 0.0], t=20.0)
        assert relative_bottleneck_severity(view, 20.0) is None

    def test_scaling_invariance(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            bs = rng.uniform(0.1, 50, size=5)
            scale = float(rng.uniform(0.01, 100))
            a = relative_bottleneck_severity(view_with_elapsed(bs, 100.0), 100.0)
            b = relative_bottleneck_severity(
                view_with_elapsed(bs * scale, 1000.0 * scale), 1000.0 * scale)
            assert a == pytest.approx(b)


class TestSeveritySeries:
    @pytest.fixture(scope="class")
    @staticmethod
    def report():
        run = run_simulation(make_line([2.0] * 4, variability=Variability.MEDIUM,
                                       settling_time=100.0, observation_length=1500,
                                       seed=21))
        return severity_series(run)

    def test_bottleneck_station_exactly_one(self, report):
        picked = report.rbs[np.arange(len(report.times)), report.bottleneck_ids]
        assert np.all(picked == 1.0)

    def test_rbs_range(self, report):
        assert np.nanmax(report.rbs) == 1.0
        assert np.nanmin(report.rbs) >= 0.0

    def test_shapes(self, report):
        assert report.bs.shape == report.rbs.shape == (1500, 4)


class TestAggregation:
    def rep(self, rbf):
        rbf = np.asarray(rbf, dtype=float)
        n = 100
        return FrequencyReport(bf=(rbf * n).astype(int), rbf=rbf, n=n)

    def test_single_report(self):
        agg = aggregate_runs([self.rep([0.25, 0.75])])
        assert agg.rbf_mean.tolist() == [0.25, 0.75]
        assert agg.rbf_std.tolist() == [0.0, 0.0]

    def test_two_report_mean(self):
        agg = aggregate_runs([self.rep([0.6, 0.4]), self.rep([0.7, 0.3])])
        assert agg.rbf_mean[0] == pytest.approx(0.65)

    def test_mean_within_envelope(self):
        reps = [self.rep(r) for r in ([0.2, 0.8], [0.5, 0.5], [0.35, 0.65])]
        agg = aggregate_runs(reps)
        stacked = np.stack([r.rbf for r in reps])
        assert np.all(agg.rbf_mean >= stacked.min(axis=0))
        assert np.all(agg.rbf_mean <= stacked.max(axis=0))

    def test_permutation_invariant(self):
        reps = [self.rep(r) for r in ([0.2, 0.8], [0.5, 0.5], [0.35, 0.65])]
        a = aggregate_runs(reps)
        b = aggregate_runs(reps[::-1])
        assert a.rbf_mean == pytest.approx(b.rbf_mean)
        assert a.rbf_std == pytest.approx(b.rbf_std)

    def test_mismatched_station_sets_rejected(self):
        with pytest.raises(ValueError):
            aggregate_runs([self.rep([0.5, 0.5]), self.rep([0.3, 0.3, 0.4])])

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            aggregate_runs([])
