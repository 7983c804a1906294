import numpy as np
import pytest

from bottleneck_lab import (
    ActivePeriod,
    LineConfig,
    StationSpec,
    StationState,
    StateTimeline,
    Variability,
    catalog,
    run_scenario,
)

BASE_SEED = 42

STATES = (StationState.ACTIVE, StationState.STARVED, StationState.BLOCKED)


def make_line(process_times, buffer_capacity=5, variability=Variability.NONE,
              settling_time=0.0, observation_length=10, sample_interval=1.0,
              seed=0, uplifts=()):
    stations = tuple(
        StationSpec(i, pt, 0.125 if i in uplifts else 0.0)
        for i, pt in enumerate(process_times))
    return LineConfig(stations=stations, buffer_capacity=buffer_capacity,
                      variability=variability, settling_time=settling_time,
                      observation_length=observation_length,
                      sample_interval=sample_interval, seed=seed)


def random_timeline(rng, station_id=0, max_intervals=12):
    """Random timeline with unit-aligned interval boundaries."""
    t = 0
    intervals = []
    for _ in range(int(rng.integers(1, max_intervals + 1))):
        dur = int(rng.integers(1, 6))
        state = STATES[int(rng.integers(0, 3))]
        intervals.append((state, float(t), float(t + dur)))
        t += dur
    return StateTimeline(station_id, tuple(intervals))


def random_period_layout(rng, station_id, n_max=5, horizon=40):
    """Random list of disjoint active periods with integer boundaries."""
    t = int(rng.integers(0, 4))
    periods = []
    for _ in range(int(rng.integers(1, n_max + 1))):
        dur = int(rng.integers(1, 9))
        if t + dur > horizon:
            break
        periods.append(ActivePeriod(station_id, float(t), float(t + dur)))
        t += dur + int(rng.integers(1, 4))
    return periods


@pytest.fixture(scope="session")
def reference_results():
    """All nine scenarios at the reference seed, computed once per session."""
    return {spec.name: run_scenario(spec, base_seed=BASE_SEED) for spec in catalog()}
