"""Flow-line simulation and shifting-bottleneck diagnosis toolkit."""

from .simulation import (
    LineConfig,
    SimulationRun,
    StationSpec,
    StationState,
    StateTimeline,
    Variability,
    run_simulation,
    sample_process_time,
    state_at,
)
from .active_period import (
    ActivePeriod,
    ActivePeriodView,
    BottleneckKind,
    BottleneckSeries,
    bottleneck_at,
    bottleneck_series,
    classify_shifting,
    elapsed_active,
    extract_active_periods,
)
from .metrics import (
    AggregateReport,
    FrequencyReport,
    SeverityReport,
    aggregate_runs,
    bottleneck_frequency,
    relative_bottleneck_frequency,
    relative_bottleneck_severity,
    severity_series,
)
from .scenarios import (
    ScenarioResult,
    ScenarioSpec,
    catalog,
    derive_run_seed,
    run_scenario,
    scenario_by_name,
)

__version__ = "0.1.0"

__all__ = [
    "ActivePeriod",
    "ActivePeriodView",
    "AggregateReport",
    "BottleneckKind",
    "BottleneckSeries",
    "FrequencyReport",
    "LineConfig",
    "ScenarioResult",
    "ScenarioSpec",
    "SeverityReport",
    "SimulationRun",
    "StationSpec",
    "StationState",
    "StateTimeline",
    "Variability",
    "aggregate_runs",
    "bottleneck_at",
    "bottleneck_frequency",
    "bottleneck_series",
    "catalog",
    "classify_shifting",
    "derive_run_seed",
    "elapsed_active",
    "extract_active_periods",
    "relative_bottleneck_frequency",
    "relative_bottleneck_severity",
    "run_scenario",
    "run_simulation",
    "sample_process_time",
    "scenario_by_name",
    "severity_series",
    "state_at",
]
