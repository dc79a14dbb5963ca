"""Smart-factory scenario: shifts, workers, access and late-worker cancellation."""

from ensemblr.factory.clock import Clock, day_of_week, is_weekend_day
from ensemblr.factory.components import (
    build_population,
    factory_registry,
    refresh_shift_workers,
)
from ensemblr.factory.arrivals import Arrival, schedule_arrivals
from ensemblr.factory.worker import (
    TAG_CALLED_IN,
    TAG_CANCELED,
    TraceEvent,
    WorkerPhase,
    WorkerState,
    apply_notification,
    step_worker,
)
from ensemblr.factory.ensembles import (
    WILL_ARRIVE,
    build_access_ensembles,
    build_ml_ensembles,
    build_rigid_ensembles,
    will_arrive_estimate,
)
from ensemblr.factory.metrics import (
    MetricsRecord,
    compute_metrics,
    read_metrics_csv,
    weekly_means,
    write_metrics_csv,
)
from ensemblr.factory.simulation import DayResult, FactorySimulation

__all__ = [
    "Clock",
    "day_of_week",
    "is_weekend_day",
    "build_population",
    "factory_registry",
    "refresh_shift_workers",
    "Arrival",
    "schedule_arrivals",
    "TAG_CALLED_IN",
    "TAG_CANCELED",
    "TraceEvent",
    "WorkerPhase",
    "WorkerState",
    "apply_notification",
    "step_worker",
    "WILL_ARRIVE",
    "build_access_ensembles",
    "build_ml_ensembles",
    "build_rigid_ensembles",
    "will_arrive_estimate",
    "MetricsRecord",
    "compute_metrics",
    "read_metrics_csv",
    "weekly_means",
    "write_metrics_csv",
    "DayResult",
    "FactorySimulation",
]
