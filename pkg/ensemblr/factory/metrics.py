"""Per-day, per-shift outcome metrics and their CSV export."""

import csv
import logging
from typing import Iterable, List, NamedTuple, Sequence

from ensemblr.ensembles.component import Population
from ensemblr.factory.clock import DAYS_PER_WEEK
from ensemblr.factory.components import shifts
from ensemblr.utils.errors import convert_os_error

logger = logging.getLogger(__name__)

METRICS_HEADER = (
    "week",
    "day",
    "day_of_week",
    "shift_id",
    "policy",
    "standbys_called",
    "canceled",
    "lateness",
)


class MetricsRecord(NamedTuple):
    week: int
    day: int
    day_of_week: int
    shift_id: str
    policy: str
    standbys_called: int
    canceled: int
    lateness: int


def shift_lateness(population: Population, shift) -> int:
    """Sum of squared minutes by which the shift's workers reached the workplace late."""
    total = 0
    for worker in population.resolve_ids(shift.workers):
        arrived = worker.workplace_arrival
        if arrived is not None and arrived > shift.start_time:
            total += (arrived - shift.start_time) ** 2
    return total


def compute_metrics(population: Population, week: int, day: int, policy: str) -> List[MetricsRecord]:
    """One record per shift of a completed day."""
    return [
        MetricsRecord(
            week,
            day,
            day % DAYS_PER_WEEK,
            shift.id,
            policy,
            len(shift.called_standbys),
            len(shift.cancelled),
            shift_lateness(population, shift),
        )
        for shift in shifts(population)
    ]


def write_metrics_csv(records: Iterable[MetricsRecord], path: str) -> None:
    try:
        with open(path, "w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(METRICS_HEADER)
            writer.writerows(records)
    except OSError as e:
        raise convert_os_error(e, path) from e
    logger.info(f"Wrote metrics to {path}")


def read_metrics_csv(path: str) -> List[MetricsRecord]:
    try:
        with open(path, newline="") as f:
            rows = list(csv.DictReader(f))
    except OSError as e:
        raise convert_os_error(e, path) from e
    return [
        MetricsRecord(
            int(row["week"]),
            int(row["day"]),
            int(row["day_of_week"]),
            row["shift_id"],
            row["policy"],
            int(row["standbys_called"]),
            int(row["canceled"]),
            int(row["lateness"]),
        )
        for row in rows
    ]


def weekly_means(records: Sequence[MetricsRecord]) -> List[dict]:
    """Mean standbys called, cancellations and lateness per shift and day, for each week."""
    weeks = {}
    for record in records:
        weeks.setdefault(record.week, []).append(record)
    summary = []
    for week in sorted(weeks):
        rows = weeks[week]
        summary.append(
            {
                "week": week,
                "policy": rows[0].policy,
                "standbys_called": sum(r.standbys_called for r in rows) / len(rows),
                "canceled": sum(r.canceled for r in rows) / len(rows),
                "lateness": sum(r.lateness for r in rows) / len(rows),
            }
        )
    return summary
