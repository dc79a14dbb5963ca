"""Decision boundary of the learned cancellation rule.

The ``will_arrive`` model is queried for a worker who is not yet at the
factory, for every day of the week and every minute before the shift start
within the estimate horizon.
"""

import csv
import logging
from typing import Dict, NamedTuple, Optional, Tuple

import numpy as np

from ensemblr.estimates import ValueEstimate
from ensemblr.factory.clock import DAYS_PER_WEEK, is_weekend_day
from ensemblr.types.settings import Settings
from ensemblr.utils.errors import EstimationError, convert_os_error

logger = logging.getLogger(__name__)

BUSINESS = "business"
WEEKEND = "weekend"


class BoundaryDump(NamedTuple):
    """Probabilities per (day of week, minutes before start) and derived cutoffs."""

    minutes: Tuple[int, ...]
    grid: np.ndarray
    day_cutoffs: Tuple[int, ...]
    kind_cutoffs: Dict[str, int]


def cutoff(probabilities, threshold: Optional[float] = None) -> int:
    """Latest minute before the start at which the decision flips.

    ``probabilities[m - 1]`` belongs to ``m`` minutes before the start. The
    cutoff is the largest ``m`` whose decision differs from that of ``m + 1``;
    without a flip it is the last minute when every probability reaches the
    threshold, else 0.
    """
    threshold = Settings.decision_threshold if threshold is None else threshold
    arrives = np.asarray(probabilities) >= threshold
    flips = np.flatnonzero(arrives[:-1] != arrives[1:])
    if len(flips):
        return int(flips[-1]) + 1
    return len(arrives) if arrives.all() else 0


def query_grid(estimate: ValueEstimate, model) -> Tuple[Tuple[int, ...], np.ndarray]:
    """Predicted arrival probability of an absent worker, shape (7, horizon)."""
    if model is None or not getattr(model, "fitted", False):
        raise EstimationError(f"'{estimate.name}' has no trained model to dump")
    minutes = tuple(range(estimate.min_t, estimate.max_t + 1))
    grid = np.zeros((DAYS_PER_WEEK, len(minutes)))
    for dow in range(DAYS_PER_WEEK):
        features = estimate.encode({"day_of_week": dow, "is_at_factory": False})
        rows = np.vstack([estimate.design(features, m) for m in minutes])
        grid[dow] = np.asarray(model.predict(rows), dtype=float).reshape(len(minutes))
    return minutes, grid


def dump_boundary(estimate: ValueEstimate, model) -> BoundaryDump:
    """Evaluate the model on the full grid and derive per-day and per-kind cutoffs.

    Raises:
        EstimationError: the model is not trained
    """
    minutes, grid = query_grid(estimate, model)
    day_cutoffs = tuple(cutoff(row) for row in grid)
    weekend = np.array([is_weekend_day(d) for d in range(DAYS_PER_WEEK)])
    kind_cutoffs = {
        BUSINESS: cutoff(grid[~weekend].mean(axis=0)),
        WEEKEND: cutoff(grid[weekend].mean(axis=0)),
    }
    logger.info(
        f"'{estimate.name}' cutoffs: business {kind_cutoffs[BUSINESS]}, "
        f"weekend {kind_cutoffs[WEEKEND]}, per day {list(day_cutoffs)}"
    )
    return BoundaryDump(minutes, grid, day_cutoffs, kind_cutoffs)


def write_boundary_csv(dump: BoundaryDump, path: str) -> None:
    try:
        with open(path, "w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(("day_of_week", "minutes_before_start", "probability"))
            for dow in range(DAYS_PER_WEEK):
                for index, m in enumerate(dump.minutes):
                    writer.writerow((dow, m, repr(float(dump.grid[dow, index]))))
    except OSError as e:
        raise convert_os_error(e, path) from e


def write_cutoffs_csv(dump: BoundaryDump, path: str) -> None:
    try:
        with open(path, "w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(("scope", "cutoff"))
            for kind in (BUSINESS, WEEKEND):
                writer.writerow((kind, dump.kind_cutoffs[kind]))
            for dow, value in enumerate(dump.day_cutoffs):
                writer.writerow((f"day-{dow}", value))
    except OSError as e:
        raise convert_os_error(e, path) from e
