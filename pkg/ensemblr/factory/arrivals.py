"""Commute model: when does each worker reach the factory gate.

Workers ride one of two buses: the regular one, or the late one that a
fixed share of each shift takes. Both bus times depend on whether the day
is a business day. On top of the bus every worker gets an exponential delay
rounded to whole minutes.
"""

import logging
import math
from typing import Dict, NamedTuple, Optional, Tuple

import numpy as np

from ensemblr.factory.clock import DAYS_PER_WEEK, day_start, is_weekend_day
from ensemblr.factory.components import plan_shifts
from ensemblr.types.models import ScenarioConfig

logger = logging.getLogger(__name__)


class Arrival(NamedTuple):
    worker: str
    shift: str
    late_bus: bool
    delay: int
    time: int


def bus_offsets(scenario: ScenarioConfig, dow: int) -> Tuple[int, int]:
    """(regular, late) bus offsets relative to shift start for a day of the week."""
    if is_weekend_day(dow):
        return scenario.bus_offset_weekend, scenario.late_bus_weekend
    return scenario.bus_offset_business, scenario.late_bus_business


def late_count(scenario: ScenarioConfig) -> int:
    """Workers per shift on the late bus, ``floor(lateFraction * n)``."""
    return int(math.floor(scenario.late_fraction * scenario.workers_per_shift + 1e-9))


def day_rng(seed: int, day: int) -> np.random.Generator:
    return np.random.default_rng([seed, day])


def schedule_arrivals(
    scenario: ScenarioConfig,
    day: int,
    rng: Optional[np.random.Generator] = None,
    seed: int = 0,
) -> Dict[str, Arrival]:
    """Gate arrival of every regular worker on one day.

    Args:
        scenario: Scenario parameters
        day: Absolute day index
        rng: Generator to draw from, ``default_rng([seed, day])`` by default
        seed: Experiment seed, used when no generator is given

    Returns:
        Arrival per worker id
    """
    rng = rng if rng is not None else day_rng(seed, day)
    regular, late = bus_offsets(scenario, day % DAYS_PER_WEEK)
    start = day_start(day) + scenario.shift_start
    n_late = late_count(scenario)

    arrivals: Dict[str, Arrival] = {}
    for plan in plan_shifts(scenario):
        n = len(plan.workers)
        on_late_bus = np.zeros(n, dtype=bool)
        if n_late:
            on_late_bus[rng.choice(n, size=n_late, replace=False)] = True
        if scenario.delay_mean > 0:
            delays = np.rint(rng.exponential(scenario.delay_mean, size=n)).astype(int)
        else:
            delays = np.zeros(n, dtype=int)
        for index, wid in enumerate(plan.workers):
            offset = late if on_late_bus[index] else regular
            delay = int(delays[index])
            arrivals[wid] = Arrival(
                wid,
                plan.shift,
                bool(on_late_bus[index]),
                delay,
                start + offset + delay + scenario.walk_bus_stop_to_gate,
            )
    logger.debug(f"day {day}: scheduled {len(arrivals)} arrivals, {n_late} late per shift")
    return arrivals
