"""Day-by-day simulation of the smart factory.

Every tick: resolve ensembles and execute their actions, deliver the
notifications, let every worker react to this tick's permissions, then
collect estimate data. A day runs from ``windowMargin`` minutes before the
shift start to ``windowMargin`` minutes after its end, on a fresh population.
"""

import logging
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from ensemblr.ensembles import EnsembleRuntime, EnsembleType, Population
from ensemblr.estimates import EstimateRuntime
from ensemblr.factory.arrivals import Arrival, schedule_arrivals
from ensemblr.factory.clock import Clock, day_start
from ensemblr.factory.components import (
    build_population,
    factory_registry,
    refresh_shift_workers,
    workers,
)
from ensemblr.factory.metrics import MetricsRecord, compute_metrics
from ensemblr.factory.worker import (
    TraceEvent,
    WorkerState,
    apply_notification,
    step_worker,
)
from ensemblr.types.models import POLICY_ML, POLICY_RIGID, ScenarioConfig
from ensemblr.utils.errors import ContractError

logger = logging.getLogger(__name__)


class DayResult(NamedTuple):
    day: int
    policy: str
    records: Tuple[MetricsRecord, ...]
    population: Population
    arrivals: Dict[str, Arrival]
    trace: Tuple[TraceEvent, ...]


class FactorySimulation:
    """Runs days of the factory under the rigid or the learned policy.

    Args:
        scenario: Scenario parameters
        rigid: Ensemble types of the rigid policy
        ml: Ensemble types of the learned policy
        estimates: Estimate runtime queried by ``ml`` and fed every tick
        sensor: Simulation sensor
        seed: Experiment seed; day d draws its commutes from ``(seed, d)``
    """

    def __init__(
        self,
        scenario: ScenarioConfig,
        rigid: Sequence[EnsembleType],
        ml: Optional[Sequence[EnsembleType]] = None,
        estimates: Optional[EstimateRuntime] = None,
        sensor=None,
        seed: int = 0,
    ) -> None:
        self.scenario = scenario
        self.estimates = estimates
        self.sensor = sensor
        self.seed = seed
        registry = factory_registry()
        self._runtimes = {POLICY_RIGID: EnsembleRuntime(rigid, registry, sensor, estimates)}
        if ml is not None:
            self._runtimes[POLICY_ML] = EnsembleRuntime(ml, registry, sensor, estimates)

    def window(self, day: int) -> Tuple[int, int]:
        """First and last tick simulated on a day."""
        start = day_start(day) + self.scenario.shift_start
        margin = self.scenario.window_margin
        return start - margin, start + self.scenario.shift_duration + margin

    def run_day(self, day: int, week: int = 1, policy: str = POLICY_RIGID) -> DayResult:
        try:
            runtime = self._runtimes[policy]
        except KeyError:
            raise ContractError(f"No ensembles configured for policy '{policy}'") from None
        runtime.reset()
        if self.estimates is not None:
            self.estimates.reset_histories()

        arrivals = schedule_arrivals(self.scenario, day, seed=self.seed)
        population = build_population(
            self.scenario, day, {wid: a.time for wid, a in arrivals.items()}
        )
        crew = workers(population)
        states = {w.id: WorkerState.initial(w) for w in crew}
        trace: List[TraceEvent] = []
        debug = logger.isEnabledFor(logging.DEBUG)

        first, last = self.window(day)
        clock = Clock(first)
        while clock.now <= last:
            now = clock.now
            step = runtime.step(population, now)
            for notification in step.notifications:
                worker = population[notification.component]
                event = apply_notification(
                    worker, states[worker.id], notification, now, self.scenario, population
                )
                if event is not None:
                    trace.append(event)
            refresh_shift_workers(population)
            for worker in crew:
                event = step_worker(worker, states[worker.id], population, step.permissions, now, self.scenario)
                if event is not None:
                    trace.append(event)
                    if debug:
                        logger.debug(f"{now};{event.worker};{event.phase.value}")
            if self.estimates is not None:
                self.estimates.collect(population, now, step.instances)
            clock.advance()

        records = compute_metrics(population, week, day, policy)
        logger.info(
            f"day {day} ({policy}): standbys {[r.standbys_called for r in records]}, "
            f"lateness {[r.lateness for r in records]}"
        )
        if self.sensor is not None:
            self.sensor.on_day_complete(week, day, policy, records)
        return DayResult(day, policy, tuple(records), population, arrivals, tuple(trace))
