"""Component types and the daily population of the smart factory.

Ids are zero-padded so that ascending id order is also the natural order of
workers and shifts.
"""

import logging
from typing import Dict, Iterable, List, NamedTuple, Optional

from ensemblr.ensembles.component import (
    ComponentInstance,
    ComponentRegistry,
    ComponentType,
    FieldSpec,
    Population,
    SemanticType as T,
)
from ensemblr.factory.clock import day_start
from ensemblr.types.models import ScenarioConfig

logger = logging.getLogger(__name__)

FACTORY_ID = "factory"
ENTRY_DOOR_ID = "door-entry"

POSITION_HOME = "home"
POSITION_GATE = "gate"
POSITION_FACTORY = "factory"

OP_ENTER = "enter"
OP_TAKE = "take"

FACTORY = ComponentType(
    "Factory",
    [
        FieldSpec("entry_door", T.IDENTIFIER),
        FieldSpec("dispensers", T.IDENTIFIERS),
        FieldSpec("work_places", T.IDENTIFIERS),
    ],
)

DOOR = ComponentType("Door", [FieldSpec("position", T.POSITION)])

DISPENSER = ComponentType("Dispenser", [FieldSpec("position", T.POSITION)])

WORK_PLACE = ComponentType("WorkPlace", [FieldSpec("position", T.POSITION)])

SHIFT = ComponentType(
    "Shift",
    [
        FieldSpec("work_place", T.IDENTIFIER),
        FieldSpec("dispenser", T.IDENTIFIER),
        FieldSpec("start_time", T.TIME),
        FieldSpec("end_time", T.TIME),
        FieldSpec("assigned", T.IDENTIFIERS),
        FieldSpec("workers", T.IDENTIFIERS),
        FieldSpec("stand_bys", T.IDENTIFIERS),
        FieldSpec("called_standbys", T.IDENTIFIERS),
        FieldSpec("cancelled", T.IDENTIFIERS),
    ],
)

WORKER = ComponentType(
    "Worker",
    [
        FieldSpec("shift", T.IDENTIFIER, optional=True),
        FieldSpec("standby", T.BOOLEAN),
        FieldSpec("is_at_factory", T.BOOLEAN),
        FieldSpec("has_headgear", T.BOOLEAN),
        FieldSpec("is_at_workplace", T.BOOLEAN),
        FieldSpec("canceled", T.BOOLEAN),
        FieldSpec("position", T.POSITION),
        FieldSpec("called_by", T.IDENTIFIER, optional=True),
        FieldSpec("arrival_time", T.TIME, optional=True),
        FieldSpec("workplace_arrival", T.TIME, optional=True),
    ],
    beyond_control=True,
)

COMPONENT_TYPES = (FACTORY, DOOR, DISPENSER, WORK_PLACE, SHIFT, WORKER)


def factory_registry() -> ComponentRegistry:
    return ComponentRegistry(COMPONENT_TYPES)


def shift_id(index: int) -> str:
    return f"shift-{index}"


def worker_id(shift: int, index: int) -> str:
    return f"worker-{shift}-{index:03d}"


def standby_id(shift: int, index: int) -> str:
    return f"standby-{shift}-{index:02d}"


class ShiftPlan(NamedTuple):
    """Ids of one shift's roster."""

    shift: str
    work_place: str
    dispenser: str
    workers: List[str]
    standbys: List[str]


def plan_shifts(scenario: ScenarioConfig) -> List[ShiftPlan]:
    plans = []
    for s in range(scenario.shifts_count):
        plans.append(
            ShiftPlan(
                shift_id(s),
                f"workplace-{s}",
                f"dispenser-{s}",
                [worker_id(s, w) for w in range(scenario.workers_per_shift)],
                [standby_id(s, k) for k in range(scenario.standbys_per_shift)],
            )
        )
    return plans


def new_worker(
    id: str,
    shift: Optional[str],
    standby: bool = False,
    arrival_time: Optional[int] = None,
) -> ComponentInstance:
    return ComponentInstance(
        id,
        WORKER,
        shift=shift,
        standby=standby,
        is_at_factory=False,
        has_headgear=False,
        is_at_workplace=False,
        canceled=False,
        position=POSITION_HOME,
        arrival_time=arrival_time,
    )


def build_population(
    scenario: ScenarioConfig,
    day: int,
    arrivals: Optional[Dict[str, int]] = None,
) -> Population:
    """Fresh factory population for one day: every worker at home.

    Args:
        scenario: Scenario parameters
        day: Absolute day index, fixing the shifts' start and end times
        arrivals: Gate arrival minute per regular worker
    """
    arrivals = arrivals or {}
    plans = plan_shifts(scenario)
    start = day_start(day) + scenario.shift_start
    end = start + scenario.shift_duration

    population = Population()
    population.add(
        ComponentInstance(
            FACTORY_ID,
            FACTORY,
            entry_door=ENTRY_DOOR_ID,
            dispensers=[p.dispenser for p in plans],
            work_places=[p.work_place for p in plans],
        )
    )
    population.add(ComponentInstance(ENTRY_DOOR_ID, DOOR, position=POSITION_GATE))
    for plan in plans:
        population.add(ComponentInstance(plan.dispenser, DISPENSER, position=plan.dispenser))
        population.add(ComponentInstance(plan.work_place, WORK_PLACE, position=plan.work_place))
        population.add(
            ComponentInstance(
                plan.shift,
                SHIFT,
                work_place=plan.work_place,
                dispenser=plan.dispenser,
                start_time=start,
                end_time=end,
                assigned=plan.workers,
                workers=plan.workers,
                stand_bys=plan.standbys,
                called_standbys=(),
                cancelled=(),
            )
        )
        for wid in plan.workers:
            population.add(new_worker(wid, plan.shift, arrival_time=arrivals.get(wid)))
        for sid in plan.standbys:
            population.add(new_worker(sid, None, standby=True))
    return population


def shifts(population: Population) -> Iterable[ComponentInstance]:
    return population.of_type(SHIFT.name)


def workers(population: Population) -> Iterable[ComponentInstance]:
    return population.of_type(WORKER.name)


def shift_of(worker: ComponentInstance) -> Optional[str]:
    """The shift a worker works in today: its own, or the one that called it in."""
    return worker.shift if worker.shift is not None else worker.called_by


def refresh_shift_workers(population: Population) -> None:
    """Recompute ``workers = assigned - cancelled + called_standbys`` for every shift."""
    for shift in shifts(population):
        shift.set("workers", (shift.assigned - shift.cancelled) | shift.called_standbys)
