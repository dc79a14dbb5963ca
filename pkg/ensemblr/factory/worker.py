"""Worker behavior.

Workers are beyond control: ensembles only grant permissions and send
notifications, and this state machine decides what a worker does with them.
Regular workers go home -> traveling -> at factory -> has headgear -> at
workplace; standbys wait idle until called in. Canceled is final for the day.
"""

import logging
from enum import Enum
from typing import NamedTuple, Optional

from ensemblr.ensembles.actions import Notification, PermissionSet
from ensemblr.ensembles.component import ComponentInstance, Population
from ensemblr.factory.components import (
    FACTORY_ID,
    OP_ENTER,
    OP_TAKE,
    POSITION_FACTORY,
    POSITION_GATE,
    POSITION_HOME,
    shift_of,
)
from ensemblr.types.models import ScenarioConfig

logger = logging.getLogger(__name__)

TAG_CANCELED = "canceled"
TAG_CALLED_IN = "calledIn"


class WorkerPhase(Enum):
    AT_HOME = "atHome"
    TRAVELING = "traveling"
    AT_FACTORY = "atFactory"
    HAS_HEADGEAR = "hasHeadgear"
    AT_WORKPLACE = "atWorkplace"
    CANCELED = "canceled"
    STANDBY_IDLE = "standbyIdle"
    STANDBY_TRAVELING = "standbyTraveling"


INSIDE = frozenset((WorkerPhase.AT_FACTORY, WorkerPhase.HAS_HEADGEAR, WorkerPhase.AT_WORKPLACE))


class WorkerState:
    """Hidden part of a worker: phase and when the next leg ends."""

    __slots__ = ("phase", "next_move")

    def __init__(self, phase: WorkerPhase, next_move: Optional[int] = None) -> None:
        self.phase = phase
        self.next_move = next_move

    def __repr__(self) -> str:
        return f"WorkerState({self.phase.value}, next_move={self.next_move})"

    @classmethod
    def initial(cls, worker: ComponentInstance) -> "WorkerState":
        return cls(WorkerPhase.STANDBY_IDLE if worker.standby else WorkerPhase.AT_HOME)


class TraceEvent(NamedTuple):
    now: int
    worker: str
    phase: WorkerPhase


def apply_notification(
    worker: ComponentInstance,
    state: WorkerState,
    notification: Notification,
    now: int,
    scenario: ScenarioConfig,
    population: Population,
) -> Optional[TraceEvent]:
    """React to a notification delivered this tick.

    Returns:
        The resulting transition, or None if the notification changed nothing
    """
    if state.phase is WorkerPhase.CANCELED:
        return None
    if notification.tag == TAG_CANCELED:
        if state.phase in INSIDE:
            logger.warning(f"{now}: {worker.id} canceled while inside the factory, ignored")
            return None
        shift = population[worker.shift]
        shift.set("cancelled", shift.cancelled | {worker.id})
        state.phase = WorkerPhase.CANCELED
        state.next_move = None
        worker.update(canceled=True, position=POSITION_HOME)
        return TraceEvent(now, worker.id, state.phase)
    if notification.tag == TAG_CALLED_IN:
        if state.phase is not WorkerPhase.STANDBY_IDLE:
            return None
        shift = notification.instance.bindings.shift
        shift.set("called_standbys", shift.called_standbys | {worker.id})
        state.phase = WorkerPhase.STANDBY_TRAVELING
        worker.update(called_by=shift.id, arrival_time=now + scenario.standby_travel_time)
        return TraceEvent(now, worker.id, state.phase)
    logger.warning(f"{now}: {worker.id} ignores unknown notification '{notification.tag}'")
    return None


def step_worker(
    worker: ComponentInstance,
    state: WorkerState,
    population: Population,
    permissions: PermissionSet,
    now: int,
    scenario: ScenarioConfig,
) -> Optional[TraceEvent]:
    """Advance one worker by one tick using this tick's permissions.

    Returns:
        The transition taken, if any
    """
    phase = state.phase
    if phase is WorkerPhase.AT_HOME:
        if worker.arrival_time is None:
            return None
        state.phase = WorkerPhase.TRAVELING
        return TraceEvent(now, worker.id, state.phase)

    if phase in (WorkerPhase.TRAVELING, WorkerPhase.STANDBY_TRAVELING):
        if now < worker.arrival_time:
            return None
        factory = population[FACTORY_ID]
        if not permissions.allows(worker.id, factory.entry_door, OP_ENTER):
            if worker.position != POSITION_GATE:
                worker.set("position", POSITION_GATE)
            return None
        state.phase = WorkerPhase.AT_FACTORY
        state.next_move = now + scenario.walk_gate_to_dispenser
        worker.update(is_at_factory=True, position=POSITION_FACTORY)
        return TraceEvent(now, worker.id, state.phase)

    if phase is WorkerPhase.AT_FACTORY:
        shift = population[shift_of(worker)]
        if now < state.next_move or not permissions.allows(worker.id, shift.dispenser, OP_TAKE):
            return None
        state.phase = WorkerPhase.HAS_HEADGEAR
        state.next_move = now + scenario.walk_dispenser_to_workplace
        worker.update(has_headgear=True, position=shift.dispenser)
        return TraceEvent(now, worker.id, state.phase)

    if phase is WorkerPhase.HAS_HEADGEAR:
        shift = population[shift_of(worker)]
        if now < state.next_move or not worker.has_headgear:
            return None
        if not permissions.allows(worker.id, shift.work_place, OP_ENTER):
            return None
        state.phase = WorkerPhase.AT_WORKPLACE
        state.next_move = None
        worker.update(is_at_workplace=True, workplace_arrival=now, position=shift.work_place)
        return TraceEvent(now, worker.id, state.phase)

    # at the workplace, canceled or idle standbys stay where they are
    return None
