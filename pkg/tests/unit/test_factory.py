"""Unit tests for the factory clock, commutes, population and worker behavior."""

from unittest.mock import Mock

import pytest

from ensemblr.ensembles import Notification, PermissionSet
from ensemblr.factory import (
    TAG_CALLED_IN,
    TAG_CANCELED,
    Clock,
    WorkerPhase,
    WorkerState,
    apply_notification,
    build_population,
    refresh_shift_workers,
    schedule_arrivals,
    step_worker,
)
from ensemblr.factory.arrivals import late_count
from ensemblr.factory.components import ENTRY_DOOR_ID, POSITION_GATE, shift_of
from ensemblr.harness.config import default_config

START = 360


def _scenario(**overrides):
    values = dict(
        shiftsCount=1, workersPerShift=3, standbysPerShift=2, delayMean=0.0, lateFraction=0.0
    )
    values.update(overrides)
    return default_config(**values).scenario


class TestClock:
    """Tests for Clock."""

    def test_day_zero_is_monday(self):
        clock = Clock(START)
        assert clock.day == 0
        assert clock.day_of_week == 0
        assert clock.minute_of_day == START
        assert not clock.is_weekend

    @pytest.mark.parametrize("day,weekend", [(4, False), (5, True), (6, True), (7, False)])
    def test_weekends(self, day, weekend):
        assert Clock.at_day(day, 10).is_weekend is weekend

    def test_advance(self):
        clock = Clock(1439)
        assert clock.advance() == 1440
        assert clock.day == 1


class TestArrivals:
    """Tests for the commute model."""

    def test_punctual_business_day(self):
        arrivals = schedule_arrivals(_scenario(), 0)
        assert {a.time for a in arrivals.values()} == {START - 24}
        assert not any(a.late_bus for a in arrivals.values())

    def test_late_bus_on_weekend(self):
        arrivals = schedule_arrivals(_scenario(lateFraction=1.0), 5)
        assert {a.time for a in arrivals.values()} == {5 * 1440 + START - 15}

    def test_regular_bus_on_weekend(self):
        arrivals = schedule_arrivals(_scenario(), 6)
        assert {a.time for a in arrivals.values()} == {6 * 1440 + START - 30}

    def test_walk_to_gate_is_added(self):
        arrivals = schedule_arrivals(_scenario(walkBusStopToGate=3), 0)
        assert {a.time for a in arrivals.values()} == {START - 21}

    @pytest.mark.parametrize("fraction,workers,expected", [(0.1, 100, 10), (0.3, 10, 3), (0.2, 4, 0)])
    def test_late_count(self, fraction, workers, expected):
        assert late_count(_scenario(lateFraction=fraction, workersPerShift=workers)) == expected

    def test_late_share_per_shift(self):
        scenario = _scenario(shiftsCount=3, workersPerShift=10, lateFraction=0.3)
        arrivals = schedule_arrivals(scenario, 1, seed=4)
        for shift in ("shift-0", "shift-1", "shift-2"):
            assert sum(a.late_bus for a in arrivals.values() if a.shift == shift) == 3

    def test_same_seed_same_arrivals(self):
        scenario = _scenario(workersPerShift=20, delayMean=5.0, lateFraction=0.1)
        assert schedule_arrivals(scenario, 3, seed=9) == schedule_arrivals(scenario, 3, seed=9)
        assert schedule_arrivals(scenario, 3, seed=9) != schedule_arrivals(scenario, 4, seed=9)

    def test_delays_are_whole_non_negative_minutes(self):
        scenario = _scenario(workersPerShift=50, delayMean=5.0)
        arrivals = schedule_arrivals(scenario, 0, seed=1)
        assert all(isinstance(a.delay, int) and a.delay >= 0 for a in arrivals.values())


class TestPopulation:
    """Tests for the daily population."""

    def test_layout(self):
        population = build_population(_scenario(), 2, {"worker-0-001": 100})
        shift = population["shift-0"]
        assert shift.start_time == 2 * 1440 + START
        assert shift.end_time == shift.start_time + 480
        assert shift.workers == {"worker-0-000", "worker-0-001", "worker-0-002"}
        assert shift.stand_bys == {"standby-0-00", "standby-0-01"}
        assert population["worker-0-001"].arrival_time == 100
        assert population["worker-0-000"].arrival_time is None
        assert population["standby-0-00"].standby
        assert population["factory"].entry_door == ENTRY_DOOR_ID

    def test_refresh_shift_workers(self):
        population = build_population(_scenario(), 0)
        shift = population["shift-0"]
        shift.set("cancelled", {"worker-0-000"})
        shift.set("called_standbys", {"standby-0-01"})
        refresh_shift_workers(population)
        assert shift.workers == {"worker-0-001", "worker-0-002", "standby-0-01"}

    def test_shift_of_standby_is_the_calling_shift(self):
        population = build_population(_scenario(), 0)
        standby = population["standby-0-00"]
        assert shift_of(standby) is None
        standby.set("called_by", "shift-0")
        assert shift_of(standby) == "shift-0"


class TestWorker:
    """Tests for the worker state machine."""

    def setup_method(self):
        self.scenario = _scenario()
        self.population = build_population(self.scenario, 0, {"worker-0-000": 336})
        self.worker = self.population["worker-0-000"]
        self.state = WorkerState.initial(self.worker)

    def _step(self, now, *grants):
        return step_worker(
            self.worker, self.state, self.population, PermissionSet(grants), now, self.scenario
        )

    def test_leaves_home_when_commute_is_known(self):
        event = self._step(300)
        assert event.phase is WorkerPhase.TRAVELING
        assert self._step(301) is None

    def test_without_commute_stays_home(self):
        worker = self.population["worker-0-001"]
        state = WorkerState.initial(worker)
        assert step_worker(worker, state, self.population, PermissionSet(), 400, self.scenario) is None
        assert state.phase is WorkerPhase.AT_HOME

    def test_waits_at_gate_without_permission(self):
        self._step(300)
        assert self._step(336) is None
        assert self.state.phase is WorkerPhase.TRAVELING
        assert self.worker.position == POSITION_GATE
        assert not self.worker.is_at_factory

    def test_full_route(self):
        wid = self.worker.id
        self._step(300)
        assert self._step(336, (wid, ENTRY_DOOR_ID, "enter")).phase is WorkerPhase.AT_FACTORY
        assert self.worker.is_at_factory
        # the dispenser is two minutes from the gate
        assert self._step(337, (wid, "dispenser-0", "take")) is None
        assert self._step(338, (wid, "dispenser-0", "take")).phase is WorkerPhase.HAS_HEADGEAR
        assert self._step(340, (wid, "workplace-0", "enter")) is None
        event = self._step(341, (wid, "workplace-0", "enter"))
        assert event.phase is WorkerPhase.AT_WORKPLACE
        assert self.worker.workplace_arrival == 341
        assert self.worker.is_at_workplace

    def test_no_workplace_without_headgear(self):
        self.state.phase = WorkerPhase.HAS_HEADGEAR
        self.state.next_move = 0
        assert self._step(400, (self.worker.id, "workplace-0", "enter")) is None
        assert self.state.phase is WorkerPhase.HAS_HEADGEAR


class TestNotifications:
    """Tests for apply_notification."""

    def setup_method(self):
        self.scenario = _scenario()
        self.population = build_population(self.scenario, 0, {"worker-0-000": 350})
        self.shift = self.population["shift-0"]
        instance = Mock()
        instance.bindings.shift = self.shift
        self.instance = instance

    def _notify(self, worker, state, tag, now):
        notification = Notification(worker.id, tag, self.instance)
        return apply_notification(worker, state, notification, now, self.scenario, self.population)

    def test_cancel_is_final(self):
        worker = self.population["worker-0-000"]
        state = WorkerState.initial(worker)
        event = self._notify(worker, state, TAG_CANCELED, 344)
        assert event.phase is WorkerPhase.CANCELED
        assert worker.canceled
        assert "worker-0-000" in self.shift.cancelled
        assert step_worker(worker, state, self.population, PermissionSet(), 350, self.scenario) is None
        assert self._notify(worker, state, TAG_CANCELED, 345) is None

    def test_cancel_inside_factory_is_ignored(self):
        worker = self.population["worker-0-001"]
        state = WorkerState(WorkerPhase.AT_FACTORY)
        assert self._notify(worker, state, TAG_CANCELED, 344) is None
        assert not worker.canceled

    def test_standby_arrives_thirty_minutes_after_call(self):
        standby = self.population["standby-0-00"]
        state = WorkerState.initial(standby)
        assert state.phase is WorkerPhase.STANDBY_IDLE
        event = self._notify(standby, state, TAG_CALLED_IN, 344)
        assert event.phase is WorkerPhase.STANDBY_TRAVELING
        assert standby.called_by == "shift-0"
        assert "standby-0-00" in self.shift.called_standbys

        grant = PermissionSet([(standby.id, ENTRY_DOOR_ID, "enter")])
        assert step_worker(standby, state, self.population, grant, 373, self.scenario) is None
        step_worker(standby, state, self.population, grant, 374, self.scenario)
        assert standby.is_at_factory

    def test_call_only_reaches_idle_standbys(self):
        worker = self.population["worker-0-001"]
        assert self._notify(worker, WorkerState.initial(worker), TAG_CALLED_IN, 344) is None

    def test_unknown_tag_is_ignored(self):
        worker = self.population["worker-0-001"]
        assert self._notify(worker, WorkerState.initial(worker), "wave", 344) is None
