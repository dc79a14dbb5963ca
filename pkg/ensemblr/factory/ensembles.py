"""Ensembles of the smart factory.

Both policies share the access ensembles. They differ in CancelLateWorkers:
the rigid one cancels every assigned worker still absent a fixed number of
minutes before the shift starts, the learned one cancels absent workers the
``will_arrive`` estimate does not expect by the shift start.
"""

import logging
from typing import List, Optional, Tuple

from ensemblr.ensembles import (
    ActionSpec,
    Bindings,
    Cardinality,
    ComponentInstance,
    DynamicRoleSpec,
    EnsembleType,
    StaticRoleSpec,
)
from ensemblr.estimates import (
    Attachment,
    EstimateContext,
    Feature,
    OutputSpec,
    ValueEstimate,
)
from ensemblr.factory.clock import DAYS_PER_WEEK, day_of_week
from ensemblr.factory.components import FACTORY, OP_ENTER, OP_TAKE, SHIFT, WORKER
from ensemblr.factory.worker import TAG_CALLED_IN, TAG_CANCELED
from ensemblr.heuristics import ExclusiveSelector
from ensemblr.types.models import ScenarioConfig
from ensemblr.types.settings import Settings
from ensemblr.utils.errors import EstimationError

logger = logging.getLogger(__name__)

WILL_ARRIVE = "will_arrive"
FALLBACK_UNTRAINED = "untrained"

#: Minutes before shift start from which a worker's commute is observed
OBSERVATION_LEAD = 40

ACCESS_TO_FACTORY = "AccessToFactory"
ACCESS_TO_DISPENSER = "AccessToDispenser"
ACCESS_TO_WORKPLACE = "AccessToWorkplace"
CANCEL_LATE_WORKERS = "CancelLateWorkers"
REPLACE_LATE_WITH_STANDBYS = "ReplaceLateWithStandbys"


def _static_roles() -> List[StaticRoleSpec]:
    return [StaticRoleSpec("shift", SHIFT.name), StaticRoleSpec("factory", FACTORY.name)]


def _around_shift(margin: int):
    def situation(b: Bindings, now: int) -> bool:
        return b.shift.start_time - margin <= now <= b.shift.end_time + margin

    return situation


def _shift_workers(b: Bindings):
    return b.shift.workers


def _assigned(b: Bindings):
    return b.shift.assigned


def _working(w: ComponentInstance, b: Bindings, now: int) -> bool:
    return w.id in b.shift.workers


def build_access_ensembles() -> List[EnsembleType]:
    """Factory gate, headgear dispenser and workplace access of a shift's workers."""
    window = _around_shift(30)
    return [
        EnsembleType(
            ACCESS_TO_FACTORY,
            static_roles=_static_roles(),
            situation=window,
            dynamic_roles=[
                DynamicRoleSpec("workers", WORKER.name, condition=_working, candidates=_shift_workers),
            ],
            actions=[ActionSpec.allow("workers", OP_ENTER, lambda b: b.factory.entry_door)],
        ),
        EnsembleType(
            ACCESS_TO_DISPENSER,
            static_roles=_static_roles(),
            situation=window,
            dynamic_roles=[
                DynamicRoleSpec(
                    "workers",
                    WORKER.name,
                    condition=lambda w, b, now: _working(w, b, now) and w.is_at_factory,
                    candidates=_shift_workers,
                ),
            ],
            actions=[ActionSpec.allow("workers", OP_TAKE, lambda b: b.shift.dispenser)],
        ),
        EnsembleType(
            ACCESS_TO_WORKPLACE,
            static_roles=_static_roles(),
            situation=window,
            dynamic_roles=[
                DynamicRoleSpec(
                    "workers",
                    WORKER.name,
                    condition=lambda w, b, now: _working(w, b, now) and w.has_headgear,
                    candidates=_shift_workers,
                ),
            ],
            actions=[ActionSpec.allow("workers", OP_ENTER, lambda b: b.shift.work_place)],
        ),
    ]


def _replace_with_standbys(scenario: ScenarioConfig, seed: int) -> EnsembleType:
    def eligible(s: ComponentInstance, b: Bindings, now: int) -> bool:
        if not s.standby:
            return False
        if not scenario.global_standbys and s.id not in b.shift.stand_bys:
            return False
        return s.called_by is None or s.called_by == b.shift.id

    def cost(s: ComponentInstance, b: Bindings) -> float:
        # keep whoever this shift already called in
        return 0.0 if s.id in b.shift.called_standbys else 1.0

    return EnsembleType(
        REPLACE_LATE_WITH_STANDBYS,
        dynamic_roles=[
            DynamicRoleSpec(
                "standbys",
                WORKER.name,
                cardinality=Cardinality.size_of("late_workers"),
                condition=eligible,
                selector=ExclusiveSelector(
                    cost,
                    strategy=scenario.selection_strategy,
                    restarts=scenario.selection_restarts,
                    seed=seed,
                ),
                candidates=None if scenario.global_standbys else (lambda b: b.shift.stand_bys),
            ),
        ],
        actions=[ActionSpec.notify("standbys", TAG_CALLED_IN)],
    )


def _cancel_late_workers(
    scenario: ScenarioConfig,
    situation,
    condition,
    estimates=(),
    seed: int = 0,
) -> EnsembleType:
    return EnsembleType(
        CANCEL_LATE_WORKERS,
        static_roles=_static_roles(),
        situation=situation,
        dynamic_roles=[
            DynamicRoleSpec(
                "late_workers",
                WORKER.name,
                condition=condition,
                candidates=_assigned,
                estimates=estimates,
            ),
        ],
        actions=[ActionSpec.notify("late_workers", TAG_CANCELED)],
        inner_types=[_replace_with_standbys(scenario, seed)],
    )


def build_rigid_ensembles(scenario: ScenarioConfig, seed: int = 0) -> List[EnsembleType]:
    """Access ensembles plus the fixed-cutoff CancelLateWorkers."""
    cutoff = scenario.rigid_cutoff

    def situation(b: Bindings, now: int) -> bool:
        return b.shift.start_time - cutoff <= now <= b.shift.end_time

    def late(w: ComponentInstance, b: Bindings, now: int) -> bool:
        return w.id in b.shift.assigned and not w.is_at_factory

    return build_access_ensembles() + [_cancel_late_workers(scenario, situation, late, seed=seed)]


def will_arrive_guard(context: EstimateContext, now: int) -> bool:
    worker, shift = context.component, context.bindings.shift
    return (
        worker.shift == shift.id
        and not worker.canceled
        and shift.start_time - OBSERVATION_LEAD <= now <= shift.start_time
    )


def will_arrive_estimate() -> ValueEstimate:
    """Whether an assigned worker will be at the factory ``t`` minutes from now.

    Attached to (worker, CancelLateWorkers instance) pairs; inputs are the
    day of the week and whether the worker is already inside.
    """
    return ValueEstimate(
        WILL_ARRIVE,
        Attachment.PAIR,
        inputs=[
            Feature.one_hot("day_of_week", lambda ctx, now: day_of_week(now), DAYS_PER_WEEK),
            Feature.flag("is_at_factory", lambda ctx, now: ctx.component.is_at_factory),
        ],
        output=OutputSpec.binary(lambda ctx, now: ctx.component.is_at_factory, name="is_at_factory"),
        horizon=(1, 30),
        guard=will_arrive_guard,
    )


def build_ml_ensembles(
    scenario: ScenarioConfig,
    estimate: Optional[ValueEstimate] = None,
    seed: int = 0,
) -> Tuple[List[EnsembleType], ValueEstimate]:
    """Access ensembles plus CancelLateWorkers driven by ``will_arrive``.

    Until the estimate has a trained model the rigid cutoff applies, and
    every such decision is reported as a fallback.

    Returns:
        The ensemble types and the estimate they query
    """
    estimate = estimate or will_arrive_estimate()
    cutoff = scenario.rigid_cutoff
    threshold = Settings.decision_threshold

    def late(w: ComponentInstance, b: Bindings, now: int) -> bool:
        if w.id not in b.shift.assigned or w.is_at_factory:
            return False
        if w.canceled:
            return True
        start = b.shift.start_time
        if now >= start:
            return True
        try:
            p = b.predict(estimate.name, start, candidate=w)
        except EstimationError:
            b.record_fallback(estimate.name, FALLBACK_UNTRAINED)
            return now >= start - cutoff
        return p < threshold

    types = build_access_ensembles() + [
        _cancel_late_workers(scenario, _around_shift(30), late, estimates=(estimate,), seed=seed)
    ]
    return types, estimate
