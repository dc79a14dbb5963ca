import logging
from typing import NamedTuple, Optional, Sequence, Tuple

from ensemblr.ensembles.actions import ActionExecutor, Notification, PermissionSet
from ensemblr.ensembles.component import ComponentRegistry, Population
from ensemblr.ensembles.ensemble import EnsembleInstance, EnsembleType
from ensemblr.ensembles.resolver import Resolver

logger = logging.getLogger(__name__)


class StepResult(NamedTuple):
    now: int
    instances: Tuple[EnsembleInstance, ...]
    permissions: PermissionSet
    notifications: Tuple[Notification, ...]


class EnsembleRuntime:
    """Resolver plus action executor for one simulation."""

    def __init__(
        self,
        types: Sequence[EnsembleType],
        registry: ComponentRegistry,
        sensor=None,
        estimates=None,
    ) -> None:
        self.sensor = sensor
        self.resolver = Resolver(types, registry, sensor=sensor, estimates=estimates)
        self.executor = ActionExecutor(sensor=sensor)

    @property
    def types(self) -> Tuple[EnsembleType, ...]:
        return self.resolver.types

    def step(self, population: Population, now: int) -> StepResult:
        """Resolve ensembles and execute their actions for one tick."""
        state = self.sensor.on_resolve_start(now) if self.sensor is not None else None
        resolution = self.resolver.resolve(population, now)
        permissions, delivered = self.executor.execute(resolution.instances)
        if self.sensor is not None:
            self.sensor.on_resolve_complete(
                now, state, len(resolution.instances), len(permissions), len(delivered)
            )
        return StepResult(now, resolution.instances, permissions, tuple(delivered))

    def reset(self) -> None:
        self.resolver.reset()
        self.executor.reset()
