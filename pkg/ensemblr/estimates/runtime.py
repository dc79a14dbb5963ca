"""Estimates of a simulation: contexts, histories, datasets and models."""

import logging
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

from ensemblr.ensembles.bindings import Bindings, ResolutionScope
from ensemblr.ensembles.component import ComponentInstance, Population
from ensemblr.ensembles.ensemble import EnsembleInstance, EnsembleType
from ensemblr.ensembles.resolver import role_candidates, static_assignments, static_bindings
from ensemblr.ensembles.roles import DynamicRoleSpec
from ensemblr.estimates.collector import collect_step
from ensemblr.estimates.dataset import TrainingDataset
from ensemblr.estimates.estimate import Attachment, EstimateContext, ValueEstimate
from ensemblr.estimates.estimator import Estimator
from ensemblr.estimates.history import InputHistory
from ensemblr.estimates.inference import predict_at
from ensemblr.utils.errors import ContractError, EstimationError, RegistrationError

logger = logging.getLogger(__name__)


class EstimateOwner(NamedTuple):
    estimate: ValueEstimate
    ensemble_type: EnsembleType
    role: DynamicRoleSpec


def context_for(
    estimate: ValueEstimate,
    bindings: Optional[Bindings],
    component: Optional[ComponentInstance] = None,
) -> EstimateContext:
    """Attachment context of an estimate for a component and/or bindings."""
    if estimate.attachment is Attachment.COMPONENT:
        if component is None:
            raise ContractError(f"'{estimate.name}' is attached to components")
        return EstimateContext((component.id,), component, bindings)
    if bindings is None:
        raise ContractError(f"'{estimate.name}' needs ensemble bindings")
    if estimate.attachment is Attachment.ENSEMBLE:
        return EstimateContext(bindings.key, None, bindings)
    if component is None:
        raise ContractError(f"'{estimate.name}' is attached to component-ensemble pairs")
    return EstimateContext((component.id, bindings.key), component, bindings)


class EstimateRuntime:
    """Collects data for every estimate declared on the given ensemble types
    and answers predictions with their current models.

    Collection does not depend on which ensemble types are being resolved:
    contexts come from the static-role assignments of the owning type.
    """

    def __init__(
        self,
        types: Sequence[EnsembleType],
        sensor=None,
        run_id: Optional[str] = None,
    ) -> None:
        self.sensor = sensor
        self.run_id = run_id
        self._owners: Dict[str, EstimateOwner] = {}
        for top in types:
            for ensemble_type in top.walk():
                for role in ensemble_type.dynamic_roles:
                    for estimate in role.estimates:
                        if estimate.name in self._owners:
                            raise RegistrationError(f"Estimate '{estimate.name}' is declared twice")
                        self._owners[estimate.name] = EstimateOwner(estimate, ensemble_type, role)
        self._histories = {name: InputHistory(o.estimate.max_t) for name, o in self._owners.items()}
        self._datasets = {name: self._new_dataset(name) for name in self._owners}
        self._models: Dict[str, Estimator] = {}

    def _new_dataset(self, name: str) -> TrainingDataset:
        return TrainingDataset(name, self._owners[name].estimate.input_width, self.run_id)

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(self._owners)

    def estimate(self, name: str) -> ValueEstimate:
        try:
            return self._owners[name].estimate
        except KeyError:
            raise EstimationError(f"Unknown estimate '{name}'") from None

    def owner(self, name: str) -> EstimateOwner:
        self.estimate(name)
        return self._owners[name]

    def dataset(self, name: str) -> TrainingDataset:
        return self._datasets[name]

    def take_dataset(self, name: str) -> TrainingDataset:
        """Hand over the data collected so far and start a new dataset."""
        dataset = self._datasets[name]
        self._datasets[name] = self._new_dataset(name)
        return dataset

    def model(self, name: str) -> Optional[Estimator]:
        return self._models.get(name)

    def set_model(self, name: str, model: Estimator) -> None:
        self.estimate(name)
        self._models[name] = model

    def reset_histories(self) -> None:
        for history in self._histories.values():
            history.clear()

    def contexts(
        self,
        name: str,
        population: Population,
        now: int,
        instances: Sequence[EnsembleInstance] = (),
    ) -> List[EstimateContext]:
        """All attachment contexts of an estimate, before the guard.

        Inner owning types are enumerated within the given live instances of
        their parent type.
        """
        estimate, ensemble_type, role = self.owner(name)
        scope = ResolutionScope(now)
        if estimate.attachment is Attachment.COMPONENT:
            return [
                EstimateContext((c.id,), c, None)
                for c in population.of_type(role.component_type)
            ]
        if ensemble_type.is_inner:
            parents = [i for i in instances if i.type is ensemble_type.parent]
        else:
            parents = [None]
        contexts = []
        for parent in parents:
            for choice in static_assignments(ensemble_type, population):
                bindings = static_bindings(ensemble_type, choice, parent, scope)
                if estimate.attachment is Attachment.ENSEMBLE:
                    contexts.append(EstimateContext(bindings.key, None, bindings))
                    continue
                for candidate in role_candidates(role, population, bindings):
                    contexts.append(EstimateContext((candidate.id, bindings.key), candidate, bindings))
        return contexts

    def collect(
        self,
        population: Population,
        now: int,
        instances: Sequence[EnsembleInstance] = (),
    ) -> Dict[str, int]:
        """One collection step for every estimate."""
        added = {}
        for name, owner in self._owners.items():
            added[name] = collect_step(
                owner.estimate,
                self.contexts(name, population, now, instances),
                now,
                self._histories[name],
                self._datasets[name],
                self.sensor,
            )
        return added

    def predict_for(
        self,
        name: str,
        bindings: Optional[Bindings],
        component: Optional[ComponentInstance],
        target_time: int,
        now: int,
    ) -> Any:
        estimate = self.estimate(name)
        return predict_at(
            estimate,
            self._models.get(name),
            context_for(estimate, bindings, component),
            target_time,
            now,
            self.sensor,
        )
