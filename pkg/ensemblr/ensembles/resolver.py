"""Ensemble resolution.

Every step the full set of live instances is recomputed: for each type and
each static-role assignment whose situation holds, dynamic roles are
populated in declaration order. Condition roles take every satisfying
candidate; selector roles are solved jointly for all instances of the type
(across parents for inner types), so a component is never selected twice.
An instance whose role cannot be filled is not instantiated this step.
"""

import itertools
import logging
from typing import (
    Dict,
    Iterator,
    List,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
)

from ensemblr.ensembles.actions import Notification, PermissionSet, collect_actions
from ensemblr.ensembles.bindings import Bindings, ResolutionScope
from ensemblr.ensembles.component import (
    ComponentInstance,
    ComponentRegistry,
    Population,
)
from ensemblr.ensembles.ensemble import (
    EnsembleInstance,
    EnsembleType,
    InstanceKey,
    static_key,
)
from ensemblr.ensembles.roles import DynamicRoleSpec
from ensemblr.heuristics.selection import SelectionProblem
from ensemblr.utils.errors import RegistrationError

logger = logging.getLogger(__name__)

StaticChoice = Tuple[Tuple[ComponentInstance, ...], ...]


class Resolution(NamedTuple):
    now: int
    instances: Tuple[EnsembleInstance, ...]
    permissions: PermissionSet
    pending: Tuple[Notification, ...]
    created: Tuple[InstanceKey, ...]
    dissolved: Tuple[InstanceKey, ...]


def static_assignments(ensemble_type: EnsembleType, population: Population) -> Iterator[StaticChoice]:
    """All static-role assignments of a type, in ascending id order."""
    options = []
    for role in ensemble_type.static_roles:
        members = population.of_type(role.component_type)
        lo, hi = role.cardinality.bounds()
        choices = []
        for size in range(lo, min(hi, len(members)) + 1):
            choices.extend(itertools.combinations(members, size))
        options.append(choices)
    return itertools.product(*options)


def static_bindings(
    ensemble_type: EnsembleType,
    choice: StaticChoice,
    parent: Optional[EnsembleInstance] = None,
    scope: Optional[ResolutionScope] = None,
) -> Bindings:
    roles = ensemble_type.static_roles
    key: InstanceKey = (
        ensemble_type.name,
        parent.key if parent is not None else None,
        static_key(roles, [[c.id for c in components] for components in choice]),
    )
    return Bindings(
        ensemble_type,
        {role.name: components for role, components in zip(roles, choice)},
        parent.bindings if parent is not None else None,
        scope,
        key,
    )


def role_candidates(
    role: DynamicRoleSpec, population: Population, bindings: Bindings
) -> Tuple[ComponentInstance, ...]:
    """Components of the role's type, narrowed by the role's candidates hint."""
    if role.candidates is None:
        return population.of_type(role.component_type)
    return tuple(
        c
        for c in population.resolve_ids(role.candidates(bindings))
        if c.type.name == role.component_type
    )


def populate_dynamic_role(
    role: DynamicRoleSpec,
    bindings: Bindings,
    candidates: Sequence[ComponentInstance],
    now: int,
) -> Optional[Tuple[ComponentInstance, ...]]:
    """Populate one dynamic role of one instance.

    Returns:
        The selected components in ascending id order, or None when the
        role cannot be satisfied
    """
    eligible = tuple(c for c in sorted(candidates, key=lambda c: c.id) if role.accepts(c, bindings, now))
    if not role.uses_selector:
        return eligible if role.cardinality.admits(len(eligible), bindings) else None
    demand, _ = role.cardinality.bounds(bindings)
    if not eligible:
        return () if demand == 0 else None
    problem = SelectionProblem.build([(0, demand)], [(c.id, [0]) for c in eligible])
    result = role.selector.select(problem)
    if result is None:
        return None
    chosen = set(result[0])
    return tuple(c for c in eligible if c.id in chosen)


class _Draft:
    __slots__ = ("parent", "bindings", "dynamic")

    def __init__(self, parent: Optional[EnsembleInstance], bindings: Bindings) -> None:
        self.parent = parent
        self.bindings = bindings
        self.dynamic: Dict[str, Tuple[str, ...]] = {}

    def bind(self, role: str, components: Tuple[ComponentInstance, ...]) -> None:
        self.bindings = self.bindings.bind(role, components)
        self.dynamic[role] = tuple(c.id for c in components)


class Resolver:
    """Resolves a fixed list of top-level ensemble types over a population.

    Keeps the previous step's instances to carry ``active_since`` and to
    report created and dissolved instances.
    """

    def __init__(
        self,
        types: Sequence[EnsembleType],
        registry: ComponentRegistry,
        sensor=None,
        estimates=None,
    ) -> None:
        names = set()
        for ensemble_type in types:
            if ensemble_type.is_inner:
                raise RegistrationError(f"'{ensemble_type.name}' is an inner type")
            ensemble_type.validate()
            for nested in ensemble_type.walk():
                if nested.name in names:
                    raise RegistrationError(f"Ensemble type '{nested.name}' is declared twice")
                names.add(nested.name)
            for component_type in ensemble_type.component_types():
                registry.get(component_type)
        self.types = tuple(types)
        self.registry = registry
        self.sensor = sensor
        self.estimates = estimates
        self._live: Dict[InstanceKey, EnsembleInstance] = {}

    @property
    def live(self) -> Tuple[EnsembleInstance, ...]:
        return tuple(self._live.values())

    def reset(self) -> None:
        self._live = {}

    def resolve(self, population: Population, now: int) -> Resolution:
        scope = ResolutionScope(now, self.estimates, self.sensor)
        instances: List[EnsembleInstance] = []
        for ensemble_type in self.types:
            self._resolve_type(ensemble_type, [None], population, scope, instances)

        current = {instance.key: instance for instance in instances}
        created = tuple(key for key in current if key not in self._live)
        dissolved = tuple(key for key in self._live if key not in current)
        if self.sensor is not None:
            for key in created:
                self.sensor.on_instance_created(key[0], now)
            for key in dissolved:
                self.sensor.on_instance_dissolved(key[0], now)
        self._live = current

        if logger.isEnabledFor(logging.DEBUG):
            for instance in instances:
                logger.debug(f"{now};{instance.describe()}")

        permissions, pending = collect_actions(instances)
        return Resolution(now, tuple(instances), permissions, tuple(pending), created, dissolved)

    def _resolve_type(
        self,
        ensemble_type: EnsembleType,
        parents: Sequence[Optional[EnsembleInstance]],
        population: Population,
        scope: ResolutionScope,
        out: List[EnsembleInstance],
    ) -> None:
        drafts: List[_Draft] = []
        for parent in parents:
            for choice in static_assignments(ensemble_type, population):
                bindings = static_bindings(ensemble_type, choice, parent, scope)
                if ensemble_type.holds(bindings, scope.now):
                    drafts.append(_Draft(parent, bindings))

        for role in ensemble_type.dynamic_roles:
            if not drafts:
                break
            if role.uses_selector:
                drafts = self._select(ensemble_type, role, drafts, population, scope.now)
                continue
            kept = []
            for draft in drafts:
                candidates = role_candidates(role, population, draft.bindings)
                selected = populate_dynamic_role(role, draft.bindings, candidates, scope.now)
                if selected is not None:
                    draft.bind(role.name, selected)
                    kept.append(draft)
            drafts = kept

        instances = []
        for draft in drafts:
            key = draft.bindings.key
            previous = self._live.get(key)
            instances.append(
                EnsembleInstance(
                    ensemble_type,
                    key,
                    {role: ids for role, ids in key[2]},
                    draft.dynamic,
                    draft.bindings,
                    parent=draft.parent,
                    active_since=previous.active_since if previous is not None else scope.now,
                )
            )
        out.extend(instances)
        for inner in ensemble_type.inner_types:
            self._resolve_type(inner, instances, population, scope, out)

    def _select(
        self,
        ensemble_type: EnsembleType,
        role: DynamicRoleSpec,
        drafts: List[_Draft],
        population: Population,
        now: int,
    ) -> List[_Draft]:
        components: Dict[str, ComponentInstance] = {}
        eligibility: Dict[str, List[int]] = {}
        demands = []
        for index, draft in enumerate(drafts):
            demand, _ = role.cardinality.bounds(draft.bindings)
            demands.append((index, demand))
            for candidate in role_candidates(role, population, draft.bindings):
                if role.accepts(candidate, draft.bindings, now):
                    components[candidate.id] = candidate
                    eligibility.setdefault(candidate.id, []).append(index)

        cost = None
        if role.selector.cost is not None:
            selector_cost = role.selector.cost

            def cost(cid: str, index: int) -> float:
                return selector_cost(components[cid], drafts[index].bindings)

        problem = SelectionProblem.build(demands, sorted(eligibility.items()), cost)
        assigned: Dict[int, Tuple[str, ...]] = {}
        for part in problem.split():
            result = role.selector.select(part)
            if result is None:
                if self.sensor is not None:
                    for _ in part.instances:
                        self.sensor.on_selection_infeasible(ensemble_type.name, role.name, now)
                continue
            assigned.update(result)

        kept = []
        for index, draft in enumerate(drafts):
            if index in assigned:
                draft.bind(role.name, tuple(components[cid] for cid in assigned[index]))
                kept.append(draft)
        return kept
