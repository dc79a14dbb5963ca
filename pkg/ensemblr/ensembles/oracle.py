"""Brute-force resolution oracle.

Enumerates every subset of the population for every role and keeps the
assignments satisfying all predicates. Exponential, meant for populations of
a handful of components. Selector roles are not supported.
"""

import itertools
from typing import FrozenSet, List, Optional, Sequence, Set, Tuple

from ensemblr.ensembles.bindings import Bindings, ResolutionScope
from ensemblr.ensembles.component import ComponentInstance, Population
from ensemblr.ensembles.ensemble import EnsembleInstance, EnsembleType, InstanceKey
from ensemblr.utils.errors import ContractError

Signature = Tuple[InstanceKey, Tuple[Tuple[str, Tuple[str, ...]], ...]]


def signature(instance: EnsembleInstance) -> Signature:
    """Comparable identity of an instance: key plus dynamic binding."""
    return instance.key, tuple(sorted(instance.dynamic.items()))


def _subsets(items: Sequence[ComponentInstance]):
    for size in range(len(items) + 1):
        yield from itertools.combinations(items, size)


class _Found:
    def __init__(self, key, bindings, dynamic) -> None:
        self.key = key
        self.bindings = bindings
        self.dynamic = dynamic


def _enumerate(
    ensemble_type: EnsembleType,
    parent: Optional[_Found],
    population: Population,
    scope: ResolutionScope,
) -> List[_Found]:
    found: List[_Found] = []
    static_options = []
    for role in ensemble_type.static_roles:
        members = population.of_type(role.component_type)
        static_options.append(
            [s for s in _subsets(members) if role.cardinality.admits(len(s))]
        )
    for choice in itertools.product(*static_options):
        key = (
            ensemble_type.name,
            parent.key if parent else None,
            tuple(
                (role.name, tuple(sorted(c.id for c in components)))
                for role, components in zip(ensemble_type.static_roles, choice)
            ),
        )
        bindings = Bindings(
            ensemble_type,
            {role.name: tuple(components) for role, components in zip(ensemble_type.static_roles, choice)},
            parent.bindings if parent else None,
            scope,
            key,
        )
        if not ensemble_type.holds(bindings, scope.now):
            continue
        dynamic = {}
        satisfiable = True
        for role in ensemble_type.dynamic_roles:
            if role.uses_selector:
                raise ContractError("The brute-force oracle does not solve selector roles")
            members = population.of_type(role.component_type)
            matches = [
                subset
                for subset in _subsets(members)
                if role.cardinality.admits(len(subset), bindings)
                and all(role.accepts(c, bindings, scope.now) for c in subset)
                and not any(
                    role.accepts(c, bindings, scope.now) for c in members if c not in subset
                )
            ]
            if not matches:
                satisfiable = False
                break
            subset = matches[0]
            bindings = bindings.bind(role.name, tuple(subset))
            dynamic[role.name] = tuple(sorted(c.id for c in subset))
        if satisfiable:
            found.append(_Found(key, bindings, dynamic))
    result = list(found)
    for instance in found:
        for inner in ensemble_type.inner_types:
            result.extend(_enumerate(inner, instance, population, scope))
    return result


def brute_force_resolve(
    types: Sequence[EnsembleType], population: Population, now: int, estimates=None
) -> FrozenSet[Signature]:
    """Signatures of every instance that must be live at ``now``."""
    scope = ResolutionScope(now, estimates)
    signatures: Set[Signature] = set()
    for ensemble_type in types:
        for found in _enumerate(ensemble_type, None, population, scope):
            signatures.add((found.key, tuple(sorted(found.dynamic.items()))))
    return frozenset(signatures)
