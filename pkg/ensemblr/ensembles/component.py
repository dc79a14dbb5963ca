"""Component metamodel.

A ComponentType is an ordered field schema; a ComponentInstance is a typed
record that evolves over simulation time. Field values are checked against
their semantic type on every write.
"""

import numbers
from enum import Enum
from typing import (
    Any,
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Mapping,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import numpy as np

from ensemblr.utils.errors import ContractError, RegistrationError
from ensemblr.utils.objects import cached_property


class SemanticType(Enum):
    NUMBER = "number"
    BOOLEAN = "boolean"
    TIME = "time"
    POSITION = "position"
    IDENTIFIER = "identifier"
    IDENTIFIERS = "identifiers"


class FieldSpec(NamedTuple):
    name: str
    semantic_type: SemanticType
    optional: bool = False


def _is_identifier(value: Any) -> bool:
    return isinstance(value, str) and bool(value)


def conforms(semantic_type: SemanticType, value: Any) -> bool:
    """Whether a value is of the given semantic type."""
    if semantic_type is SemanticType.BOOLEAN:
        return isinstance(value, (bool, np.bool_))
    if semantic_type is SemanticType.NUMBER:
        return isinstance(value, numbers.Real) and not isinstance(value, bool)
    if semantic_type is SemanticType.TIME:
        return isinstance(value, numbers.Integral) and not isinstance(value, bool)
    if semantic_type is SemanticType.POSITION:
        return isinstance(value, str)
    if semantic_type is SemanticType.IDENTIFIER:
        return _is_identifier(value)
    if semantic_type is SemanticType.IDENTIFIERS:
        return isinstance(value, (frozenset, set, list, tuple)) and all(
            _is_identifier(v) for v in value
        )
    return False


class ComponentType:
    """Named field schema shared by all components of one kind.

    Beyond-control types (humans, for instance) are only observed: actions
    may notify them but never change their fields.
    """

    name: str
    fields: Tuple[FieldSpec, ...]
    beyond_control: bool

    def __init__(
        self,
        name: str,
        fields: Sequence[Union[FieldSpec, Tuple]] = (),
        beyond_control: bool = False,
    ) -> None:
        if not name:
            raise RegistrationError("Component type needs a name")
        specs = tuple(f if isinstance(f, FieldSpec) else FieldSpec(*f) for f in fields)
        seen = set()
        for spec in specs:
            if spec.name in seen:
                raise RegistrationError(
                    f"Duplicate field '{spec.name}' in component type '{name}'"
                )
            seen.add(spec.name)
        self.name = name
        self.fields = specs
        self.beyond_control = beyond_control

    def __repr__(self) -> str:
        return f"ComponentType({self.name!r}, fields={list(self.field_names)})"

    @cached_property
    def field_names(self) -> Tuple[str, ...]:
        return tuple(spec.name for spec in self.fields)

    @cached_property
    def _by_name(self) -> Dict[str, FieldSpec]:
        return {spec.name: spec for spec in self.fields}

    def field(self, name: str) -> FieldSpec:
        try:
            return self._by_name[name]
        except KeyError:
            raise ContractError(f"{self.name} has no field '{name}'") from None

    def coerce(self, name: str, value: Any) -> Any:
        """Check a value against the field's semantic type and normalize it."""
        spec = self.field(name)
        if value is None:
            if spec.optional:
                return None
            raise ContractError(f"{self.name}.{name} is required")
        if not conforms(spec.semantic_type, value):
            raise ContractError(
                f"{self.name}.{name} expects {spec.semantic_type.value}, got {value!r}"
            )
        if spec.semantic_type is SemanticType.IDENTIFIERS:
            return frozenset(value)
        if spec.semantic_type is SemanticType.BOOLEAN:
            return bool(value)
        return value


class ComponentInstance:
    """A typed record of named fields.

    Fields read as attributes (``worker.is_at_factory``); writes go through
    :meth:`set`, which validates against the type.
    """

    __slots__ = ("id", "type", "_values")

    def __init__(self, id: str, type: ComponentType, **values: Any) -> None:
        if not _is_identifier(id):
            raise ContractError(f"Invalid component id {id!r}")
        unknown = set(values) - set(type.field_names)
        if unknown:
            raise ContractError(f"{type.name} has no fields {sorted(unknown)}")
        object.__setattr__(self, "id", id)
        object.__setattr__(self, "type", type)
        object.__setattr__(
            self,
            "_values",
            {name: type.coerce(name, values.get(name)) for name in type.field_names},
        )

    def __getattr__(self, name: str) -> Any:
        try:
            return self._values[name]
        except KeyError:
            raise AttributeError(name) from None

    def __setattr__(self, name: str, value: Any) -> None:
        raise AttributeError(f"Use set() to change field '{name}' of {self.id}")

    def __repr__(self) -> str:
        return f"<{self.type.name} {self.id}>"

    def get(self, name: str) -> Any:
        self.type.field(name)
        return self._values[name]

    def set(self, name: str, value: Any) -> None:
        self._values[name] = self.type.coerce(name, value)

    def update(self, **values: Any) -> None:
        for name, value in values.items():
            self.set(name, value)

    def as_dict(self) -> Dict[str, Any]:
        return {
            name: sorted(v) if isinstance(v, frozenset) else v
            for name, v in self._values.items()
        }


class ComponentRegistry:
    """Component types by name, in registration order."""

    def __init__(self, types: Iterable[ComponentType] = ()) -> None:
        self._types: Dict[str, ComponentType] = {}
        for component_type in types:
            self.register(component_type)

    def register(self, component_type: ComponentType) -> ComponentType:
        if component_type.name in self._types:
            raise RegistrationError(
                f"Component type '{component_type.name}' is already registered"
            )
        self._types[component_type.name] = component_type
        return component_type

    def get(self, name: str) -> ComponentType:
        try:
            return self._types[name]
        except KeyError:
            raise RegistrationError(f"Unknown component type '{name}'") from None

    def __contains__(self, name: object) -> bool:
        return name in self._types

    def __iter__(self) -> Iterator[ComponentType]:
        return iter(self._types.values())

    def __len__(self) -> int:
        return len(self._types)


class Population:
    """All component instances of one simulation, unique by id."""

    def __init__(self, components: Iterable[ComponentInstance] = ()) -> None:
        self._components: Dict[str, ComponentInstance] = {}
        for component in components:
            self.add(component)

    def add(self, component: ComponentInstance) -> ComponentInstance:
        if component.id in self._components:
            raise ContractError(f"Duplicate component id '{component.id}'")
        self._components[component.id] = component
        type(self)._by_type.reset(self)
        return component

    def __getitem__(self, id: str) -> ComponentInstance:
        return self._components[id]

    def get(self, id: str) -> Optional[ComponentInstance]:
        return self._components.get(id)

    def __contains__(self, id: object) -> bool:
        return id in self._components

    def __iter__(self) -> Iterator[ComponentInstance]:
        return iter(self._components.values())

    def __len__(self) -> int:
        return len(self._components)

    @cached_property
    def _by_type(self) -> Mapping[str, Tuple[ComponentInstance, ...]]:
        grouped: Dict[str, List[ComponentInstance]] = {}
        for component in self._components.values():
            grouped.setdefault(component.type.name, []).append(component)
        return {name: tuple(sorted(items, key=lambda c: c.id)) for name, items in grouped.items()}

    def of_type(self, type_name: str) -> Tuple[ComponentInstance, ...]:
        """Components of a type in ascending id order."""
        return self._by_type.get(type_name, ())

    def resolve_ids(self, ids: Iterable[str]) -> Tuple[ComponentInstance, ...]:
        return tuple(self._components[i] for i in sorted(ids) if i in self._components)

    def ids(self) -> FrozenSet[str]:
        return frozenset(self._components)
