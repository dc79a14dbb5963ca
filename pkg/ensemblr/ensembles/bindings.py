from typing import (
    TYPE_CHECKING,
    Any,
    Dict,
    Iterator,
    Mapping,
    NamedTuple,
    Optional,
    Tuple,
)

from ensemblr.ensembles.component import ComponentInstance
from ensemblr.utils.errors import EstimationError

if TYPE_CHECKING:  # pragma: no cover
    from ensemblr.ensembles.ensemble import EnsembleType, InstanceKey
    from ensemblr.estimates.runtime import EstimateRuntime
    from ensemblr.sensors import SimulationSensor


class ResolutionScope(NamedTuple):
    """What predicates may reach besides roles: the clock and the estimates."""

    now: int
    estimates: Optional["EstimateRuntime"] = None
    sensor: Optional["SimulationSensor"] = None


class Bindings(Mapping[str, Tuple[ComponentInstance, ...]]):
    """Read-only view of the roles bound so far.

    ``b.shift`` gives the component of a single-component role and a tuple
    otherwise; ``b["shift"]`` is always a tuple. Roles of enclosing instances
    are visible through the parent.
    """

    def __init__(
        self,
        ensemble_type: "EnsembleType",
        roles: Mapping[str, Tuple[ComponentInstance, ...]],
        parent: Optional["Bindings"] = None,
        scope: Optional[ResolutionScope] = None,
        key: Optional["InstanceKey"] = None,
    ) -> None:
        self._type = ensemble_type
        self._roles: Dict[str, Tuple[ComponentInstance, ...]] = dict(roles)
        self._parent = parent
        self._scope = scope
        self._key = key

    @property
    def ensemble_type(self) -> "EnsembleType":
        return self._type

    @property
    def parent(self) -> Optional["Bindings"]:
        return self._parent

    @property
    def key(self) -> Optional["InstanceKey"]:
        """Static key of the instance these bindings belong to."""
        return self._key

    @property
    def scope(self) -> Optional[ResolutionScope]:
        return self._scope

    def __getitem__(self, role: str) -> Tuple[ComponentInstance, ...]:
        if role in self._roles:
            return self._roles[role]
        if self._parent is not None:
            return self._parent[role]
        raise KeyError(role)

    def __iter__(self) -> Iterator[str]:
        seen = list(self._roles)
        if self._parent is not None:
            seen.extend(name for name in self._parent if name not in self._roles)
        return iter(seen)

    def __len__(self) -> int:
        return sum(1 for _ in self)

    def __getattr__(self, role: str) -> Any:
        if role.startswith("_"):
            raise AttributeError(role)
        try:
            components = self[role]
        except KeyError:
            raise AttributeError(
                f"'{self._type.name}' has no role '{role}'"
            ) from None
        owner = self._type.owner_of(role)
        if owner is not None and owner.role(role).is_single:
            return components[0] if components else None
        return components

    def ids(self, role: str) -> Tuple[str, ...]:
        return tuple(component.id for component in self[role])

    def bind(self, role: str, components: Tuple[ComponentInstance, ...]) -> "Bindings":
        """Copy with one more role bound."""
        roles = dict(self._roles)
        roles[role] = tuple(components)
        return Bindings(self._type, roles, self._parent, self._scope, self._key)

    def predict(
        self,
        estimate: str,
        target_time: int,
        candidate: Optional[ComponentInstance] = None,
    ) -> Any:
        """Query an estimate attached to this ensemble type for the target time."""
        if self._scope is None or self._scope.estimates is None:
            raise EstimationError(f"No estimates available for '{estimate}'")
        return self._scope.estimates.predict_for(
            estimate, self, candidate, target_time, self._scope.now
        )

    def record_fallback(self, estimate: str, reason: str) -> None:
        if self._scope is not None and self._scope.sensor is not None:
            self._scope.sensor.on_estimate_fallback(estimate, reason)

    def __repr__(self) -> str:
        roles = ", ".join(f"{name}={list(self.ids(name))}" for name in self)
        return f"Bindings({self._type.name}: {roles})"
