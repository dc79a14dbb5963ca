"""Ensemble types and their live instances."""

from typing import (
    Callable,
    Dict,
    Iterator,
    List,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from ensemblr.ensembles.actions import ActionSpec
from ensemblr.ensembles.bindings import Bindings
from ensemblr.ensembles.roles import DynamicRoleSpec, StaticRoleSpec
from ensemblr.utils.errors import RegistrationError
from ensemblr.utils.helpers import format_binding

Situation = Callable[[Bindings, int], bool]
RoleSpec = Union[StaticRoleSpec, DynamicRoleSpec]
StaticKey = Tuple[Tuple[str, Tuple[str, ...]], ...]
# (type name, parent key, static key)
InstanceKey = Tuple[str, Optional[tuple], StaticKey]


class EnsembleType:
    """Template of a coordination group: roles, situation, actions.

    Inner types are resolved within each live instance of this type and may
    read its roles. Types are immutable once built and can be shared across
    simulations.
    """

    def __init__(
        self,
        name: str,
        static_roles: Sequence[StaticRoleSpec] = (),
        situation: Optional[Situation] = None,
        dynamic_roles: Sequence[DynamicRoleSpec] = (),
        actions: Sequence[ActionSpec] = (),
        inner_types: Sequence["EnsembleType"] = (),
    ) -> None:
        if not name:
            raise RegistrationError("Ensemble type needs a name")
        self.name = name
        self.static_roles = tuple(static_roles)
        self.situation = situation
        self.dynamic_roles = tuple(dynamic_roles)
        self.actions = tuple(actions)
        self.inner_types = tuple(inner_types)
        self.parent: Optional["EnsembleType"] = None
        self._roles: Dict[str, RoleSpec] = {}
        for role in self.static_roles + self.dynamic_roles:
            if role.name in self._roles:
                raise RegistrationError(f"Duplicate role '{role.name}' in '{name}'")
            self._roles[role.name] = role
        self._validate_own()
        for inner in self.inner_types:
            if inner.parent is not None:
                raise RegistrationError(
                    f"'{inner.name}' is already nested in '{inner.parent.name}'"
                )
            inner.parent = self
        # inner types see all enclosing roles
        for inner in self.inner_types:
            inner._validate_enclosed()

    def _validate_own(self) -> None:
        self._check_refs(strict=False)
        for action in self.actions:
            if action.target_role not in self._roles:
                raise RegistrationError(
                    f"Action of '{self.name}' targets unknown role '{action.target_role}'"
                )

    def _validate_enclosed(self) -> None:
        enclosing = self.enclosing_role_names()
        for name in self._roles:
            if name in enclosing:
                raise RegistrationError(
                    f"Role '{name}' of '{self.name}' shadows an enclosing role"
                )
        self._check_refs(strict=False)
        for inner in self.inner_types:
            inner._validate_enclosed()

    def _check_refs(self, strict: bool) -> None:
        """Check cardinality references against the roles visible so far.

        A reference to an own role must point to an earlier one. Any other
        name may still be supplied by an enclosing type that is not attached
        yet, so it only fails when ``strict``.
        """
        enclosing = set(self.enclosing_role_names())
        visible = enclosing | set(role.name for role in self.static_roles)
        for role in self.dynamic_roles:
            for ref in role.cardinality.refs:
                if ref in visible:
                    continue
                if ref in self._roles:
                    raise RegistrationError(
                        f"Cardinality of '{self.name}.{role.name}' references "
                        f"'{ref}', which is not declared before it"
                    )
                if strict:
                    raise RegistrationError(
                        f"Cardinality of '{self.name}.{role.name}' references "
                        f"unknown role '{ref}'"
                    )
            visible.add(role.name)

    def validate(self) -> None:
        """Reject references no enclosing type resolves, for this type and its inner types."""
        for ensemble_type in self.walk():
            ensemble_type._check_refs(strict=True)

    def __repr__(self) -> str:
        return f"EnsembleType({self.name!r})"

    @property
    def is_inner(self) -> bool:
        return self.parent is not None

    @property
    def roles(self) -> Tuple[RoleSpec, ...]:
        return tuple(self._roles.values())

    def role(self, name: str) -> RoleSpec:
        try:
            return self._roles[name]
        except KeyError:
            raise RegistrationError(f"'{self.name}' has no role '{name}'") from None

    def has_role(self, name: str) -> bool:
        return name in self._roles

    def owner_of(self, role: str) -> Optional["EnsembleType"]:
        """This type or the enclosing type declaring a role."""
        current: Optional[EnsembleType] = self
        while current is not None:
            if role in current._roles:
                return current
            current = current.parent
        return None

    def enclosing_role_names(self) -> Tuple[str, ...]:
        names: List[str] = []
        current = self.parent
        while current is not None:
            names.extend(current._roles)
            current = current.parent
        return tuple(names)

    def holds(self, bindings: Bindings, now: int) -> bool:
        return self.situation is None or bool(self.situation(bindings, now))

    def walk(self) -> Iterator["EnsembleType"]:
        """This type followed by its inner types, depth first."""
        yield self
        for inner in self.inner_types:
            yield from inner.walk()

    def component_types(self) -> Iterator[str]:
        for ensemble_type in self.walk():
            for role in ensemble_type.roles:
                yield role.component_type


def static_key(roles: Sequence[StaticRoleSpec], chosen: Sequence[Sequence[str]]) -> StaticKey:
    return tuple((role.name, tuple(sorted(ids))) for role, ids in zip(roles, chosen))


class EnsembleInstance:
    """Materialization of an ensemble type over concrete components."""

    def __init__(
        self,
        ensemble_type: EnsembleType,
        key: InstanceKey,
        static: Dict[str, Tuple[str, ...]],
        dynamic: Dict[str, Tuple[str, ...]],
        bindings: Bindings,
        parent: Optional["EnsembleInstance"] = None,
        active_since: int = 0,
    ) -> None:
        self.type = ensemble_type
        self.key = key
        self.static = static
        self.dynamic = dynamic
        self.bindings = bindings
        self.parent = parent
        self.active_since = active_since

    def members(self, role: str) -> Tuple[str, ...]:
        if role in self.static:
            return self.static[role]
        if role in self.dynamic:
            return self.dynamic[role]
        if self.parent is not None:
            return self.parent.members(role)
        raise KeyError(role)

    def describe(self) -> str:
        """``type;static;role=ids;...``, one line of the per-step dump."""
        dynamic = ";".join(f"{role}={','.join(ids)}" for role, ids in self.dynamic.items())
        return f"{self.type.name};{self.describe_static()}" + (f";{dynamic}" if dynamic else "")

    def describe_static(self) -> str:
        own = format_binding(self.static)
        if self.parent is not None:
            parent = self.parent.describe_static()
            return f"{parent}>{own}" if own else parent
        return own

    def __repr__(self) -> str:
        return f"<EnsembleInstance {self.describe()}>"
