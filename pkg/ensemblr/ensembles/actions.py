"""Ensemble actions: access grants and notifications.

Permissions are rebuilt from scratch every step as the union of the allow
outputs of all live instances. Notifications are delivered at most once per
(instance, component, tag); the ledger forgets an instance once it dissolves.
"""

import logging
from enum import Enum
from typing import (
    TYPE_CHECKING,
    Any,
    Callable,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    NamedTuple,
    Optional,
    Sequence,
    Set,
    Tuple,
    Union,
)

from ensemblr.utils.errors import ActionError

if TYPE_CHECKING:  # pragma: no cover
    from ensemblr.ensembles.bindings import Bindings
    from ensemblr.ensembles.ensemble import EnsembleInstance, InstanceKey
    from ensemblr.sensors import SimulationSensor

logger = logging.getLogger(__name__)

Resource = Union[str, Callable[["Bindings"], str]]


class ActionKind(Enum):
    ALLOW = "allow"
    NOTIFY = "notify"


class Permission(NamedTuple):
    """Grant of an operation on a resource. ``resource`` may read the bindings."""

    resource: Resource
    operation: str

    def resolve(self, bindings: "Bindings") -> str:
        resource = self.resource(bindings) if callable(self.resource) else self.resource
        if not isinstance(resource, str) or not resource:
            raise ActionError(f"Permission resource must resolve to an id, got {resource!r}")
        return resource


class ActionSpec:
    """``allow <role> <operation> <resource>`` or ``notify <role> <tag>``."""

    def __init__(self, kind: ActionKind, target_role: str, payload: Any) -> None:
        if kind is ActionKind.ALLOW and not isinstance(payload, Permission):
            raise ActionError(
                f"allow on '{target_role}' only grants permissions, got {payload!r}"
            )
        if kind is ActionKind.NOTIFY and (not isinstance(payload, str) or not payload):
            raise ActionError(f"notify on '{target_role}' needs a tag")
        self.kind = kind
        self.target_role = target_role
        self.payload = payload

    @classmethod
    def allow(cls, target_role: str, operation: str, resource: Resource) -> "ActionSpec":
        return cls(ActionKind.ALLOW, target_role, Permission(resource, operation))

    @classmethod
    def notify(cls, target_role: str, tag: str) -> "ActionSpec":
        return cls(ActionKind.NOTIFY, target_role, tag)

    def __repr__(self) -> str:
        return f"ActionSpec({self.kind.value}, {self.target_role!r}, {self.payload!r})"


class PermissionEntry(NamedTuple):
    component: str
    resource: str
    operation: str


class PermissionSet:
    """Immutable set of (component, resource, operation) grants."""

    def __init__(self, entries: Iterable[Tuple[str, str, str]] = ()) -> None:
        self._entries: FrozenSet[PermissionEntry] = frozenset(
            PermissionEntry(*entry) for entry in entries
        )

    def allows(self, component: str, resource: str, operation: str) -> bool:
        return (component, resource, operation) in self._entries

    def __contains__(self, entry: object) -> bool:
        return entry in self._entries

    def __iter__(self) -> Iterator[PermissionEntry]:
        return iter(sorted(self._entries))

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, PermissionSet):
            return self._entries == other._entries
        return NotImplemented

    def __repr__(self) -> str:
        return f"PermissionSet({len(self)} entries)"


class Notification(NamedTuple):
    component: str
    tag: str
    instance: "EnsembleInstance"

    @property
    def ensemble_type(self) -> str:
        return self.instance.type.name


def collect_actions(
    instances: Sequence["EnsembleInstance"],
) -> Tuple[PermissionSet, List[Notification]]:
    """Evaluate the actions of live instances without delivering anything."""
    entries: Set[Tuple[str, str, str]] = set()
    pending: List[Notification] = []
    for instance in instances:
        for action in instance.type.actions:
            members = instance.members(action.target_role)
            if action.kind is ActionKind.ALLOW:
                resource = action.payload.resolve(instance.bindings)
                for component in members:
                    entries.add((component, resource, action.payload.operation))
            else:
                for component in members:
                    pending.append(Notification(component, action.payload, instance))
    return PermissionSet(entries), pending


class ActionExecutor:
    """Applies actions of live instances step after step.

    Owns the notification ledger, so one executor belongs to one simulation.
    Ledger entries outlive their instance; an instance that dissolves and
    forms again under the same key is not notified twice until ``reset``.
    """

    def __init__(self, sensor: Optional["SimulationSensor"] = None) -> None:
        self.sensor = sensor
        self._ledger: Set[Tuple["InstanceKey", str, str]] = set()

    def execute(
        self, instances: Sequence["EnsembleInstance"]
    ) -> Tuple[PermissionSet, List[Notification]]:
        """Rebuild permissions and deliver new notifications.

        Returns:
            The step's PermissionSet and the notifications delivered this step
        """
        permissions, pending = collect_actions(instances)
        delivered: List[Notification] = []
        for notification in pending:
            entry = (notification.instance.key, notification.component, notification.tag)
            if entry in self._ledger:
                continue
            self._ledger.add(entry)
            delivered.append(notification)
            if self.sensor is not None:
                self.sensor.on_notification_delivered(
                    notification.ensemble_type, notification.tag
                )
        return permissions, delivered

    def reset(self) -> None:
        self._ledger.clear()

    def __len__(self) -> int:
        return len(self._ledger)
