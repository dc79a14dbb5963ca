"""Component and ensemble metamodel and the resolution engine."""

from ensemblr.ensembles.component import (
    ComponentInstance,
    ComponentRegistry,
    ComponentType,
    FieldSpec,
    Population,
    SemanticType,
)
from ensemblr.ensembles.roles import Cardinality, DynamicRoleSpec, StaticRoleSpec
from ensemblr.ensembles.actions import (
    ActionExecutor,
    ActionKind,
    ActionSpec,
    Notification,
    Permission,
    PermissionSet,
)
from ensemblr.ensembles.bindings import Bindings, ResolutionScope
from ensemblr.ensembles.ensemble import EnsembleInstance, EnsembleType
from ensemblr.ensembles.resolver import Resolution, Resolver, populate_dynamic_role
from ensemblr.ensembles.runtime import EnsembleRuntime, StepResult

__all__ = [
    "ComponentInstance",
    "ComponentRegistry",
    "ComponentType",
    "FieldSpec",
    "Population",
    "SemanticType",
    "Cardinality",
    "DynamicRoleSpec",
    "StaticRoleSpec",
    "ActionExecutor",
    "ActionKind",
    "ActionSpec",
    "Notification",
    "Permission",
    "PermissionSet",
    "Bindings",
    "ResolutionScope",
    "EnsembleInstance",
    "EnsembleType",
    "Resolution",
    "Resolver",
    "populate_dynamic_role",
    "EnsembleRuntime",
    "StepResult",
]
