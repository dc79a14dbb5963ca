"""Role specifications and cardinalities."""

from typing import (
    TYPE_CHECKING,
    Any,
    Callable,
    Iterable,
    Optional,
    Sequence,
    Tuple,
)

from ensemblr.utils.errors import RegistrationError

if TYPE_CHECKING:  # pragma: no cover
    from ensemblr.ensembles.bindings import Bindings
    from ensemblr.ensembles.component import ComponentInstance
    from ensemblr.estimates.estimate import ValueEstimate
    from ensemblr.heuristics.selection import ExclusiveSelector

Condition = Callable[["ComponentInstance", "Bindings", int], bool]
CandidatesHint = Callable[["Bindings"], Iterable[str]]


class Cardinality:
    """Size constraint of a role.

    Either a fixed interval ``[lo, hi]`` (``hi`` None means unbounded) or an
    expression evaluated against the bindings resolved so far, which pins
    the size to one exact value.
    """

    lo: int
    hi: Optional[int]
    expr: Optional[Callable[["Bindings"], int]]
    refs: Tuple[str, ...]

    def __init__(
        self,
        lo: int = 0,
        hi: Optional[int] = None,
        expr: Optional[Callable[["Bindings"], int]] = None,
        refs: Sequence[str] = (),
        text: Optional[str] = None,
    ) -> None:
        if expr is None:
            if lo < 0 or (hi is not None and hi < lo):
                raise RegistrationError(f"Invalid cardinality [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi
        self.expr = expr
        self.refs = tuple(refs)
        self._text = text

    @classmethod
    def exact(cls, n: int) -> "Cardinality":
        return cls(n, n)

    @classmethod
    def between(cls, lo: int, hi: int) -> "Cardinality":
        return cls(lo, hi)

    @classmethod
    def any(cls) -> "Cardinality":
        """``[*]``: any size, including zero."""
        return cls(0, None, text="*")

    @classmethod
    def size_of(cls, role: str) -> "Cardinality":
        """Exactly as many as currently bound to another role."""
        return cls(expr=lambda b: len(b[role]), refs=(role,), text=f"{role}.size")

    @classmethod
    def of(cls, expr: Callable[["Bindings"], int], refs: Sequence[str]) -> "Cardinality":
        return cls(expr=expr, refs=refs)

    @property
    def is_expression(self) -> bool:
        return self.expr is not None

    def bounds(self, bindings: "Bindings" = None) -> Tuple[int, Optional[int]]:
        if self.expr is None:
            return self.lo, self.hi
        n = int(self.expr(bindings))
        return n, n

    def admits(self, size: int, bindings: "Bindings" = None) -> bool:
        lo, hi = self.bounds(bindings)
        return size >= lo and (hi is None or size <= hi)

    def __repr__(self) -> str:
        if self._text:
            return f"[{self._text}]"
        if self.expr is not None:
            return "[expr]"
        return f"[{self.lo}, {'*' if self.hi is None else self.hi}]"


class StaticRoleSpec:
    """Role fixed at instantiation; static bindings give an instance its identity."""

    def __init__(
        self,
        name: str,
        component_type: str,
        cardinality: Optional[Cardinality] = None,
    ) -> None:
        cardinality = cardinality or Cardinality.exact(1)
        if cardinality.is_expression or cardinality.hi is None:
            raise RegistrationError(f"Static role '{name}' needs a fixed, bounded cardinality")
        if cardinality.lo < 1:
            raise RegistrationError(f"Static role '{name}' needs at least one component")
        self.name = name
        self.component_type = component_type
        self.cardinality = cardinality

    @property
    def is_single(self) -> bool:
        return self.cardinality.hi == 1

    def __repr__(self) -> str:
        return f"StaticRoleSpec({self.name!r}, {self.component_type!r}, {self.cardinality!r})"


class DynamicRoleSpec:
    """Role populated every step.

    Without a selector the role takes ALL candidates satisfying the condition.
    With a selector the condition only marks eligibility and the selector
    picks exactly the evaluated cardinality, exclusively across instances.
    """

    def __init__(
        self,
        name: str,
        component_type: str,
        cardinality: Optional[Cardinality] = None,
        condition: Optional[Condition] = None,
        selector: Optional["ExclusiveSelector"] = None,
        candidates: Optional[CandidatesHint] = None,
        estimates: Sequence["ValueEstimate"] = (),
    ) -> None:
        cardinality = cardinality or Cardinality.any()
        if selector is not None and cardinality.hi is None and not cardinality.is_expression:
            raise RegistrationError(
                f"Selector role '{name}' needs an exact cardinality target"
            )
        self.name = name
        self.component_type = component_type
        self.cardinality = cardinality
        self.condition = condition
        self.selector = selector
        self.candidates = candidates
        self.estimates = tuple(estimates)

    @property
    def is_single(self) -> bool:
        return not self.cardinality.is_expression and self.cardinality.hi == 1

    @property
    def uses_selector(self) -> bool:
        return self.selector is not None

    def accepts(self, candidate: "ComponentInstance", bindings: "Bindings", now: int) -> bool:
        return self.condition is None or bool(self.condition(candidate, bindings, now))

    def __repr__(self) -> str:
        kind = "selector" if self.uses_selector else "condition"
        return f"DynamicRoleSpec({self.name!r}, {self.component_type!r}, {self.cardinality!r}, {kind})"


def role_names(roles: Iterable[Any]) -> Tuple[str, ...]:
    return tuple(role.name for role in roles)
