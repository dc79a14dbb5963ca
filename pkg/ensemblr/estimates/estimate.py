"""Value estimate declarations.

A ValueEstimate predicts a future attribute value of a component, an
ensemble, or a component within an ensemble. Inputs are features of the
attachment context at collection time; the label is the output attribute
observed t ticks later, t within the horizon. The encoded offset is the last
input column.
"""

from enum import Enum
from typing import (
    Any,
    Callable,
    Hashable,
    Mapping,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
)

import numpy as np

from ensemblr.utils.errors import (
    ContractError,
    RegistrationError,
    UnreadableOutputError,
)
from ensemblr.utils.objects import cached_property


class Attachment(Enum):
    COMPONENT = "component"
    ENSEMBLE = "ensemble"
    PAIR = "componentEnsemblePair"


class OutputKind(Enum):
    BINARY = "binary"
    CATEGORICAL = "categorical"
    CONTINUOUS = "continuous"


class EstimateContext(NamedTuple):
    """What an estimate is attached to at one tick."""

    key: Hashable
    component: Any = None
    bindings: Any = None


Extractor = Callable[[EstimateContext, int], Any]


class Feature:
    """One named input: extraction from a context, and numeric encoding.

    Extraction and encoding are separate so synthetic values can be encoded without a
    live context.
    """

    def __init__(
        self,
        name: str,
        extract: Extractor,
        encode: Optional[Callable[[Any], Sequence[float]]] = None,
        width: int = 1,
        continuous: bool = False,
    ) -> None:
        self.name = name
        self._extract = extract
        self._encode = encode
        self.width = width
        self.continuous = continuous

    @classmethod
    def one_hot(cls, name: str, extract: Extractor, size: int) -> "Feature":
        def encode(value: Any) -> np.ndarray:
            index = int(value)
            if not 0 <= index < size:
                raise ContractError(f"{name} value {value!r} outside [0, {size})")
            vector = np.zeros(size)
            vector[index] = 1.0
            return vector

        return cls(name, extract, encode, width=size)

    @classmethod
    def flag(cls, name: str, extract: Extractor) -> "Feature":
        return cls(name, extract, lambda value: (1.0 if value else 0.0,))

    @classmethod
    def number(cls, name: str, extract: Extractor) -> "Feature":
        """Continuous input, standardized with statistics frozen at first training."""
        return cls(name, extract, lambda value: (float(value),), continuous=True)

    def extract(self, context: EstimateContext, now: int) -> Any:
        return self._extract(context, now)

    def encode(self, value: Any) -> np.ndarray:
        if self._encode is None:
            encoded = np.atleast_1d(np.asarray(value, dtype=float))
        else:
            encoded = np.asarray(self._encode(value), dtype=float)
        if encoded.shape != (self.width,):
            raise ContractError(f"Feature {self.name} encodes to {encoded.shape}, expected ({self.width},)")
        return encoded

    def __repr__(self) -> str:
        return f"Feature({self.name!r}, width={self.width})"


class OutputSpec:
    """The predicted attribute and its value kind."""

    def __init__(
        self,
        read: Extractor,
        kind: OutputKind = OutputKind.BINARY,
        classes: int = 2,
        name: str = "output",
    ) -> None:
        if kind is OutputKind.CATEGORICAL and classes < 2:
            raise RegistrationError("Categorical outputs need at least two classes")
        self._read = read
        self.kind = kind
        self.classes = classes if kind is OutputKind.CATEGORICAL else None
        self.name = name

    @classmethod
    def binary(cls, read: Extractor, name: str = "output") -> "OutputSpec":
        return cls(read, OutputKind.BINARY, name=name)

    @classmethod
    def categorical(cls, read: Extractor, classes: int, name: str = "output") -> "OutputSpec":
        return cls(read, OutputKind.CATEGORICAL, classes=classes, name=name)

    @classmethod
    def continuous(cls, read: Extractor, name: str = "output") -> "OutputSpec":
        return cls(read, OutputKind.CONTINUOUS, name=name)

    @property
    def size(self) -> int:
        return self.classes if self.kind is OutputKind.CATEGORICAL else 1

    def label(self, context: EstimateContext, now: int) -> float:
        """Read the attribute and turn it into a numeric label.

        Raises:
            UnreadableOutputError: attribute missing or of the wrong kind
        """
        try:
            value = self._read(context, now)
        except (AttributeError, KeyError, LookupError, TypeError) as e:
            raise UnreadableOutputError(f"{self.name}: {e}") from e
        if value is None:
            raise UnreadableOutputError(f"{self.name} is not set")
        if self.kind is OutputKind.BINARY:
            return 1.0 if value else 0.0
        if self.kind is OutputKind.CATEGORICAL:
            index = int(value)
            if not 0 <= index < self.classes:
                raise UnreadableOutputError(f"{self.name} class {value!r} outside [0, {self.classes})")
            return float(index)
        try:
            return float(value)
        except (TypeError, ValueError) as e:
            raise UnreadableOutputError(f"{self.name}: {e}") from e


class ValueEstimate:
    """Declaration of a supervised prediction.

    Args:
        name: Estimate name, unique within a runtime
        attachment: What a context is: a component, an ensemble, or both
        inputs: Features read at collection time
        output: Attribute predicted ``horizon`` ticks ahead
        horizon: ``(min_t, max_t)`` with ``1 <= min_t <= max_t``
        guard: Predicate marking contexts whose data is valid
    """

    def __init__(
        self,
        name: str,
        attachment: Attachment,
        inputs: Sequence[Feature],
        output: OutputSpec,
        horizon: Tuple[int, int] = (1, 30),
        guard: Optional[Callable[[EstimateContext, int], bool]] = None,
    ) -> None:
        min_t, max_t = horizon
        if not 1 <= min_t <= max_t:
            raise RegistrationError(f"Estimate '{name}' needs 1 <= min_t <= max_t, got {horizon}")
        names = [feature.name for feature in inputs]
        if len(set(names)) != len(names):
            raise RegistrationError(f"Estimate '{name}' has duplicate inputs")
        self.name = name
        self.attachment = attachment
        self.inputs = tuple(inputs)
        self.output = output
        self.min_t = min_t
        self.max_t = max_t
        self.guard = guard

    def __repr__(self) -> str:
        return f"ValueEstimate({self.name!r}, {self.attachment.value}, T+<{self.min_t},{self.max_t}>)"

    @property
    def horizon(self) -> Tuple[int, int]:
        return self.min_t, self.max_t

    @cached_property
    def feature_width(self) -> int:
        return sum(feature.width for feature in self.inputs)

    @property
    def input_width(self) -> int:
        """Width of a full input vector, encoded offset included."""
        return self.feature_width + 1

    @cached_property
    def scaling_mask(self) -> np.ndarray:
        """Columns standardized by the estimator."""
        mask = [flag for feature in self.inputs for flag in [feature.continuous] * feature.width]
        return np.array(mask + [False], dtype=bool)

    def accepts(self, context: EstimateContext, now: int) -> bool:
        return self.guard is None or bool(self.guard(context, now))

    def extract(self, context: EstimateContext, now: int) -> np.ndarray:
        """Encoded features of a context at ``now``, without the offset."""
        if not self.inputs:
            return np.zeros(0)
        return np.concatenate([f.encode(f.extract(context, now)) for f in self.inputs])

    def encode(self, values: Mapping[str, Any]) -> np.ndarray:
        """Encode raw feature values given by name."""
        missing = [f.name for f in self.inputs if f.name not in values]
        if missing:
            raise ContractError(f"Missing values for {missing}")
        if not self.inputs:
            return np.zeros(0)
        return np.concatenate([f.encode(values[f.name]) for f in self.inputs])

    def encode_horizon(self, t):
        """Offset scaled to [0, 1] over the horizon."""
        if self.max_t == self.min_t:
            return np.zeros_like(np.asarray(t, dtype=float))
        return (np.asarray(t, dtype=float) - self.min_t) / (self.max_t - self.min_t)

    def design(self, features: np.ndarray, t: int) -> np.ndarray:
        return np.append(features, self.encode_horizon(t))

    def clamp(self, t: int) -> int:
        return min(max(t, self.min_t), self.max_t)
