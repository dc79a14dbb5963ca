"""Training datasets.

Examples are appended in blocks, one per collection step. Inputs are stored
as float32; the concatenated arrays are cached until the next append.
"""

from contextlib import contextmanager
from typing import Iterator, List, NamedTuple, Optional, Tuple

import numpy as np

from ensemblr.utils.errors import DatasetError, SchemaMismatchError
from ensemblr.utils.objects import cached_property


class TrainingExample(NamedTuple):
    t: int
    inputs: np.ndarray
    label: float


class Provenance(NamedTuple):
    run_id: Optional[str]
    first: Optional[int]
    last: Optional[int]


class TrainingDataset:
    """Time-linked (offset, inputs, label) examples of one estimate."""

    def __init__(self, estimate_name: str, input_width: int, run_id: Optional[str] = None) -> None:
        self.estimate_name = estimate_name
        self.input_width = input_width
        self.run_id = run_id
        self._t: List[np.ndarray] = []
        self._inputs: List[np.ndarray] = []
        self._labels: List[np.ndarray] = []
        self._first: Optional[int] = None
        self._last: Optional[int] = None
        self._frozen = False

    def __repr__(self) -> str:
        return f"TrainingDataset({self.estimate_name!r}, {len(self)} examples)"

    def __len__(self) -> int:
        return sum(len(block) for block in self._t)

    @property
    def provenance(self) -> Provenance:
        return Provenance(self.run_id, self._first, self._last)

    @property
    def is_frozen(self) -> bool:
        return self._frozen

    @contextmanager
    def frozen(self) -> Iterator["TrainingDataset"]:
        """Reject appends while training reads the dataset."""
        previous, self._frozen = self._frozen, True
        try:
            yield self
        finally:
            self._frozen = previous

    def note_tick(self, now: int) -> None:
        """Extend the collection window to include ``now``."""
        if self._first is None or now < self._first:
            self._first = now
        if self._last is None or now > self._last:
            self._last = now

    def append(self, t, inputs, labels) -> None:
        if self._frozen:
            raise DatasetError(f"Dataset of '{self.estimate_name}' is frozen")
        t = np.asarray(t, dtype=np.int64).reshape(-1)
        inputs = np.asarray(inputs, dtype=np.float32).reshape(len(t), -1) if len(t) else np.zeros((0, self.input_width), dtype=np.float32)
        labels = np.asarray(labels, dtype=np.float64).reshape(-1)
        if inputs.shape[1] != self.input_width:
            raise SchemaMismatchError(
                f"Inputs of width {inputs.shape[1]} do not fit dataset width {self.input_width}"
            )
        if len(labels) != len(t):
            raise DatasetError("Offsets and labels differ in length")
        if not len(t):
            return
        self._t.append(t)
        self._inputs.append(inputs)
        self._labels.append(labels)
        for prop in (TrainingDataset.t, TrainingDataset.inputs, TrainingDataset.labels):
            prop.reset(self)

    def append_example(self, t: int, inputs, label: float) -> None:
        self.append([t], np.asarray(inputs)[None, :], [label])

    @cached_property
    def t(self) -> np.ndarray:
        return np.concatenate(self._t) if self._t else np.zeros(0, dtype=np.int64)

    @cached_property
    def inputs(self) -> np.ndarray:
        if not self._inputs:
            return np.zeros((0, self.input_width), dtype=np.float32)
        return np.concatenate(self._inputs)

    @cached_property
    def labels(self) -> np.ndarray:
        return np.concatenate(self._labels) if self._labels else np.zeros(0)

    def examples(self) -> Iterator[TrainingExample]:
        for t, x, y in zip(self.t, self.inputs, self.labels):
            yield TrainingExample(int(t), x, float(y))

    def check_compatible(self, other: "TrainingDataset") -> None:
        if other.estimate_name != self.estimate_name or other.input_width != self.input_width:
            raise SchemaMismatchError(
                f"Dataset '{other.estimate_name}' (width {other.input_width}) does not match "
                f"'{self.estimate_name}' (width {self.input_width})"
            )

    def concat(self, other: "TrainingDataset") -> "TrainingDataset":
        """New dataset holding the examples of both, this one's first."""
        self.check_compatible(other)
        pooled = TrainingDataset(self.estimate_name, self.input_width, self.run_id)
        for source in (self, other):
            if len(source):
                pooled.append(source.t, source.inputs, source.labels)
            for tick in (source._first, source._last):
                if tick is not None:
                    pooled.note_tick(tick)
        return pooled

    def arrays(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.t, self.inputs, self.labels
