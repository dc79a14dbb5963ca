"""Unit tests for estimate declarations, data collection and datasets."""

from unittest.mock import Mock

import numpy as np
import pytest

from ensemblr.ensembles import ComponentInstance, ComponentType, FieldSpec, SemanticType
from ensemblr.estimates import (
    Attachment,
    EstimateContext,
    Feature,
    InputHistory,
    OutputSpec,
    TrainingDataset,
    ValueEstimate,
    collect_step,
)
from ensemblr.utils.errors import (
    ContractError,
    DatasetError,
    RegistrationError,
    SchemaMismatchError,
    UnreadableOutputError,
)

TANK = ComponentType(
    "Tank",
    [
        FieldSpec("level", SemanticType.NUMBER),
        FieldSpec("weekday", SemanticType.NUMBER),
        FieldSpec("overflow", SemanticType.BOOLEAN, optional=True),
    ],
)


def _level(context, now):
    return context.component.level


def _overflow(context, now):
    return context.component.overflow


def _estimate(horizon=(1, 2), guard=None, output=None):
    return ValueEstimate(
        "overflow",
        Attachment.COMPONENT,
        [
            Feature.number("level", _level),
            Feature.one_hot("weekday", lambda c, now: c.component.weekday, 3),
        ],
        output or OutputSpec.binary(_overflow),
        horizon=horizon,
        guard=guard,
    )


def _context(tank):
    return EstimateContext((tank.id,), tank)


class TestFeature:
    """Tests for Feature encodings."""

    def test_one_hot(self):
        feature = Feature.one_hot("dow", lambda c, now: 0, 4)
        np.testing.assert_array_equal(feature.encode(2), [0.0, 0.0, 1.0, 0.0])

    def test_one_hot_out_of_range(self):
        feature = Feature.one_hot("dow", lambda c, now: 0, 4)
        with pytest.raises(ContractError, match="outside"):
            feature.encode(4)

    def test_flag(self):
        feature = Feature.flag("present", lambda c, now: True)
        np.testing.assert_array_equal(feature.encode(True), [1.0])
        np.testing.assert_array_equal(feature.encode(None), [0.0])

    def test_width_mismatch_raises(self):
        feature = Feature("pair", lambda c, now: (1, 2), width=3)
        with pytest.raises(ContractError, match="encodes to"):
            feature.encode((1.0, 2.0))


class TestValueEstimate:
    """Tests for ValueEstimate."""

    @pytest.mark.parametrize("horizon", [(0, 3), (4, 2)])
    def test_invalid_horizon_raises(self, horizon):
        with pytest.raises(RegistrationError, match="min_t <= max_t"):
            _estimate(horizon=horizon)

    def test_duplicate_inputs_raise(self):
        with pytest.raises(RegistrationError, match="duplicate inputs"):
            ValueEstimate(
                "x",
                Attachment.COMPONENT,
                [Feature.flag("a", _level), Feature.flag("a", _level)],
                OutputSpec.binary(_overflow),
            )

    def test_widths_and_mask(self):
        estimate = _estimate()
        assert estimate.feature_width == 4
        assert estimate.input_width == 5
        assert estimate.scaling_mask.tolist() == [True, False, False, False, False]

    def test_encode_horizon(self):
        estimate = _estimate(horizon=(1, 5))
        assert estimate.encode_horizon(1) == 0.0
        assert estimate.encode_horizon(5) == 1.0
        assert estimate.encode_horizon(3) == 0.5

    def test_single_offset_horizon_encodes_to_zero(self):
        assert _estimate(horizon=(3, 3)).encode_horizon(3) == 0.0

    def test_encode_requires_all_values(self):
        with pytest.raises(ContractError, match="Missing values"):
            _estimate().encode({"level": 1.0})

    def test_encode_matches_extract(self):
        tank = ComponentInstance("t1", TANK, level=3.5, weekday=1)
        estimate = _estimate()
        np.testing.assert_array_equal(
            estimate.extract(_context(tank), 0),
            estimate.encode({"level": 3.5, "weekday": 1}),
        )

    def test_clamp(self):
        estimate = _estimate(horizon=(2, 4))
        assert [estimate.clamp(t) for t in (1, 3, 9)] == [2, 3, 4]


class TestOutputSpec:
    """Tests for OutputSpec labels."""

    def test_unset_output_is_unreadable(self):
        tank = ComponentInstance("t1", TANK, level=1.0, weekday=0)
        with pytest.raises(UnreadableOutputError, match="not set"):
            OutputSpec.binary(_overflow).label(_context(tank), 0)

    def test_read_errors_are_unreadable(self):
        spec = OutputSpec.continuous(lambda c, now: c.component.missing)
        tank = ComponentInstance("t1", TANK, level=1.0, weekday=0)
        with pytest.raises(UnreadableOutputError):
            spec.label(_context(tank), 0)

    def test_categorical_range(self):
        spec = OutputSpec.categorical(lambda c, now: 3, classes=3)
        with pytest.raises(UnreadableOutputError, match="outside"):
            spec.label(EstimateContext(("x",)), 0)

    def test_categorical_needs_two_classes(self):
        with pytest.raises(RegistrationError):
            OutputSpec.categorical(lambda c, now: 0, classes=1)

    def test_sizes(self):
        assert OutputSpec.binary(_overflow).size == 1
        assert OutputSpec.categorical(_overflow, classes=4).size == 4


class TestInputHistory:
    """Tests for InputHistory."""

    def test_evicts_beyond_horizon(self):
        history = InputHistory(max_t=2)
        for now in range(5):
            history.record("k", now, np.array([now]))
        history.evict(4)
        assert history.at("k", 1) is None
        assert history.at("k", 2) is not None
        assert len(history) == 3

    def test_empty_keys_are_dropped(self):
        history = InputHistory(max_t=1)
        history.record("k", 0, np.zeros(1))
        history.evict(5)
        assert "k" not in history


class TestCollectStep:
    """Tests for collect_step."""

    def setup_method(self):
        self.estimate = _estimate()
        self.tank = ComponentInstance("t1", TANK, level=0.0, weekday=2, overflow=False)
        self.history = InputHistory(self.estimate.max_t)
        self.dataset = TrainingDataset("overflow", self.estimate.input_width)

    def _run(self, ticks, sensor=None):
        counts = []
        for now in ticks:
            self.tank.set("level", float(now))
            self.tank.set("overflow", now >= 2)
            counts.append(
                collect_step(self.estimate, [_context(self.tank)], now, self.history, self.dataset, sensor)
            )
        return counts

    def test_links_snapshots_within_horizon(self):
        assert self._run(range(4)) == [0, 1, 2, 2]
        assert self.dataset.t.tolist() == [1, 1, 2, 1, 2]
        # snapshot level, offset column, label observed at collection time
        assert self.dataset.inputs[:, 0].tolist() == [0.0, 1.0, 0.0, 2.0, 1.0]
        assert self.dataset.inputs[:, -1].tolist() == [0.0, 0.0, 1.0, 0.0, 1.0]
        assert self.dataset.labels.tolist() == [0.0, 1.0, 1.0, 1.0, 1.0]

    def test_guard_excludes_contexts(self):
        self.estimate = _estimate(guard=lambda c, now: now != 1)
        self.history = InputHistory(self.estimate.max_t)
        assert self._run(range(3)) == [0, 0, 1]
        assert self.dataset.t.tolist() == [2]

    def test_unreadable_output_is_skipped(self):
        sensor = Mock()
        tank = ComponentInstance("t2", TANK, level=1.0, weekday=0)
        added = collect_step(self.estimate, [_context(tank)], 0, self.history, self.dataset, sensor)
        assert added == 0
        assert ("t2",) in self.history
        sensor.on_estimate_skipped.assert_called_once_with("overflow", "unreadable_output")

    def test_provenance_covers_ticks(self):
        self._run([5, 6, 7])
        assert self.dataset.provenance.first == 5
        assert self.dataset.provenance.last == 7


class TestTrainingDataset:
    """Tests for TrainingDataset."""

    def test_inputs_are_float32(self):
        dataset = TrainingDataset("x", 2)
        dataset.append([1], [[0.1, 0.2]], [1.0])
        assert dataset.inputs.dtype == np.float32

    def test_width_mismatch_raises(self):
        with pytest.raises(SchemaMismatchError):
            TrainingDataset("x", 2).append([1], [[0.1, 0.2, 0.3]], [1.0])

    def test_label_count_mismatch_raises(self):
        with pytest.raises(DatasetError, match="differ in length"):
            TrainingDataset("x", 1).append([1, 2], [[0.0], [1.0]], [1.0])

    def test_frozen_rejects_appends(self):
        dataset = TrainingDataset("x", 1)
        with dataset.frozen():
            with pytest.raises(DatasetError, match="frozen"):
                dataset.append_example(1, [0.0], 1.0)
        dataset.append_example(1, [0.0], 1.0)
        assert len(dataset) == 1

    def test_concat_keeps_order(self):
        a = TrainingDataset("x", 1)
        a.append_example(1, [1.0], 0.0)
        b = TrainingDataset("x", 1)
        b.append_example(2, [2.0], 1.0)
        pooled = a.concat(b)
        assert pooled.t.tolist() == [1, 2]
        assert len(a) == 1

    def test_concat_rejects_other_estimate(self):
        with pytest.raises(SchemaMismatchError):
            TrainingDataset("x", 1).concat(TrainingDataset("y", 1))

    def test_examples(self):
        dataset = TrainingDataset("x", 1)
        dataset.append_example(3, [0.5], 1.0)
        (example,) = dataset.examples()
        assert example.t == 3
        assert example.label == 1.0
