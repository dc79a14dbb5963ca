"""Unit tests for the estimator, training, inference and checkpoints."""

import os
from unittest.mock import Mock

import numpy as np
import pytest

from ensemblr.estimates import (
    Attachment,
    EstimateContext,
    Estimator,
    EstimatorKind,
    Feature,
    OutputSpec,
    TrainingDataset,
    TrainingParams,
    ValueEstimate,
    load_checkpoint,
    predict_at,
    read_dataset_csv,
    save_checkpoint,
    train_estimator,
    update_estimator,
    write_dataset_csv,
)
from ensemblr.types.settings import Settings
from ensemblr.utils.errors import (
    ArtifactError,
    ContractError,
    DatasetError,
    EstimationError,
    SchemaMismatchError,
    TrainingError,
)

PARAMS = TrainingParams(batch_size=16, learning_rate=0.1, epochs=200, hidden_units=8, seed=0)


def _bit_estimate(output=None, name="bit"):
    return ValueEstimate(
        name,
        Attachment.COMPONENT,
        [Feature.flag("bit", lambda c, now: c.component)],
        output or OutputSpec.binary(lambda c, now: c.component),
        horizon=(1, 4),
    )


def _bit_dataset(estimate, n=64, seed=0, name=None):
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, size=n)
    offsets = rng.integers(1, 5, size=n)
    dataset = TrainingDataset(name or estimate.name, estimate.input_width)
    dataset.append(
        offsets,
        np.column_stack([bits, estimate.encode_horizon(offsets)]),
        bits.astype(float),
    )
    return dataset


def _numeric_gradients(model, xs, y, eps=1e-6):
    grads = {}
    for name, value in model.params.items():
        grad = np.zeros_like(value)
        for index in np.ndindex(value.shape):
            original = value[index]
            value[index] = original + eps
            plus = model._loss(model._forward(xs)[2], y)[0]
            value[index] = original - eps
            minus = model._loss(model._forward(xs)[2], y)[0]
            value[index] = original
            grad[index] = (plus - minus) / (2 * eps)
        grads[name] = grad
    return grads


class TestEstimator:
    """Tests for Estimator."""

    def test_dimensions_must_be_positive(self):
        with pytest.raises(ContractError):
            Estimator(EstimatorKind.FEED_FORWARD_BINARY, 0)

    def test_categorical_needs_two_outputs(self):
        with pytest.raises(ContractError, match="two outputs"):
            Estimator(EstimatorKind.FEED_FORWARD_CATEGORICAL, 3, outputs=1)

    def test_scaling_mask_must_match_width(self):
        with pytest.raises(ContractError, match="mask"):
            Estimator(EstimatorKind.FEED_FORWARD_BINARY, 3, scaling_mask=[True])

    def test_same_seed_same_weights(self):
        a = Estimator(EstimatorKind.FEED_FORWARD_BINARY, 3, seed=7)
        b = Estimator(EstimatorKind.FEED_FORWARD_BINARY, 3, seed=7)
        np.testing.assert_array_equal(a.w1, b.w1)

    @pytest.mark.parametrize(
        "kind,outputs",
        [
            (EstimatorKind.FEED_FORWARD_BINARY, 1),
            (EstimatorKind.FEED_FORWARD_CATEGORICAL, 3),
            (EstimatorKind.FEED_FORWARD_REGRESSION, 1),
        ],
    )
    def test_gradients_match_finite_differences(self, kind, outputs):
        rng = np.random.default_rng(1)
        model = Estimator(kind, 4, hidden_units=5, outputs=outputs, seed=2)
        xs = rng.normal(size=(6, 4))
        if kind is EstimatorKind.FEED_FORWARD_CATEGORICAL:
            y = rng.integers(0, outputs, size=6).astype(float)
        elif kind is EstimatorKind.FEED_FORWARD_BINARY:
            y = rng.integers(0, 2, size=6).astype(float)
        else:
            y = rng.normal(size=6)
        _, analytic = model.loss_and_gradients(xs, y)
        numeric = _numeric_gradients(model, xs, y)
        for name in analytic:
            np.testing.assert_allclose(analytic[name], numeric[name], rtol=1e-4, atol=1e-6)

    def test_softmax_rows_sum_to_one(self):
        model = Estimator(EstimatorKind.FEED_FORWARD_CATEGORICAL, 2, outputs=4)
        distribution = model.predict(np.array([[0.3, -1.0], [5.0, 2.0]]))
        np.testing.assert_allclose(distribution.sum(axis=1), 1.0, atol=1e-9)

    def test_scaling_is_frozen_once(self):
        model = Estimator(EstimatorKind.FEED_FORWARD_REGRESSION, 2, scaling_mask=[True, False])
        model.freeze_scaling(np.array([[0.0, 5.0], [2.0, 7.0]]))
        model.freeze_scaling(np.array([[100.0, 0.0]]))
        np.testing.assert_array_equal(model.mean, [1.0, 0.0])
        np.testing.assert_array_equal(model.spread, [1.0, 1.0])

    def test_constant_column_keeps_unit_spread(self):
        model = Estimator(EstimatorKind.FEED_FORWARD_REGRESSION, 1, scaling_mask=[True])
        model.freeze_scaling(np.array([[3.0], [3.0]]))
        assert model.spread.tolist() == [1.0]

    def test_scale_rejects_wrong_width(self):
        model = Estimator(EstimatorKind.FEED_FORWARD_BINARY, 2)
        with pytest.raises(ContractError, match="Expected inputs"):
            model.scale(np.zeros((1, 3)))

    def test_copy_is_independent(self):
        model = Estimator(EstimatorKind.FEED_FORWARD_BINARY, 2)
        clone = model.copy()
        clone.w1[0, 0] += 1.0
        assert model.w1[0, 0] != clone.w1[0, 0]


class TestTraining:
    """Tests for train_estimator and update_estimator."""

    def setup_method(self):
        self.estimate = _bit_estimate()
        self.dataset = _bit_dataset(self.estimate)

    def test_learns_a_separable_problem(self):
        model = train_estimator(self.dataset, self.estimate, PARAMS)
        assert model.fitted
        predictions = model.predict(self.dataset.inputs) >= 0.5
        assert np.mean(predictions == self.dataset.labels.astype(bool)) >= 0.95

    def test_is_deterministic(self):
        a = train_estimator(self.dataset, self.estimate, PARAMS)
        b = train_estimator(self.dataset, self.estimate, PARAMS)
        np.testing.assert_array_equal(a.w2, b.w2)

    def test_empty_dataset_raises(self):
        with pytest.raises(TrainingError, match="No training data"):
            train_estimator(TrainingDataset("bit", 2), self.estimate)

    def test_other_estimate_raises(self):
        with pytest.raises(SchemaMismatchError):
            train_estimator(_bit_dataset(self.estimate, name="other"), self.estimate)

    def test_degenerate_labels_are_reported(self):
        dataset = TrainingDataset("bit", 2)
        dataset.append([1, 2], [[1.0, 0.0], [0.0, 1 / 3]], [1.0, 1.0])
        sensor = Mock()
        sensor.on_training_start.return_value = "state"
        train_estimator(dataset, self.estimate, PARAMS._replace(epochs=1), sensor=sensor)
        sensor.on_degenerate_labels.assert_called_once_with("bit", 1.0)
        sensor.on_training_complete.assert_called_once()
        assert sensor.on_training_complete.call_args[0][3] is True

    def test_dataset_is_frozen_while_training(self, monkeypatch):
        from ensemblr.estimates import training

        seen = []

        def descend(model, dataset, params):
            seen.append(dataset.is_frozen)
            return 0.0

        monkeypatch.setattr(training, "descend", descend)
        train_estimator(self.dataset, self.estimate, PARAMS)
        assert seen == [True]
        assert not self.dataset.is_frozen

    def test_update_leaves_original_untouched(self):
        model = train_estimator(self.dataset, self.estimate, PARAMS._replace(epochs=5))
        before = model.w1.copy()
        updated = update_estimator(
            model, self.estimate, _bit_dataset(self.estimate, seed=1), PARAMS._replace(epochs=5)
        )
        np.testing.assert_array_equal(model.w1, before)
        assert not np.array_equal(updated.w1, before)
        assert updated.fitted

    def test_update_with_retained_data(self):
        model = train_estimator(self.dataset, self.estimate, PARAMS._replace(epochs=5))
        sensor = Mock()
        update_estimator(
            model,
            self.estimate,
            _bit_dataset(self.estimate, n=10, seed=1),
            PARAMS._replace(epochs=1),
            retained=self.dataset,
            sensor=sensor,
        )
        sensor.on_training_start.assert_called_once_with("bit", 74, "update")

    def test_update_rejects_other_estimate(self):
        model = train_estimator(self.dataset, self.estimate, PARAMS._replace(epochs=1))
        with pytest.raises(SchemaMismatchError):
            update_estimator(model, self.estimate, TrainingDataset("bit", 3))

    def test_update_needs_fitted_model(self):
        model = Estimator.for_estimate(self.estimate)
        with pytest.raises(TrainingError, match="no fitted model"):
            update_estimator(model, self.estimate, self.dataset)

    def test_full_retrain(self):
        model = train_estimator(self.dataset, self.estimate, PARAMS._replace(epochs=1))
        fresh = update_estimator(
            model, self.estimate, self.dataset, PARAMS._replace(epochs=1), full_retrain=True
        )
        assert fresh is not model
        assert fresh.fitted


class TestPredictAt:
    """Tests for predict_at."""

    def setup_method(self):
        self.estimate = _bit_estimate()
        self.model = train_estimator(_bit_dataset(self.estimate), self.estimate, PARAMS)
        self.context = EstimateContext(("c",), 1)

    def test_predicts_probability(self):
        p = predict_at(self.estimate, self.model, self.context, 12, 10)
        assert isinstance(p, float)
        assert p > 0.5

    def test_target_must_be_in_the_future(self):
        with pytest.raises(ContractError, match="not after now"):
            predict_at(self.estimate, self.model, self.context, 10, 10)

    def test_untrained_raises(self):
        with pytest.raises(EstimationError, match="no trained model"):
            predict_at(self.estimate, None, self.context, 12, 10)
        with pytest.raises(EstimationError):
            predict_at(self.estimate, Estimator.for_estimate(self.estimate), self.context, 12, 10)

    def test_offsets_are_clamped(self):
        sensor = Mock()
        far = predict_at(self.estimate, self.model, self.context, 100, 10, sensor=sensor)
        edge = predict_at(self.estimate, self.model, self.context, 14, 10)
        assert far == edge
        sensor.on_estimate_clamped.assert_called_once_with("bit", 90, 4)

    def test_categorical_returns_class_index(self):
        estimate = _bit_estimate(OutputSpec.categorical(lambda c, now: c.component, classes=2), "cls")
        model = Estimator.for_estimate(estimate)
        model.fitted = True
        assert predict_at(estimate, model, self.context, 11, 10) in (0, 1)


class TestStorage:
    """Tests for dataset files and checkpoints."""

    def setup_method(self):
        self.estimate = _bit_estimate()
        self.dataset = _bit_dataset(self.estimate, n=20)

    def test_checkpoint_predicts_identically(self, tmp_path):
        model = train_estimator(self.dataset, self.estimate, PARAMS._replace(epochs=10))
        path = str(tmp_path / "bit.json")
        save_checkpoint(model, "bit", path, run_id="r1")
        name, loaded = load_checkpoint(path)
        assert name == "bit"
        assert loaded.fitted
        np.testing.assert_array_equal(loaded.predict(self.dataset.inputs), model.predict(self.dataset.inputs))

    def test_other_major_version_is_refused(self, tmp_path, monkeypatch):
        model = train_estimator(self.dataset, self.estimate, PARAMS._replace(epochs=1))
        path = str(tmp_path / "bit.json")
        save_checkpoint(model, "bit", path)
        monkeypatch.setattr(Settings, "checkpoint_format_version", "2.0.0")
        with pytest.raises(SchemaMismatchError, match="cannot be read"):
            load_checkpoint(path)

    def test_not_a_checkpoint(self, tmp_path):
        path = tmp_path / "x.json"
        path.write_text('{"format": "other"}')
        with pytest.raises(SchemaMismatchError, match="Not an estimator checkpoint"):
            load_checkpoint(str(path))

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "x.json"
        path.write_text("{")
        with pytest.raises(SchemaMismatchError, match="not valid JSON"):
            load_checkpoint(str(path))

    def test_missing_checkpoint(self, tmp_path):
        with pytest.raises(ArtifactError, match="does not exist"):
            load_checkpoint(str(tmp_path / "missing.json"))

    def test_dataset_csv_round_trip(self, tmp_path):
        path = str(tmp_path / "bit.csv")
        write_dataset_csv(self.dataset, path)
        with open(path) as f:
            assert f.readline().strip() == "t,feat_0,feat_1,label"
        loaded = read_dataset_csv(path, "bit")
        np.testing.assert_array_equal(loaded.t, self.dataset.t)
        np.testing.assert_array_equal(loaded.inputs, self.dataset.inputs)
        np.testing.assert_array_equal(loaded.labels, self.dataset.labels)

    def test_empty_dataset_csv(self, tmp_path):
        path = str(tmp_path / "empty.csv")
        write_dataset_csv(TrainingDataset("bit", 2), path)
        assert len(read_dataset_csv(path, "bit")) == 0

    def test_bad_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n1,2\n")
        with pytest.raises(DatasetError, match="unexpected header"):
            read_dataset_csv(str(path), "bit")

    def test_unwritable_path(self, tmp_path):
        with pytest.raises(ArtifactError):
            write_dataset_csv(self.dataset, os.path.join(str(tmp_path), "missing", "x.csv"))
