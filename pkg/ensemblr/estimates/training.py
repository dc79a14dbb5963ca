"""Estimator training and updates.

Mini-batch gradient descent with a seeded permutation every epoch, so
training is deterministic given the dataset order and the seed.
"""

import logging
from typing import NamedTuple, Optional

import numpy as np

from ensemblr.estimates.dataset import TrainingDataset
from ensemblr.estimates.estimate import OutputKind, ValueEstimate
from ensemblr.estimates.estimator import Estimator
from ensemblr.utils.errors import SchemaMismatchError, TrainingError

logger = logging.getLogger(__name__)


class TrainingParams(NamedTuple):
    batch_size: int = 32
    learning_rate: float = 0.01
    epochs: int = 50
    hidden_units: int = 16
    seed: int = 0


def descend(model: Estimator, dataset: TrainingDataset, params: TrainingParams) -> float:
    """Run gradient descent in place.

    Returns:
        Mean loss over the whole dataset after the last epoch
    """
    _, inputs, labels = dataset.arrays()
    n = len(labels)
    if n == 0:
        return float("nan")
    rng = np.random.default_rng(params.seed)
    batch = max(1, params.batch_size)
    for epoch in range(params.epochs):
        order = rng.permutation(n)
        for start in range(0, n, batch):
            index = order[start:start + batch]
            xs = model.scale(inputs[index])
            _, grads = model.loss_and_gradients(xs, labels[index])
            model.step(grads, params.learning_rate)
        if logger.isEnabledFor(logging.DEBUG):
            logger.debug(f"epoch {epoch + 1}/{params.epochs}: loss {model.loss(inputs, labels):.6f}")
    return model.loss(inputs, labels)


def _check_dataset(dataset: TrainingDataset, estimate: ValueEstimate) -> None:
    if dataset.estimate_name != estimate.name:
        raise SchemaMismatchError(
            f"Dataset of '{dataset.estimate_name}' cannot train '{estimate.name}'"
        )
    if dataset.input_width != estimate.input_width:
        raise TrainingError(
            f"Dataset inputs have width {dataset.input_width}, "
            f"'{estimate.name}' expects {estimate.input_width}"
        )


def _warn_degenerate(dataset: TrainingDataset, estimate: ValueEstimate, sensor=None) -> None:
    if estimate.output.kind is not OutputKind.BINARY:
        return
    values = np.unique(dataset.labels)
    if len(values) == 1:
        logger.warning(
            f"'{estimate.name}' is trained on a single label ({values[0]:g}); "
            f"the model will not discriminate"
        )
        if sensor is not None:
            sensor.on_degenerate_labels(estimate.name, float(values[0]))


def train_estimator(
    dataset: TrainingDataset,
    estimate: ValueEstimate,
    params: TrainingParams = TrainingParams(),
    sensor=None,
) -> Estimator:
    """Fit a new estimator.

    Raises:
        TrainingError: empty dataset or inconsistent dimensions
    """
    if len(dataset) == 0:
        raise TrainingError(f"No training data for '{estimate.name}'")
    _check_dataset(dataset, estimate)
    state = sensor.on_training_start(estimate.name, len(dataset), "train") if sensor else None
    try:
        with dataset.frozen():
            _warn_degenerate(dataset, estimate, sensor)
            model = Estimator.for_estimate(estimate, params.hidden_units, params.seed)
            model.freeze_scaling(dataset.inputs)
            loss = descend(model, dataset, params)
            model.fitted = True
    except Exception as e:
        if sensor:
            sensor.on_training_complete(estimate.name, state, None, False, e)
        raise
    logger.info(f"Trained '{estimate.name}' on {len(dataset)} examples, loss {loss:.6f}")
    if sensor:
        sensor.on_training_complete(estimate.name, state, loss, True)
    return model


def update_estimator(
    model: Estimator,
    estimate: ValueEstimate,
    new_data: TrainingDataset,
    params: TrainingParams = TrainingParams(),
    retained: Optional[TrainingDataset] = None,
    full_retrain: bool = False,
    sensor=None,
) -> Estimator:
    """Continue training on retained plus new data.

    The given model is left untouched. With ``full_retrain`` a fresh model is
    fitted on the pooled data instead.

    Raises:
        SchemaMismatchError: new data of another estimate or width
    """
    if not model.fitted:
        raise TrainingError(f"'{estimate.name}' has no fitted model to update")
    if new_data.input_width != model.input_width or new_data.estimate_name != estimate.name:
        raise SchemaMismatchError(
            f"Data of '{new_data.estimate_name}' (width {new_data.input_width}) does not fit "
            f"the '{estimate.name}' model (width {model.input_width})"
        )
    pooled = retained.concat(new_data) if retained is not None else new_data
    if full_retrain:
        return train_estimator(pooled, estimate, params, sensor)

    updated = model.copy()
    if len(pooled) == 0 or params.epochs == 0:
        return updated
    state = sensor.on_training_start(estimate.name, len(pooled), "update") if sensor else None
    try:
        with pooled.frozen():
            _warn_degenerate(pooled, estimate, sensor)
            loss = descend(updated, pooled, params)
    except Exception as e:
        if sensor:
            sensor.on_training_complete(estimate.name, state, None, False, e)
        raise
    logger.info(f"Updated '{estimate.name}' on {len(pooled)} examples, loss {loss:.6f}")
    if sensor:
        sensor.on_training_complete(estimate.name, state, loss, True)
    return updated
