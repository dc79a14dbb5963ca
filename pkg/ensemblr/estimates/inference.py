import logging
from typing import Any, Optional

import numpy as np

from ensemblr.estimates.estimate import EstimateContext, OutputKind, ValueEstimate
from ensemblr.estimates.estimator import Estimator
from ensemblr.utils.errors import ContractError, EstimationError

logger = logging.getLogger(__name__)


def predict_at(
    estimate: ValueEstimate,
    model: Optional[Estimator],
    context: EstimateContext,
    target_time: int,
    now: int,
    sensor=None,
) -> Any:
    """Predict the output of a context at ``target_time`` from its state at ``now``.

    Offsets outside the horizon are clamped into it.

    Returns:
        Probability (binary), class index (categorical) or value (continuous)

    Raises:
        EstimationError: no trained model
        ContractError: target time not after now
    """
    if target_time <= now:
        raise ContractError(f"Target time {target_time} is not after now ({now})")
    if model is None or not model.fitted:
        raise EstimationError(f"'{estimate.name}' has no trained model")
    offset = target_time - now
    clamped = estimate.clamp(offset)
    if clamped != offset:
        logger.debug(f"{estimate.name}: offset {offset} clamped to {clamped}")
        if sensor is not None:
            sensor.on_estimate_clamped(estimate.name, offset, clamped)
    x = estimate.design(estimate.extract(context, now), clamped)
    output = model.predict(x[None, :])[0]
    if estimate.output.kind is OutputKind.CATEGORICAL:
        return int(np.argmax(output))
    return float(output)
