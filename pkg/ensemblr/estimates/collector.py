"""Time-shifted training data collection.

Once per tick, after resolution: every context passing the guard records its
current inputs, then its current output becomes the label of every earlier
snapshot of the same context whose offset lies within the horizon.
"""

import logging
from typing import Iterable

import numpy as np

from ensemblr.estimates.dataset import TrainingDataset
from ensemblr.estimates.estimate import EstimateContext, ValueEstimate
from ensemblr.estimates.history import InputHistory
from ensemblr.utils.errors import UnreadableOutputError

logger = logging.getLogger(__name__)

SKIP_UNREADABLE = "unreadable_output"


def collect_step(
    estimate: ValueEstimate,
    contexts: Iterable[EstimateContext],
    now: int,
    history: InputHistory,
    dataset: TrainingDataset,
    sensor=None,
) -> int:
    """Run one collection step.

    Returns:
        Number of examples appended
    """
    offsets = []
    rows = []
    labels = []
    for context in contexts:
        if not estimate.accepts(context, now):
            continue
        history.record(context.key, now, estimate.extract(context, now))
        try:
            label = estimate.output.label(context, now)
        except UnreadableOutputError as e:
            logger.debug(f"{estimate.name}: skipped {context.key!r} at {now}: {e}")
            if sensor is not None:
                sensor.on_estimate_skipped(estimate.name, SKIP_UNREADABLE)
            continue
        for t in range(estimate.min_t, estimate.max_t + 1):
            snapshot = history.at(context.key, now - t)
            if snapshot is not None:
                offsets.append(t)
                rows.append(estimate.design(snapshot, t))
                labels.append(label)
    history.evict(now)
    dataset.note_tick(now)
    if rows:
        dataset.append(offsets, np.vstack(rows), labels)
        if sensor is not None:
            sensor.on_estimate_collected(estimate.name, len(rows))
    return len(rows)
