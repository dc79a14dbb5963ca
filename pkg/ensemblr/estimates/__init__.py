"""Value estimates: declaration, data collection, training and inference."""

from ensemblr.estimates.estimate import (
    Attachment,
    EstimateContext,
    Feature,
    OutputKind,
    OutputSpec,
    ValueEstimate,
)
from ensemblr.estimates.history import InputHistory
from ensemblr.estimates.dataset import Provenance, TrainingDataset, TrainingExample
from ensemblr.estimates.collector import collect_step
from ensemblr.estimates.estimator import Estimator, EstimatorKind
from ensemblr.estimates.training import (
    TrainingParams,
    train_estimator,
    update_estimator,
)
from ensemblr.estimates.inference import predict_at
from ensemblr.estimates.storage import (
    load_checkpoint,
    read_dataset_csv,
    save_checkpoint,
    write_dataset_csv,
)
from ensemblr.estimates.runtime import EstimateRuntime, context_for

__all__ = [
    "Attachment",
    "EstimateContext",
    "Feature",
    "OutputKind",
    "OutputSpec",
    "ValueEstimate",
    "InputHistory",
    "Provenance",
    "TrainingDataset",
    "TrainingExample",
    "collect_step",
    "Estimator",
    "EstimatorKind",
    "TrainingParams",
    "train_estimator",
    "update_estimator",
    "predict_at",
    "load_checkpoint",
    "read_dataset_csv",
    "save_checkpoint",
    "write_dataset_csv",
    "EstimateRuntime",
    "context_for",
]
