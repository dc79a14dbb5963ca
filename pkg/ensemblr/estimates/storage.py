"""Dataset CSV and estimator checkpoint files.

Datasets: header ``t,feat_0,...,feat_{n-1},label``, one example per row.

Checkpoints are JSON documents::

    {
      "format": "ensemblr-estimator",
      "version": "1.0.0",
      "estimate": "will_arrive",
      "kind": "feedForwardBinary",
      "input_width": 9, "hidden_units": 16, "outputs": 1,
      "weights": {"w1": [[...]], "b1": [...], "w2": [[...]], "b2": [...]},
      "scaling": {"mean": [...], "spread": [...], "mask": [...]},
      "run_id": "..."
    }

Floats are written in shortest round-trip form, so a loaded model predicts
exactly like the saved one. Checkpoints of another major version are refused.
"""

import logging
import os
from typing import Any, Dict, Optional, Tuple

import jsonpickle
import numpy as np

from ensemblr.common.models import Version
from ensemblr.estimates.dataset import TrainingDataset
from ensemblr.estimates.estimator import Estimator, EstimatorKind
from ensemblr.types.settings import Settings
from ensemblr.utils.errors import (
    ArtifactError,
    DatasetError,
    SchemaMismatchError,
    convert_os_error,
)

logger = logging.getLogger(__name__)

CHECKPOINT_FORMAT = "ensemblr-estimator"


def csv_header(width: int) -> str:
    return ",".join(["t"] + [f"feat_{i}" for i in range(width)] + ["label"])


def write_dataset_csv(dataset: TrainingDataset, path: str) -> None:
    width = dataset.input_width
    data = np.column_stack(
        [dataset.t.astype(float), dataset.inputs.astype(float), dataset.labels]
    ) if len(dataset) else np.zeros((0, width + 2))
    try:
        with open(path, "w", newline="") as f:
            np.savetxt(
                f,
                data,
                delimiter=",",
                fmt=["%d"] + ["%.9g"] * width + ["%.17g"],
                header=csv_header(width),
                comments="",
            )
    except OSError as e:
        raise convert_os_error(e, path) from e
    logger.debug(f"Wrote {len(dataset)} examples to {path}")


def read_dataset_csv(path: str, estimate_name: str, run_id: Optional[str] = None) -> TrainingDataset:
    try:
        with open(path) as f:
            header = f.readline().strip()
            rows = [line for line in f if line.strip()]
    except OSError as e:
        raise convert_os_error(e, path) from e
    columns = header.split(",")
    if len(columns) < 2 or columns[0] != "t" or columns[-1] != "label":
        raise DatasetError(f"{path}: unexpected header '{header}'")
    width = len(columns) - 2
    if header != csv_header(width):
        raise DatasetError(f"{path}: unexpected header '{header}'")
    dataset = TrainingDataset(estimate_name, width, run_id)
    if rows:
        try:
            data = np.loadtxt(rows, delimiter=",", ndmin=2)
        except ValueError as e:
            raise DatasetError(f"{path}: {e}") from e
        if data.shape[1] != width + 2:
            raise DatasetError(f"{path}: rows do not match the header")
        dataset.append(data[:, 0].astype(np.int64), data[:, 1:-1], data[:, -1])
    return dataset


def checkpoint_document(model: Estimator, estimate_name: str, run_id: Optional[str] = None) -> Dict[str, Any]:
    return {
        "format": CHECKPOINT_FORMAT,
        "version": Settings.checkpoint_format_version,
        "estimate": estimate_name,
        "kind": model.kind.value,
        "input_width": model.input_width,
        "hidden_units": model.hidden_units,
        "outputs": model.outputs,
        "weights": {name: value.tolist() for name, value in model.params.items()},
        "scaling": {
            "mean": None if model.mean is None else model.mean.tolist(),
            "spread": None if model.spread is None else model.spread.tolist(),
            "mask": model.scaling_mask.tolist(),
        },
        "run_id": run_id,
    }


def save_checkpoint(model: Estimator, estimate_name: str, path: str, run_id: Optional[str] = None) -> None:
    document = checkpoint_document(model, estimate_name, run_id)
    try:
        with open(path, "w") as f:
            f.write(jsonpickle.dumps(document, unpicklable=False, indent=2))
    except OSError as e:
        raise convert_os_error(e, path) from e
    logger.info(f"Saved '{estimate_name}' checkpoint to {path}")


def model_from_document(document: Dict[str, Any]) -> Tuple[str, Estimator]:
    if not isinstance(document, dict) or document.get("format") != CHECKPOINT_FORMAT:
        raise SchemaMismatchError("Not an estimator checkpoint")
    found = Version(str(document.get("version")))
    expected = Version(Settings.checkpoint_format_version)
    if not found.is_compatible(expected):
        raise SchemaMismatchError(f"Checkpoint version {found} cannot be read (expected {expected.info.major}.x)")
    try:
        model = Estimator(
            EstimatorKind(document["kind"]),
            int(document["input_width"]),
            hidden_units=int(document["hidden_units"]),
            outputs=int(document["outputs"]),
            scaling_mask=np.array(document["scaling"]["mask"], dtype=bool),
        )
        model.set_params({name: np.array(value, dtype=float) for name, value in document["weights"].items()})
        scaling = document["scaling"]
        if scaling["mean"] is not None:
            model.mean = np.array(scaling["mean"], dtype=float)
            model.spread = np.array(scaling["spread"], dtype=float)
    except (KeyError, TypeError, ValueError) as e:
        raise SchemaMismatchError(f"Malformed checkpoint: {e}") from e
    model.fitted = True
    return document["estimate"], model


def load_checkpoint(path: str) -> Tuple[str, Estimator]:
    """Load a checkpoint.

    Returns:
        (estimate name, fitted estimator)
    """
    if not os.path.exists(path):
        raise ArtifactError(f"Checkpoint {path} does not exist")
    try:
        with open(path) as f:
            document = jsonpickle.decode(f.read())
    except OSError as e:
        raise convert_os_error(e, path) from e
    except ValueError as e:
        raise SchemaMismatchError(f"{path} is not valid JSON: {e}") from e
    return model_from_document(document)
