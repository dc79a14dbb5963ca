"""Week-by-week experiment: simulate, collect, train, repeat.

Each week runs seven days under the week's policy while the ``will_arrive``
estimate collects data. After a week, if a later week uses the learned rule,
the estimator is trained on everything collected so far the first time and
updated with the new week afterwards.
"""

import logging
import os
import time
from typing import Any, Dict, List, NamedTuple, Optional

import jsonpickle

from ensemblr.estimates import (
    Estimator,
    EstimateRuntime,
    TrainingDataset,
    TrainingParams,
    save_checkpoint,
    train_estimator,
    update_estimator,
    write_dataset_csv,
)
from ensemblr.factory import (
    WILL_ARRIVE,
    FactorySimulation,
    MetricsRecord,
    build_ml_ensembles,
    build_rigid_ensembles,
    weekly_means,
    write_metrics_csv,
)
from ensemblr.factory.clock import DAYS_PER_WEEK
from ensemblr.harness.boundary import (
    BoundaryDump,
    dump_boundary,
    write_boundary_csv,
    write_cutoffs_csv,
)
from ensemblr.sensors import DiagnosticsSensor, SensorDelegate
from ensemblr.types.models import ExperimentConfig
from ensemblr.types.schemas import ExperimentConfigSchema
from ensemblr.types.settings import Settings
from ensemblr.utils.errors import TrainingError, convert_os_error
from ensemblr.utils.helpers import compute_hash

logger = logging.getLogger(__name__)

METRICS_FILE = "metrics.csv"
BOUNDARY_FILE = "boundary.csv"
CUTOFFS_FILE = "boundary-cutoffs.csv"
SUMMARY_FILE = "summary.json"
DATASETS_DIR = "datasets"
CHECKPOINTS_DIR = "checkpoints"


class ExperimentResult(NamedTuple):
    run_id: str
    out_dir: str
    records: List[MetricsRecord]
    model: Optional[Estimator]
    boundary: Optional[BoundaryDump]
    summary: Dict[str, Any]


def config_document(config: ExperimentConfig) -> Dict[str, Any]:
    """camelCase form of the config, output directory excluded."""
    document = ExperimentConfigSchema().dump(config)
    document.pop("out", None)
    return document


def run_id_of(config: ExperimentConfig) -> str:
    return compute_hash(config_document(config))


def training_params(config: ExperimentConfig) -> TrainingParams:
    training = config.training
    return TrainingParams(
        batch_size=training.batch_size,
        learning_rate=training.learning_rate,
        epochs=training.epochs,
        hidden_units=training.hidden_units,
        seed=config.seed,
    )


def _makedirs(path: str) -> None:
    try:
        os.makedirs(path, exist_ok=True)
    except OSError as e:
        raise convert_os_error(e, path) from e


def write_summary(summary: Dict[str, Any], path: str) -> None:
    try:
        with open(path, "w") as f:
            f.write(jsonpickle.dumps(summary, unpicklable=False, indent=2))
            f.write("\n")
    except OSError as e:
        raise convert_os_error(e, path) from e


def run_experiment(config: ExperimentConfig, sensor=None) -> ExperimentResult:
    """Run all weeks of an experiment and write its artifacts.

    Artifacts go to ``config.out`` (the OUTPUT_DIR setting by default):
    ``metrics.csv``, ``datasets/week-<n>.csv``, ``checkpoints/training-<n>.json``,
    ``boundary.csv`` and ``boundary-cutoffs.csv`` when a model was trained, and
    ``summary.json``.

    Raises:
        ArtifactError: an artifact could not be written
    """
    run_id = run_id_of(config)
    out_dir = config.out or Settings.output_dir
    _makedirs(os.path.join(out_dir, DATASETS_DIR))
    _makedirs(os.path.join(out_dir, CHECKPOINTS_DIR))

    diagnostics = DiagnosticsSensor()
    delegate = SensorDelegate(diagnostics)
    if sensor is not None:
        delegate.add(sensor)

    scenario = config.scenario
    rigid = build_rigid_ensembles(scenario, seed=config.seed)
    ml, estimate = build_ml_ensembles(scenario, seed=config.seed)
    estimates = EstimateRuntime(ml, sensor=delegate, run_id=run_id)
    simulation = FactorySimulation(scenario, rigid, ml, estimates, sensor=delegate, seed=config.seed)
    params = training_params(config)
    logger.info(f"Run {run_id}: {config.weeks} weeks, seed {config.seed}, output {out_dir}")

    records: List[MetricsRecord] = []
    collected: Optional[TrainingDataset] = None
    model: Optional[Estimator] = None
    trainings = 0
    started = time.monotonic()
    for week in range(1, config.weeks + 1):
        policy = config.policy_for(week)
        logger.info(f"Week {week}: {policy} policy")
        for offset in range(DAYS_PER_WEEK):
            day = (week - 1) * DAYS_PER_WEEK + offset
            records.extend(simulation.run_day(day, week, policy).records)

        week_data = estimates.take_dataset(WILL_ARRIVE)
        write_dataset_csv(week_data, os.path.join(out_dir, DATASETS_DIR, f"week-{week}.csv"))
        logger.info(f"Week {week}: collected {len(week_data)} examples")

        if config.uses_ml_after(week):
            try:
                if model is None:
                    pooled = collected.concat(week_data) if collected is not None else week_data
                    model = train_estimator(pooled, estimate, params, delegate)
                else:
                    model = update_estimator(
                        model,
                        estimate,
                        week_data,
                        params,
                        retained=collected,
                        full_retrain=config.training.full_retrain,
                        sensor=delegate,
                    )
            except TrainingError as e:
                logger.error(f"Training after week {week} failed: {e}")
            else:
                trainings += 1
                estimates.set_model(WILL_ARRIVE, model)
                save_checkpoint(
                    model,
                    WILL_ARRIVE,
                    os.path.join(out_dir, CHECKPOINTS_DIR, f"training-{trainings}.json"),
                    run_id,
                )
        collected = collected.concat(week_data) if collected is not None else week_data

    write_metrics_csv(records, os.path.join(out_dir, METRICS_FILE))
    boundary = None
    if model is not None:
        boundary = dump_boundary(estimate, model)
        write_boundary_csv(boundary, os.path.join(out_dir, BOUNDARY_FILE))
        write_cutoffs_csv(boundary, os.path.join(out_dir, CUTOFFS_FILE))

    summary = {
        "run_id": run_id,
        "config": config_document(config),
        "trainings": trainings,
        "weeks": weekly_means(records),
        "cutoffs": dict(boundary.kind_cutoffs) if boundary is not None else None,
        "diagnostics": diagnostics.asdict(),
    }
    write_summary(summary, os.path.join(out_dir, SUMMARY_FILE))
    logger.info(f"Run {run_id} finished in {time.monotonic() - started:.1f}s")
    return ExperimentResult(run_id, out_dir, records, model, boundary, summary)
