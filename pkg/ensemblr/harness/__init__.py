"""Experiment orchestration: configuration, runs, boundary dumps and oracle checks."""

from ensemblr.harness.config import default_config, load_config
from ensemblr.harness.boundary import (
    BoundaryDump,
    cutoff,
    dump_boundary,
    write_boundary_csv,
    write_cutoffs_csv,
)
from ensemblr.harness.experiment import ExperimentResult, run_experiment
from ensemblr.harness.oracle_check import SUITES, SuiteResult, run_suites

__all__ = [
    "default_config",
    "load_config",
    "BoundaryDump",
    "cutoff",
    "dump_boundary",
    "write_boundary_csv",
    "write_cutoffs_csv",
    "ExperimentResult",
    "run_experiment",
    "SUITES",
    "SuiteResult",
    "run_suites",
]
