from .config import (
    ExperimentConfigSchema,
    ScenarioConfigSchema,
    TrainingConfigSchema,
)

__all__ = [
    "ExperimentConfigSchema",
    "ScenarioConfigSchema",
    "TrainingConfigSchema",
]
