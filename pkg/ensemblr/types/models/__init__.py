from .config import (
    POLICIES,
    POLICY_ML,
    POLICY_RIGID,
    ExperimentConfig,
    ScenarioConfig,
    TrainingConfig,
)

__all__ = [
    "POLICIES",
    "POLICY_ML",
    "POLICY_RIGID",
    "ExperimentConfig",
    "ScenarioConfig",
    "TrainingConfig",
]
