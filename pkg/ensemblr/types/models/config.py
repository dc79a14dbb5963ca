from typing import List, Optional
from ensemblr.types.base import BaseModel

POLICY_RIGID = "rigid"
POLICY_ML = "ml"
POLICIES = (POLICY_RIGID, POLICY_ML)


class ScenarioConfig(BaseModel):
    """Smart-factory scenario parameters. Times in minutes.

    Bus offsets are measured at the gate, so ``walk_bus_stop_to_gate``
    defaults to 0 instead of a 3-minute walk from the stop. A nonzero walk
    delays every arrival by that amount.

    With ``global_standbys`` every idle standby is a candidate for every
    shift, so all shifts share one exclusive selection problem. When the
    late workers of all shifts together outnumber the pool, the selection
    is infeasible and no shift calls anyone that tick.
    """

    shifts_count: int
    workers_per_shift: int
    standbys_per_shift: int
    late_fraction: float
    bus_offset_business: int
    bus_offset_weekend: int
    late_bus_business: int
    late_bus_weekend: int
    standby_travel_time: int
    delay_mean: float
    rigid_cutoff: int
    walk_bus_stop_to_gate: int
    walk_gate_to_dispenser: int
    walk_dispenser_to_workplace: int
    shift_start: int
    shift_duration: int
    window_margin: int
    global_standbys: bool
    selection_strategy: str
    selection_restarts: int


class TrainingConfig(BaseModel):
    """Estimator hyperparameters used between weeks."""

    hidden_units: int
    batch_size: int
    learning_rate: float
    epochs: int
    full_retrain: bool


class ExperimentConfig(BaseModel):
    weeks: int
    seed: int
    policy_schedule: Optional[List[str]]
    out: Optional[str]
    scenario: ScenarioConfig
    training: TrainingConfig

    def policy_for(self, week: int) -> str:
        """Policy of a 1-based week.

        Without a schedule week 1 is rigid and every later week uses the
        learned rule. A short schedule repeats its last entry.
        """
        if not self.policy_schedule:
            return POLICY_RIGID if week == 1 else POLICY_ML
        index = min(week, len(self.policy_schedule)) - 1
        return self.policy_schedule[index]

    def uses_ml_after(self, week: int) -> bool:
        """Whether any week after the given one runs the learned rule."""
        return any(
            self.policy_for(later) == POLICY_ML
            for later in range(week + 1, self.weeks + 1)
        )
