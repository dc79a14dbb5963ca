"""In-memory diagnostics counters.

Collection skips, clamped offsets, rule fallbacks, infeasible selections and
degenerate-label fits are not errors; they are counted here and written to
the run summary.
"""

from collections import Counter
from typing import Any, Dict

from ensemblr.sensors.base import SimulationSensor


class DiagnosticsSensor(SimulationSensor):
    """Counts diagnostic events by key."""

    def __init__(self) -> None:
        self.counters: Counter = Counter()

    def __getitem__(self, key: str) -> int:
        return self.counters[key]

    def on_selection_infeasible(self, ensemble_type: str, role: str, now: int) -> None:
        self.counters[f"selection_infeasible.{ensemble_type}.{role}"] += 1

    def on_notification_delivered(self, ensemble_type: str, tag: str) -> None:
        self.counters[f"notifications.{tag}"] += 1

    def on_estimate_skipped(self, estimate: str, reason: str) -> None:
        self.counters[f"estimate_skipped.{estimate}.{reason}"] += 1

    def on_estimate_clamped(self, estimate: str, offset: int, clamped: int) -> None:
        self.counters[f"estimate_clamped.{estimate}"] += 1

    def on_estimate_fallback(self, estimate: str, reason: str) -> None:
        self.counters[f"estimate_fallback.{estimate}.{reason}"] += 1

    def on_degenerate_labels(self, estimate: str, label: float) -> None:
        self.counters[f"degenerate_labels.{estimate}"] += 1

    def on_training_complete(self, estimate, state, loss, success, error=None) -> None:
        if not success:
            self.counters[f"training_failed.{estimate}"] += 1

    def asdict(self) -> Dict[str, Any]:
        return dict(sorted(self.counters.items()))
