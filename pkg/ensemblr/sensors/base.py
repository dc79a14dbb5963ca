"""Base sensor class for simulation monitoring.

This module defines the SimulationSensor class that provides lifecycle hooks
for the events a simulation produces: ensemble resolution, estimate data
collection and inference, training, and finished simulated days. All hooks are
no-ops by default, so subclasses override only the events they care about.

The hook pattern:
- Multi-phase operations come in pairs: on_X_start() and on_X_complete()
- Start hooks return an optional state dict
- Complete hooks receive the state dict from their corresponding start hook
"""

from typing import Any, Dict, Optional, Sequence
import logging

logger = logging.getLogger(__name__)


class SimulationSensor:
    """Base sensor class for simulation monitoring.

    Hooks fall in four groups:
    1. Ensemble resolution (per tick, per instance, notifications, selections)
    2. Estimates (data collection and inference diagnostics)
    3. Training (estimator fits and updates)
    4. Scenario progress (finished days)

    Example:
        class TimingSensor(SimulationSensor):
            def on_resolve_start(self, now: int) -> Dict:
                return {'start_time': time.monotonic()}

            def on_resolve_complete(self, now, state, instances, permissions, notifications):
                logger.info(f"Resolved tick {now} in {time.monotonic() - state['start_time']}s")
    """

    # =============================================================================
    # Ensemble Resolution Hooks
    # =============================================================================

    def on_resolve_start(self, now: int) -> Optional[Dict[str, Any]]:
        """Called when a resolution step begins.

        Args:
            now: Current clock tick

        Returns:
            Optional state dict passed to on_resolve_complete
        """
        pass

    def on_resolve_complete(
        self,
        now: int,
        state: Optional[Dict[str, Any]],
        instances: int,
        permissions: int,
        notifications: int,
    ) -> None:
        """Called when a resolution step completes.

        Args:
            now: Current clock tick
            state: State dict returned from on_resolve_start
            instances: Number of live ensemble instances
            permissions: Number of permission entries granted
            notifications: Number of notifications delivered this step
        """
        pass

    def on_instance_created(self, ensemble_type: str, now: int) -> None:
        """Called when an ensemble instance becomes live."""
        pass

    def on_instance_dissolved(self, ensemble_type: str, now: int) -> None:
        """Called when a previously live instance is not live anymore."""
        pass

    def on_notification_delivered(self, ensemble_type: str, tag: str) -> None:
        """Called for each notification delivered to a component."""
        pass

    def on_selection_infeasible(self, ensemble_type: str, role: str, now: int) -> None:
        """Called when a heuristic selector could not fill a role.

        Args:
            ensemble_type: Ensemble type owning the role
            role: Dynamic role name
            now: Current clock tick
        """
        pass

    # =============================================================================
    # Estimate Hooks
    # =============================================================================

    def on_estimate_collected(self, estimate: str, examples: int) -> None:
        """Called after a collection step appended examples."""
        pass

    def on_estimate_skipped(self, estimate: str, reason: str) -> None:
        """Called when a context was skipped during collection.

        Args:
            estimate: Estimate name
            reason: Why the context was skipped (e.g. unreadable_output)
        """
        pass

    def on_estimate_clamped(self, estimate: str, offset: int, clamped: int) -> None:
        """Called when a queried offset was clamped into the horizon."""
        pass

    def on_estimate_fallback(self, estimate: str, reason: str) -> None:
        """Called when a consumer fell back to a fixed rule instead of a prediction."""
        pass

    # =============================================================================
    # Training Hooks
    # =============================================================================

    def on_training_start(self, estimate: str, examples: int, mode: str) -> Optional[Dict[str, Any]]:
        """Called when an estimator fit or update begins.

        Args:
            estimate: Estimate name
            examples: Number of examples the model is trained on
            mode: train, update or retrain

        Returns:
            Optional state dict passed to on_training_complete
        """
        pass

    def on_training_complete(
        self,
        estimate: str,
        state: Optional[Dict[str, Any]],
        loss: Optional[float],
        success: bool,
        error: Optional[Exception] = None,
    ) -> None:
        """Called when an estimator fit or update finishes.

        Args:
            estimate: Estimate name
            state: State dict returned from on_training_start
            loss: Final mean training loss
            success: Whether training succeeded
            error: Exception if training failed
        """
        pass

    def on_degenerate_labels(self, estimate: str, label: float) -> None:
        """Called when a binary estimate is trained on a single class."""
        pass

    # =============================================================================
    # Scenario Hooks
    # =============================================================================

    def on_day_complete(self, week: int, day: int, policy: str, records: Sequence[Any]) -> None:
        """Called when a simulated day finished and its metrics are known.

        Args:
            week: 1-based week number
            day: Absolute day index
            policy: rigid or ml
            records: MetricsRecords of the day, one per shift
        """
        pass

    # =============================================================================
    # Utility Methods
    # =============================================================================

    def asdict(self) -> Dict[str, Any]:
        """Return sensor state as dictionary.

        Sensors that keep counters override this.
        """
        return {}
