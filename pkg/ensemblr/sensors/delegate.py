"""Sensor delegation for fan-out pattern.

SensorDelegate routes every simulation event to any number of sensor backends,
for example the in-memory DiagnosticsSensor that feeds run summaries together
with a PrometheusMonitor during long seed sweeps. A failing backend is logged
and never interrupts the simulation.
"""

from typing import Any, Dict, Optional, Sequence, Set
import logging

from ensemblr.sensors.base import SimulationSensor

logger = logging.getLogger(__name__)


class SensorDelegate(SimulationSensor):
    """Delegate sensor that fans out events to multiple backends.

    State from start/complete hook pairs is tracked per sensor, so each
    backend receives its own state dict.

    Example:
        delegate = SensorDelegate()
        delegate.add(DiagnosticsSensor())
        delegate.add(PrometheusMonitor())

        state = delegate.on_resolve_start(now)
        delegate.on_resolve_complete(now, state, 12, 310, 0)
    """

    def __init__(self, *sensors: SimulationSensor) -> None:
        """Initialize sensor delegate, optionally with initial sensors."""
        self._sensors: Set[SimulationSensor] = set()
        for sensor in sensors:
            self.add(sensor)

    def add(self, sensor: SimulationSensor) -> None:
        """Add a sensor to the delegate.

        Args:
            sensor: Sensor instance to add
        """
        logger.debug(f"Adding sensor: {sensor.__class__.__name__}")
        self._sensors.add(sensor)

    def remove(self, sensor: SimulationSensor) -> None:
        """Remove a sensor from the delegate.

        Args:
            sensor: Sensor instance to remove
        """
        logger.debug(f"Removing sensor: {sensor.__class__.__name__}")
        self._sensors.discard(sensor)

    def clear(self) -> None:
        """Remove all sensors from the delegate."""
        logger.debug(f"Clearing {len(self._sensors)} sensors")
        self._sensors.clear()

    def __len__(self) -> int:
        return len(self._sensors)

    def _fan_out(self, hook: str, *args: Any) -> None:
        for sensor in self._sensors:
            try:
                getattr(sensor, hook)(*args)
            except Exception as e:
                logger.error(
                    f"Error in {sensor.__class__.__name__}.{hook}: {e}",
                    exc_info=True,
                )

    def _fan_out_start(self, hook: str, *args: Any) -> Optional[Dict[SimulationSensor, Any]]:
        if not self._sensors:
            return None
        states = {}
        for sensor in self._sensors:
            try:
                state = getattr(sensor, hook)(*args)
                if state is not None:
                    states[sensor] = state
            except Exception as e:
                logger.error(
                    f"Error in {sensor.__class__.__name__}.{hook}: {e}",
                    exc_info=True,
                )
        return states if states else None

    def _fan_out_complete(self, hook: str, state: Optional[Dict[SimulationSensor, Any]], *args: Any, **kwargs: Any) -> None:
        for sensor in self._sensors:
            try:
                sensor_state = state.get(sensor) if state else None
                getattr(sensor, hook)(*args[:1], sensor_state, *args[1:], **kwargs)
            except Exception as e:
                logger.error(
                    f"Error in {sensor.__class__.__name__}.{hook}: {e}",
                    exc_info=True,
                )

    # =============================================================================
    # Ensemble Resolution Hooks
    # =============================================================================

    def on_resolve_start(self, now: int) -> Optional[Dict[SimulationSensor, Any]]:
        """Delegate resolve_start to all sensors."""
        return self._fan_out_start("on_resolve_start", now)

    def on_resolve_complete(self, now, state, instances, permissions, notifications) -> None:
        """Delegate resolve_complete to all sensors with their specific state."""
        self._fan_out_complete("on_resolve_complete", state, now, instances, permissions, notifications)

    def on_instance_created(self, ensemble_type: str, now: int) -> None:
        self._fan_out("on_instance_created", ensemble_type, now)

    def on_instance_dissolved(self, ensemble_type: str, now: int) -> None:
        self._fan_out("on_instance_dissolved", ensemble_type, now)

    def on_notification_delivered(self, ensemble_type: str, tag: str) -> None:
        self._fan_out("on_notification_delivered", ensemble_type, tag)

    def on_selection_infeasible(self, ensemble_type: str, role: str, now: int) -> None:
        self._fan_out("on_selection_infeasible", ensemble_type, role, now)

    # =============================================================================
    # Estimate Hooks
    # =============================================================================

    def on_estimate_collected(self, estimate: str, examples: int) -> None:
        self._fan_out("on_estimate_collected", estimate, examples)

    def on_estimate_skipped(self, estimate: str, reason: str) -> None:
        self._fan_out("on_estimate_skipped", estimate, reason)

    def on_estimate_clamped(self, estimate: str, offset: int, clamped: int) -> None:
        self._fan_out("on_estimate_clamped", estimate, offset, clamped)

    def on_estimate_fallback(self, estimate: str, reason: str) -> None:
        self._fan_out("on_estimate_fallback", estimate, reason)

    # =============================================================================
    # Training Hooks
    # =============================================================================

    def on_training_start(self, estimate: str, examples: int, mode: str) -> Optional[Dict[SimulationSensor, Any]]:
        """Delegate training_start to all sensors."""
        return self._fan_out_start("on_training_start", estimate, examples, mode)

    def on_training_complete(self, estimate, state, loss, success, error=None) -> None:
        """Delegate training_complete to all sensors with their specific state."""
        self._fan_out_complete("on_training_complete", state, estimate, loss, success, error)

    def on_degenerate_labels(self, estimate: str, label: float) -> None:
        self._fan_out("on_degenerate_labels", estimate, label)

    # =============================================================================
    # Scenario Hooks
    # =============================================================================

    def on_day_complete(self, week: int, day: int, policy: str, records: Sequence[Any]) -> None:
        self._fan_out("on_day_complete", week, day, policy, records)

    def asdict(self) -> Dict[str, Any]:
        """Merge the state of all sensors, keyed by sensor class name."""
        return {
            sensor.__class__.__name__: sensor.asdict()
            for sensor in sorted(self._sensors, key=lambda s: s.__class__.__name__)
        }
