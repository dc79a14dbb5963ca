"""Prometheus monitoring backend for simulations.

PrometheusMonitor turns simulation events into Prometheus metrics, in three
categories:

1. Ensemble resolution - step latency, live instances, instance churn,
   notifications, infeasible selections
2. Estimates and training - collected examples, skipped contexts, clamped
   offsets, rule fallbacks, training latency and loss
3. Scenario outcomes - standbys called, cancellations and lateness per policy

Metrics are registered on the given CollectorRegistry (the process-wide
default registry when none is passed).
"""

from typing import Any, Dict, Optional, Sequence
import time
import logging

from prometheus_client import REGISTRY, CollectorRegistry, Counter, Gauge, Histogram

from ensemblr.sensors.base import SimulationSensor

logger = logging.getLogger(__name__)


class PrometheusMonitor(SimulationSensor):
    """Prometheus metrics monitor for simulations.

    Example:
        monitor = PrometheusMonitor(registry=CollectorRegistry())
        state = monitor.on_resolve_start(360)
        monitor.on_resolve_complete(360, state, 12, 310, 2)
    """

    def __init__(self, registry: Optional[CollectorRegistry] = None):
        """Initialize Prometheus metrics."""
        super().__init__()
        registry = registry if registry is not None else REGISTRY

        # =============================================================================
        # Ensemble Resolution Metrics
        # =============================================================================

        self.resolve_duration = Histogram(
            'ensemblr_resolve_duration_seconds',
            'Time spent resolving ensembles for one tick',
            buckets=[0.0005, 0.001, 0.0025, 0.005, 0.01, 0.025, 0.05, 0.1],
            registry=registry,
        )

        self.live_instances = Gauge(
            'ensemblr_live_instances',
            'Live ensemble instances after the last resolution step',
            registry=registry,
        )

        self.permissions = Gauge(
            'ensemblr_permission_entries',
            'Permission entries granted by the last resolution step',
            registry=registry,
        )

        self.instances_created = Counter(
            'ensemblr_instances_created_total',
            'Ensemble instances that became live',
            labelnames=['ensemble_type'],
            registry=registry,
        )

        self.instances_dissolved = Counter(
            'ensemblr_instances_dissolved_total',
            'Ensemble instances that were dissolved',
            labelnames=['ensemble_type'],
            registry=registry,
        )

        self.notifications = Counter(
            'ensemblr_notifications_total',
            'Notifications delivered to components',
            labelnames=['ensemble_type', 'tag'],
            registry=registry,
        )

        self.selection_infeasible = Counter(
            'ensemblr_selection_infeasible_total',
            'Heuristic selections that could not fill a role',
            labelnames=['ensemble_type', 'role'],
            registry=registry,
        )

        # =============================================================================
        # Estimate & Training Metrics
        # =============================================================================

        self.estimate_examples = Counter(
            'ensemblr_estimate_examples_total',
            'Training examples collected',
            labelnames=['estimate'],
            registry=registry,
        )

        self.estimate_skipped = Counter(
            'ensemblr_estimate_skipped_total',
            'Contexts skipped during data collection',
            labelnames=['estimate', 'reason'],
            registry=registry,
        )

        self.estimate_clamped = Counter(
            'ensemblr_estimate_clamped_total',
            'Inference offsets clamped into the horizon',
            labelnames=['estimate'],
            registry=registry,
        )

        self.estimate_fallback = Counter(
            'ensemblr_estimate_fallback_total',
            'Decisions that fell back to a fixed rule',
            labelnames=['estimate', 'reason'],
            registry=registry,
        )

        self.training_duration = Histogram(
            'ensemblr_training_duration_seconds',
            'Time spent training estimators',
            labelnames=['estimate', 'mode', 'result'],
            buckets=[0.1, 0.5, 1.0, 5.0, 10.0, 30.0, 60.0, 300.0],
            registry=registry,
        )

        self.training_loss = Gauge(
            'ensemblr_training_loss',
            'Final mean training loss of the last fit',
            labelnames=['estimate'],
            registry=registry,
        )

        # =============================================================================
        # Scenario Metrics
        # =============================================================================

        self.standbys_called = Counter(
            'ensemblr_standbys_called_total',
            'Standbys called in',
            labelnames=['policy'],
            registry=registry,
        )

        self.canceled = Counter(
            'ensemblr_workers_canceled_total',
            'Workers canceled',
            labelnames=['policy'],
            registry=registry,
        )

        self.lateness = Histogram(
            'ensemblr_shift_lateness',
            'Per-shift squared lateness of a simulated day',
            labelnames=['policy'],
            buckets=[0, 100, 500, 1000, 2500, 5000, 10000, 25000],
            registry=registry,
        )

    def on_resolve_start(self, now: int) -> Dict[str, Any]:
        return {'start_time': time.monotonic()}

    def on_resolve_complete(self, now, state, instances, permissions, notifications) -> None:
        if state and 'start_time' in state:
            self.resolve_duration.observe(time.monotonic() - state['start_time'])
        self.live_instances.set(instances)
        self.permissions.set(permissions)

    def on_instance_created(self, ensemble_type: str, now: int) -> None:
        self.instances_created.labels(ensemble_type=ensemble_type).inc()

    def on_instance_dissolved(self, ensemble_type: str, now: int) -> None:
        self.instances_dissolved.labels(ensemble_type=ensemble_type).inc()

    def on_notification_delivered(self, ensemble_type: str, tag: str) -> None:
        self.notifications.labels(ensemble_type=ensemble_type, tag=tag).inc()

    def on_selection_infeasible(self, ensemble_type: str, role: str, now: int) -> None:
        self.selection_infeasible.labels(ensemble_type=ensemble_type, role=role).inc()

    def on_estimate_collected(self, estimate: str, examples: int) -> None:
        self.estimate_examples.labels(estimate=estimate).inc(examples)

    def on_estimate_skipped(self, estimate: str, reason: str) -> None:
        self.estimate_skipped.labels(estimate=estimate, reason=reason).inc()

    def on_estimate_clamped(self, estimate: str, offset: int, clamped: int) -> None:
        self.estimate_clamped.labels(estimate=estimate).inc()

    def on_estimate_fallback(self, estimate: str, reason: str) -> None:
        self.estimate_fallback.labels(estimate=estimate, reason=reason).inc()

    def on_training_start(self, estimate: str, examples: int, mode: str) -> Dict[str, Any]:
        return {'start_time': time.monotonic(), 'mode': mode}

    def on_training_complete(self, estimate, state, loss, success, error=None) -> None:
        state = state or {}
        result = 'success' if success else 'error'
        if 'start_time' in state:
            self.training_duration.labels(
                estimate=estimate, mode=state.get('mode', 'train'), result=result
            ).observe(time.monotonic() - state['start_time'])
        if success and loss is not None:
            self.training_loss.labels(estimate=estimate).set(loss)

    def on_day_complete(self, week: int, day: int, policy: str, records: Sequence[Any]) -> None:
        for record in records:
            self.standbys_called.labels(policy=policy).inc(record.standbys_called)
            self.canceled.labels(policy=policy).inc(record.canceled)
            self.lateness.labels(policy=policy).observe(record.lateness)
