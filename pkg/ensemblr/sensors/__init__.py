"""Simulation sensor framework.

Hook-based instrumentation of ensemble resolution, estimate collection,
training and scenario progress.

Key components:
- SimulationSensor: Base class defining the lifecycle hooks
- SensorDelegate: Fan-out to multiple sensor backends
- DiagnosticsSensor: In-memory diagnostic counters written to the run summary
- PrometheusMonitor: Prometheus metrics exporter

Usage:
    from ensemblr.sensors import SensorDelegate, DiagnosticsSensor

    diagnostics = DiagnosticsSensor()
    delegate = SensorDelegate(diagnostics)
    delegate.add(PrometheusMonitor())
"""

from ensemblr.sensors.base import SimulationSensor
from ensemblr.sensors.delegate import SensorDelegate
from ensemblr.sensors.diagnostics import DiagnosticsSensor
from ensemblr.sensors.prometheus import PrometheusMonitor
from ensemblr.sensors.server import init_metrics_server

__all__ = [
    'SimulationSensor',
    'SensorDelegate',
    'DiagnosticsSensor',
    'PrometheusMonitor',
    'init_metrics_server',
]
