"""HTTP server for exposing Prometheus metrics.

Exposes the /metrics endpoint of the default registry from a daemon thread,
so long experiment runs can be scraped while they progress.
"""

import logging
from threading import Thread
from prometheus_client import start_http_server

from ensemblr.types.settings import Settings

logger = logging.getLogger(__name__)


def start_metrics_server(port: int) -> None:
    """Start Prometheus metrics HTTP server.

    Args:
        port: Port to listen on
    """
    try:
        start_http_server(port)
        logger.info(f"Prometheus metrics available at http://0.0.0.0:{port}/metrics")
    except OSError as e:
        logger.error(f"Failed to start metrics server on port {port}: {e}")
        raise


def init_metrics_server(port: int = None) -> Thread:
    """Start the metrics server in a daemon thread.

    Falls back to the METRICS_PORT setting when no port is given.
    """
    port = port if port is not None else Settings.metrics_port
    thread = Thread(target=start_metrics_server, args=(port,), daemon=True)
    thread.start()
    return thread
