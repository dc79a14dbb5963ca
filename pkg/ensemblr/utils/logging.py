import logging
import sys
from typing import Optional

from pythonjsonlogger.json import JsonFormatter

PLAIN_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
JSON_FIELDS = "%(asctime)s %(levelname)s %(name)s %(message)s"
LOG_FORMATS = ("plain", "json")


def configure_logging(verbose: bool = False, log_format: str = "plain", stream: Optional[object] = None) -> logging.Handler:
    """Install a single root handler for command-line runs.

    Args:
        verbose: Log at DEBUG, which also enables instance dumps and tick traces
        log_format: ``plain`` or ``json``
        stream: Target stream, stderr by default

    Returns:
        The installed handler
    """
    if log_format not in LOG_FORMATS:
        raise ValueError(f"Unknown log format '{log_format}', expected one of {LOG_FORMATS}")
    handler = logging.StreamHandler(stream or sys.stderr)
    if log_format == "json":
        handler.setFormatter(JsonFormatter(JSON_FIELDS))
    else:
        handler.setFormatter(logging.Formatter(PLAIN_FORMAT))
    root = logging.getLogger()
    for existing in list(root.handlers):
        root.removeHandler(existing)
    root.addHandler(handler)
    root.setLevel(logging.DEBUG if verbose else logging.INFO)
    return handler
