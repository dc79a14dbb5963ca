import os
from typing import Any

_TRUE, _FALSE = {"True", "true", "yes", "1"}, {"False", "false", "no", "0"}


def _getenv(name: str, *default: Any) -> Any:
    try:
        v = os.environ[name]
        if v in _TRUE:
            return True
        elif v in _FALSE:
            return False
        else:
            return v
    except KeyError:
        pass
    if default:
        return default[0]
    raise KeyError(name)


# ------------------------------------------------
# ---- Defaults and environment variables ----
# ------------------------------------------------

#: Directory that run artifacts are written to when no --out flag is given
OUTPUT_DIR = str(_getenv("OUTPUT_DIR", "out"))

#: Log line format for command-line runs: plain or json
LOG_FORMAT = str(_getenv("LOG_FORMAT", "plain"))

#: Start the Prometheus metrics endpoint during runs
METRICS_ENABLED = bool(_getenv("METRICS_ENABLED", False))

#: Port of the Prometheus metrics endpoint
METRICS_PORT = int(_getenv("METRICS_PORT", 8000))

#: Exclusive selection strategy: greedy (seeded restarts) or exact (b-matching)
SELECTION_STRATEGY = str(_getenv("SELECTION_STRATEGY", "greedy"))

#: Seeded greedy restarts tried after a failed first greedy pass
SELECTION_RESTARTS = int(_getenv("SELECTION_RESTARTS", 16))

#: Probability below which a binary estimate counts as "will not happen"
DECISION_THRESHOLD = float(_getenv("DECISION_THRESHOLD", 0.5))

#: Version stamped on estimator checkpoints
CHECKPOINT_FORMAT_VERSION = str(_getenv("CHECKPOINT_FORMAT_VERSION", "1.0.0"))


class Settings:
    """Runtime settings"""

    output_dir: str = OUTPUT_DIR
    log_format: str = LOG_FORMAT
    metrics_enabled: bool = METRICS_ENABLED
    metrics_port: int = METRICS_PORT
    selection_strategy: str = SELECTION_STRATEGY
    selection_restarts: int = SELECTION_RESTARTS
    decision_threshold: float = DECISION_THRESHOLD
    checkpoint_format_version: str = CHECKPOINT_FORMAT_VERSION

    def __init__(
        self,
        *args,
        output_dir: str = None,
        log_format: str = None,
        metrics_enabled: bool = None,
        metrics_port: int = None,
        selection_strategy: str = None,
        selection_restarts: int = None,
        decision_threshold: float = None,
        **kwargs,
    ):
        if output_dir is not None:
            self.output_dir = output_dir

        if log_format is not None:
            self.log_format = log_format

        if metrics_enabled is not None:
            self.metrics_enabled = metrics_enabled

        if metrics_port is not None:
            self.metrics_port = metrics_port

        if selection_strategy is not None:
            self.selection_strategy = selection_strategy

        if selection_restarts is not None:
            self.selection_restarts = selection_restarts

        if decision_threshold is not None:
            self.decision_threshold = decision_threshold
