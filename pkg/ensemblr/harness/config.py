"""Loading experiment configuration from files and command-line flags."""

import logging
import os
from typing import Any, Dict, Mapping, Optional

from benedict import benedict
from marshmallow import ValidationError

from ensemblr.types.models import ExperimentConfig
from ensemblr.types.schemas import ExperimentConfigSchema
from ensemblr.utils.errors import ConfigError

logger = logging.getLogger(__name__)

_READERS = {
    ".yaml": benedict.from_yaml,
    ".yml": benedict.from_yaml,
    ".json": benedict.from_json,
    ".toml": benedict.from_toml,
}


def read_config_file(path: str) -> Dict[str, Any]:
    """Raw mapping of a YAML, JSON or TOML configuration file."""
    _, ext = os.path.splitext(path)
    reader = _READERS.get(ext.lower())
    if reader is None:
        raise ConfigError(f"Unsupported configuration format '{ext}' ({path})")
    if not os.path.isfile(path):
        raise ConfigError(f"Configuration file {path} does not exist")
    try:
        data = reader(path)
    except ValueError as e:
        raise ConfigError(f"Cannot parse {path}: {e}") from e
    return dict(data)


def format_errors(messages: Any, prefix: str = "") -> str:
    """Flatten marshmallow error messages into ``key: message`` pairs."""
    if isinstance(messages, Mapping):
        return "; ".join(
            format_errors(value, f"{prefix}{key}." if not isinstance(value, list) else f"{prefix}{key}")
            for key, value in messages.items()
        )
    if isinstance(messages, list):
        return f"{prefix}: {' '.join(str(m) for m in messages)}"
    return f"{prefix}: {messages}"


def load_config(
    path: Optional[str] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> ExperimentConfig:
    """Build the effective experiment configuration.

    Args:
        path: Configuration file, optional
        overrides: camelCase values from flags; None values are ignored and
            the rest win over the file

    Raises:
        ConfigError: unreadable file or invalid values
    """
    data = read_config_file(path) if path else {}
    for key, value in (overrides or {}).items():
        if value is not None:
            data[key] = value
    try:
        config = ExperimentConfigSchema().load(data)
    except ValidationError as e:
        raise ConfigError(f"Invalid configuration: {format_errors(e.messages)}") from e
    logger.debug(f"Effective configuration: {config.as_dict()}")
    return config


def default_config(**overrides: Any) -> ExperimentConfig:
    """Default configuration with camelCase overrides, for programmatic runs."""
    return load_config(None, overrides)
