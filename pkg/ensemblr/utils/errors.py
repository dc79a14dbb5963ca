import errno
from typing import Optional


class EnsemblrError(Exception):
    """Base class for all framework errors."""


class RegistrationError(EnsemblrError):
    """Component or ensemble type could not be registered."""


class ActionError(EnsemblrError):
    """An ensemble action tried to do something actions may not do."""


class EstimationError(EnsemblrError):
    """An estimate was queried before it had a trained model."""


class UnreadableOutputError(EstimationError):
    """The output attribute of an estimate context could not be read."""


class ContractError(EnsemblrError):
    """A caller broke an operation's precondition."""


class TrainingError(EnsemblrError):
    """Training could not start or could not finish."""


class SchemaMismatchError(EnsemblrError):
    """Data or a checkpoint does not match the estimator it is used with."""


class DatasetError(EnsemblrError):
    """A training dataset was misused or could not be parsed."""


class ConfigError(EnsemblrError):
    """Invalid configuration file or flag values."""


class ArtifactError(EnsemblrError):
    """A run artifact could not be written or read."""


_TRANSIENT_ERRNOS = {errno.EAGAIN, errno.EINTR, errno.EBUSY}


def is_transient(ex: OSError) -> bool:
    return ex.errno in _TRANSIENT_ERRNOS


def convert_os_error(ex: OSError, path: Optional[str] = None) -> ArtifactError:
    """
    Convert an OSError raised while handling run artifacts into an ArtifactError.

    Args:
        ex: The OSError to convert
        path: Artifact path involved, if the error does not carry one

    Returns:
        ArtifactError with a one-line, serializable message
    """
    target = path or ex.filename or "<unknown>"
    reason = ex.strerror or str(ex)
    kind = "transient" if is_transient(ex) else "permanent"
    return ArtifactError(f"I/O error on {target} ({kind}): {reason}")
