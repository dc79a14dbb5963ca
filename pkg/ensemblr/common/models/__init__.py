from .version import Version, VersionInfo

__all__ = ["Version", "VersionInfo"]
