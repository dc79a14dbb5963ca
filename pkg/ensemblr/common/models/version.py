import re
from typing import NamedTuple

from ensemblr.utils.errors import SchemaMismatchError


class VersionInfo(NamedTuple):
    major: int
    minor: int
    micro: int
    releaselevel: str


class Version:
    """Parsed ``major.minor.micro[suffix]`` version, used to gate checkpoint loading."""

    _version: str

    info: VersionInfo

    def __init__(self, version: str, version_info: VersionInfo = None) -> None:
        self._version = version
        if version_info is None:
            version_info = Version.parse(self._version)
        self.info = version_info

    def __str__(self) -> str:
        return self._version

    def __repr__(self) -> str:
        return f"Version({self._version!r})"

    @classmethod
    def parse(cls, version: str) -> VersionInfo:
        """Parse a version string."""
        _match = re.match(r"(\d+)\.(\d+)\.(\d+)(.+)?$", str(version))
        if _match is None:
            raise SchemaMismatchError(f"Malformed version string '{version}'")
        _temp = _match.groups()
        return VersionInfo(int(_temp[0]), int(_temp[1]), int(_temp[2]), _temp[3] or "")

    def is_compatible(self, other: "Version") -> bool:
        """Same major version means the layout can be read."""
        return self.info.major == other.info.major
