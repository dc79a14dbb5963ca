from typing import Dict, Hashable, Optional

import numpy as np


class InputHistory:
    """Recent input snapshots per context.

    Only offsets up to ``max_t`` are ever linked, so snapshots older than
    that are evicted.
    """

    def __init__(self, max_t: int) -> None:
        self.max_t = max_t
        self._snapshots: Dict[Hashable, Dict[int, np.ndarray]] = {}

    def record(self, key: Hashable, now: int, features: np.ndarray) -> None:
        self._snapshots.setdefault(key, {})[now] = features

    def at(self, key: Hashable, time: int) -> Optional[np.ndarray]:
        snapshots = self._snapshots.get(key)
        return None if snapshots is None else snapshots.get(time)

    def evict(self, now: int) -> None:
        oldest = now - self.max_t
        for key in list(self._snapshots):
            snapshots = self._snapshots[key]
            for time in [t for t in snapshots if t < oldest]:
                del snapshots[time]
            if not snapshots:
                del self._snapshots[key]

    def clear(self) -> None:
        self._snapshots.clear()

    def __len__(self) -> int:
        return sum(len(snapshots) for snapshots in self._snapshots.values())

    def __contains__(self, key: object) -> bool:
        return key in self._snapshots
