from typing import Callable, Dict, Hashable, Optional, Sequence, TypeVar

import numpy as np

from ensemblr.utils.errors import ContractError

C = TypeVar("C", bound=Hashable)
I = TypeVar("I", bound=Hashable)


def partition(
    components: Sequence[C],
    ensembles: Sequence[I],
    affinity: Callable[[C, I], float],
    seed: Optional[int] = None,
) -> Dict[C, I]:
    """Split components among known ensemble instances.

    Each component, in the given order, goes to the instance it has the
    highest affinity with. Ties go to the least loaded instance, remaining
    ties round-robin (or seeded random when a seed is given).
    """
    if not ensembles:
        raise ContractError("partition needs at least one ensemble instance")
    rng = None if seed is None else np.random.default_rng(seed)
    load = [0] * len(ensembles)
    cursor = 0
    result: Dict[C, I] = {}
    for component in components:
        scores = [float(affinity(component, ensemble)) for ensemble in ensembles]
        best = max(scores)
        tied = [i for i, score in enumerate(scores) if score == best]
        lightest = min(load[i] for i in tied)
        tied = [i for i in tied if load[i] == lightest]
        if len(tied) == 1:
            chosen = tied[0]
        elif rng is not None:
            chosen = tied[int(rng.integers(len(tied)))]
        else:
            # first tied instance at or after the cursor
            chosen = min(tied, key=lambda i: (i - cursor) % len(ensembles))
        cursor = (chosen + 1) % len(ensembles)
        load[chosen] += 1
        result[component] = ensembles[chosen]
    return result
