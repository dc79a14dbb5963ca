"""Exclusive selection of components for ensemble instances.

Each instance demands an exact number of components; a component serves at
most one instance. The greedy heuristic processes instances by ascending
slack (eligible candidates minus demand) and takes the cheapest candidates,
ties by id. If that pass fails, seeded restarts shuffle the order among
equal-cost candidates and equal-slack instances. ``exact_select`` solves the
same problem completely as a b-matching with augmenting paths.
"""

import logging
from typing import (
    TYPE_CHECKING,
    Callable,
    Dict,
    FrozenSet,
    Hashable,
    Iterable,
    List,
    NamedTuple,
    Optional,
    Sequence,
    Set,
    Tuple,
)

import numpy as np

from ensemblr.types.settings import Settings
from ensemblr.utils.errors import ContractError

if TYPE_CHECKING:  # pragma: no cover
    from ensemblr.ensembles.bindings import Bindings
    from ensemblr.ensembles.component import ComponentInstance

logger = logging.getLogger(__name__)

Assignment = Dict[Hashable, Tuple[str, ...]]
Cost = Callable[[str, Hashable], float]

STRATEGY_GREEDY = "greedy"
STRATEGY_EXACT = "exact"


class SelectionProblem(NamedTuple):
    """Instances with exact demands and candidates with eligibility sets."""

    instances: Tuple[Tuple[Hashable, int], ...]
    candidates: Tuple[Tuple[str, FrozenSet[Hashable]], ...]
    cost: Optional[Cost] = None

    @classmethod
    def build(
        cls,
        instances: Iterable[Tuple[Hashable, int]],
        candidates: Iterable[Tuple[str, Iterable[Hashable]]],
        cost: Optional[Cost] = None,
    ) -> "SelectionProblem":
        instances = tuple((iid, int(demand)) for iid, demand in instances)
        known = {iid for iid, _ in instances}
        if len(known) != len(instances):
            raise ContractError("Duplicate instance ids in selection problem")
        for iid, demand in instances:
            if demand < 0:
                raise ContractError(f"Negative demand for instance {iid!r}")
        built = []
        seen: Set[str] = set()
        for cid, eligible in candidates:
            eligible = frozenset(eligible)
            if cid in seen:
                raise ContractError(f"Duplicate candidate '{cid}'")
            if not eligible:
                raise ContractError(f"Candidate '{cid}' is not eligible anywhere")
            if not eligible <= known:
                raise ContractError(f"Candidate '{cid}' is eligible for unknown instances")
            seen.add(cid)
            built.append((cid, eligible))
        return cls(instances, tuple(built), cost)

    def demand(self, iid: Hashable) -> int:
        return dict(self.instances)[iid]

    def eligible(self) -> Dict[Hashable, List[str]]:
        """Eligible candidate ids per instance, ascending."""
        eligible: Dict[Hashable, List[str]] = {iid: [] for iid, _ in self.instances}
        for cid, instances in self.candidates:
            for iid in instances:
                eligible[iid].append(cid)
        for cids in eligible.values():
            cids.sort()
        return eligible

    def cost_of(self, cid: str, iid: Hashable) -> float:
        return 0.0 if self.cost is None else float(self.cost(cid, iid))

    def split(self) -> List["SelectionProblem"]:
        """Connected components of the eligibility graph.

        Instances sharing no candidate can be solved, and fail, separately.
        """
        index = {iid: i for i, (iid, _) in enumerate(self.instances)}
        root = list(range(len(self.instances)))

        def find(i: int) -> int:
            while root[i] != i:
                root[i] = root[root[i]]
                i = root[i]
            return i

        for _, eligible in self.candidates:
            first, *rest = [index[iid] for iid in eligible]
            for other in rest:
                a, b = find(first), find(other)
                if a != b:
                    root[max(a, b)] = min(a, b)
        groups: Dict[int, List[int]] = {}
        for i in range(len(self.instances)):
            groups.setdefault(find(i), []).append(i)
        parts = []
        for members in groups.values():
            ids = {self.instances[i][0] for i in members}
            parts.append(
                SelectionProblem(
                    tuple(self.instances[i] for i in members),
                    tuple(c for c in self.candidates if c[1] & ids),
                    self.cost,
                )
            )
        return parts


def check_assignment(problem: SelectionProblem, assignment: Assignment) -> List[str]:
    """Violations of exclusivity, eligibility and demand; empty when valid."""
    violations = []
    eligibility = dict(problem.candidates)
    owner: Dict[str, Hashable] = {}
    for iid, demand in problem.instances:
        chosen = assignment.get(iid, ())
        if len(chosen) != demand:
            violations.append(f"{iid!r}: {len(chosen)} selected, demand {demand}")
        for cid in chosen:
            if cid in owner:
                violations.append(f"'{cid}' selected for {owner[cid]!r} and {iid!r}")
            owner[cid] = iid
            if iid not in eligibility.get(cid, ()):
                violations.append(f"'{cid}' is not eligible for {iid!r}")
    unknown = set(assignment) - {iid for iid, _ in problem.instances}
    if unknown:
        violations.append(f"Unknown instances {sorted(map(repr, unknown))}")
    return violations


def _greedy_pass(
    problem: SelectionProblem,
    eligible: Dict[Hashable, List[str]],
    rng: Optional[np.random.Generator],
) -> Optional[Assignment]:
    def tie() -> float:
        return 0.0 if rng is None else float(rng.random())

    order = sorted(
        ((len(eligible[iid]) - demand, tie(), position, iid, demand)
         for position, (iid, demand) in enumerate(problem.instances)),
        key=lambda item: item[:3],
    )
    taken: Set[str] = set()
    assignment: Assignment = {}
    for _, _, _, iid, demand in order:
        if demand == 0:
            assignment[iid] = ()
            continue
        pool = sorted(
            ((problem.cost_of(cid, iid), tie(), cid) for cid in eligible[iid] if cid not in taken)
        )
        if len(pool) < demand:
            return None
        chosen = [cid for _, _, cid in pool[:demand]]
        taken.update(chosen)
        assignment[iid] = tuple(sorted(chosen))
    return assignment


def exclusive_select(
    problem: SelectionProblem, seed: int = 0, restarts: int = 0
) -> Optional[Assignment]:
    """Greedy exclusive selection.

    Returns:
        The assignment, or None when neither the first pass nor any of the
        seeded restarts could meet every demand. None does not prove the
        problem infeasible.
    """
    eligible = problem.eligible()
    assignment = _greedy_pass(problem, eligible, None)
    if assignment is not None or restarts <= 0:
        return assignment
    rng = np.random.default_rng(seed)
    for _ in range(restarts):
        assignment = _greedy_pass(problem, eligible, rng)
        if assignment is not None:
            return assignment
    return None


def exact_select(problem: SelectionProblem) -> Optional[Assignment]:
    """Complete b-matching: every instance demand is replicated into slots
    and slots are matched by augmenting paths, cheaper candidates first.

    Returns:
        An assignment whenever one exists, else None
    """
    eligible = problem.eligible()
    slots: List[Hashable] = []
    for iid, demand in problem.instances:
        slots.extend([iid] * demand)
    preference = {
        iid: sorted(cids, key=lambda cid, iid=iid: (problem.cost_of(cid, iid), cid))
        for iid, cids in eligible.items()
    }
    matched: Dict[str, int] = {}

    def augment(slot: int, seen: Set[str]) -> bool:
        for cid in preference[slots[slot]]:
            if cid in seen:
                continue
            seen.add(cid)
            if cid not in matched or augment(matched[cid], seen):
                matched[cid] = slot
                return True
        return False

    for slot in range(len(slots)):
        if not augment(slot, set()):
            return None
    assignment: Dict[Hashable, List[str]] = {iid: [] for iid, _ in problem.instances}
    for cid, slot in matched.items():
        assignment[slots[slot]].append(cid)
    return {iid: tuple(sorted(cids)) for iid, cids in assignment.items()}


class ExclusiveSelector:
    """Selector of a dynamic role: picks components exclusively across all
    instances of the owning ensemble type.

    Args:
        cost: Preference of a candidate for an instance, lower is better
        strategy: ``greedy`` or ``exact``, the SELECTION_STRATEGY setting by default
        restarts: Seeded greedy restarts, the SELECTION_RESTARTS setting by default
        seed: Seed of the restarts
    """

    def __init__(
        self,
        cost: Optional[Callable[["ComponentInstance", "Bindings"], float]] = None,
        strategy: Optional[str] = None,
        restarts: Optional[int] = None,
        seed: int = 0,
    ) -> None:
        self.cost = cost
        self.strategy = strategy or Settings.selection_strategy
        if self.strategy not in (STRATEGY_GREEDY, STRATEGY_EXACT):
            raise ContractError(f"Unknown selection strategy '{self.strategy}'")
        self.restarts = Settings.selection_restarts if restarts is None else restarts
        self.seed = seed

    def select(self, problem: SelectionProblem) -> Optional[Assignment]:
        if self.strategy == STRATEGY_EXACT:
            return exact_select(problem)
        return exclusive_select(problem, seed=self.seed, restarts=self.restarts)

    def __repr__(self) -> str:
        return f"ExclusiveSelector(strategy={self.strategy!r}, restarts={self.restarts})"
