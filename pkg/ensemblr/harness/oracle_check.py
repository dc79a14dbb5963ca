"""Brute-force cross-checks of the resolver, the data collector, the
selection heuristics and the estimator gradients on small random inputs.

Every suite is seeded and returns a SuiteResult; a non-zero mismatch count
means the fast implementation disagrees with its oracle.
"""

import logging
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence

import numpy as np

from ensemblr.ensembles import (
    Cardinality,
    ComponentInstance,
    ComponentRegistry,
    ComponentType,
    DynamicRoleSpec,
    EnsembleType,
    FieldSpec,
    Population,
    Resolver,
    SemanticType,
    StaticRoleSpec,
)
from ensemblr.ensembles.oracle import brute_force_resolve, signature
from ensemblr.estimates import (
    Attachment,
    EstimateContext,
    Estimator,
    EstimatorKind,
    Feature,
    InputHistory,
    OutputSpec,
    TrainingDataset,
    TrainingParams,
    ValueEstimate,
    collect_step,
)
from ensemblr.estimates.training import descend
from ensemblr.heuristics import check_assignment, exact_select, exclusive_select
from ensemblr.heuristics.bench import random_selection_problem
from ensemblr.utils.errors import ContractError

logger = logging.getLogger(__name__)

GRADIENT_TOLERANCE = 1e-4
GREEDY_SUCCESS_RATE = 0.9


class SuiteResult(NamedTuple):
    name: str
    cases: int
    mismatches: int
    details: List[str]

    @property
    def ok(self) -> bool:
        return self.mismatches == 0


# -----------------------------------------------------------------------------
# Resolution
# -----------------------------------------------------------------------------

RANDOM_TYPES = tuple(
    ComponentType(
        name,
        [FieldSpec("level", SemanticType.NUMBER), FieldSpec("on", SemanticType.BOOLEAN)],
    )
    for name in ("A", "B")
)


def random_population(rng: np.random.Generator, max_size: int = 8) -> Population:
    population = Population()
    for i in range(int(rng.integers(1, max_size + 1))):
        population.add(
            ComponentInstance(
                f"c{i}",
                RANDOM_TYPES[int(rng.integers(len(RANDOM_TYPES)))],
                level=int(rng.integers(0, 10)),
                on=bool(rng.random() < 0.5),
            )
        )
    return population


def _random_condition(rng: np.random.Generator, static_names: Sequence[str]):
    threshold = int(rng.integers(0, 10))
    need_on = bool(rng.random() < 0.3)
    exclude_static = bool(rng.random() < 0.5)
    names = tuple(static_names)

    def condition(c, b, now):
        if c.level < threshold or (need_on and not c.on):
            return False
        return not (exclude_static and any(c.id in b.ids(name) for name in names))

    return condition


def _random_cardinality(rng: np.random.Generator, earlier: Sequence[str]) -> Cardinality:
    draw = rng.random()
    if earlier and draw < 0.25:
        return Cardinality.size_of(earlier[int(rng.integers(len(earlier)))])
    if draw < 0.5:
        return Cardinality.any()
    lo = int(rng.integers(0, 3))
    return Cardinality.between(lo, lo + int(rng.integers(0, 4)))


def _random_dynamic(
    rng: np.random.Generator, prefix: str, count: int, static_names: Sequence[str], earlier: Sequence[str]
) -> List[DynamicRoleSpec]:
    roles = []
    visible = list(earlier)
    for d in range(count):
        name = f"{prefix}{d}"
        roles.append(
            DynamicRoleSpec(
                name,
                RANDOM_TYPES[int(rng.integers(len(RANDOM_TYPES)))].name,
                cardinality=_random_cardinality(rng, visible),
                condition=_random_condition(rng, static_names),
            )
        )
        visible.append(name)
    return roles


def _random_situation(rng: np.random.Generator, static_names: Sequence[str]):
    if rng.random() < 0.4:
        return None
    modulus = int(rng.integers(2, 4))
    names = tuple(static_names)

    def situation(b, now):
        return (sum(c.level for name in names for c in b[name]) + now) % modulus != 0

    return situation


def random_ensemble_types(rng: np.random.Generator, max_types: int = 3) -> List[EnsembleType]:
    """Random types with static roles, condition roles and optional inner types."""
    types = []
    for index in range(int(rng.integers(1, max_types + 1))):
        static = [
            StaticRoleSpec(
                f"s{s}",
                RANDOM_TYPES[int(rng.integers(len(RANDOM_TYPES)))].name,
                Cardinality.exact(1) if rng.random() < 0.8 else Cardinality.between(1, 2),
            )
            for s in range(int(rng.integers(0, 3)))
        ]
        static_names = [role.name for role in static]
        dynamic = _random_dynamic(rng, "d", int(rng.integers(1, 3)), static_names, static_names)
        inner = []
        if rng.random() < 0.3:
            enclosing = static_names + [role.name for role in dynamic]
            inner.append(
                EnsembleType(
                    f"T{index}.inner",
                    dynamic_roles=_random_dynamic(rng, "x", 1, static_names, enclosing),
                )
            )
        types.append(
            EnsembleType(
                f"T{index}",
                static_roles=static,
                situation=_random_situation(rng, static_names),
                dynamic_roles=dynamic,
                inner_types=inner,
            )
        )
    return types


def check_resolution(cases: int = 50, seed: int = 0) -> SuiteResult:
    """Resolver against exhaustive enumeration of every role assignment."""
    rng = np.random.default_rng(seed)
    registry = ComponentRegistry(RANDOM_TYPES)
    details = []
    for case in range(cases):
        population = random_population(rng)
        types = random_ensemble_types(rng)
        now = int(rng.integers(0, 12))
        resolved = frozenset(
            signature(i) for i in Resolver(types, registry).resolve(population, now).instances
        )
        expected = brute_force_resolve(types, population, now)
        if resolved != expected:
            details.append(
                f"case {case}: {len(resolved - expected)} unexpected, "
                f"{len(expected - resolved)} missing instances"
            )
    return SuiteResult("resolution", cases, len(details), details)


# -----------------------------------------------------------------------------
# Data collection
# -----------------------------------------------------------------------------


class _Trace(NamedTuple):
    start: int
    ticks: int
    keys: List[str]
    features: Dict
    labels: Dict
    guards: Dict


def _random_trace(rng: np.random.Generator) -> _Trace:
    start = int(rng.integers(0, 100))
    ticks = int(rng.integers(1, 51))
    keys = [f"ctx{i}" for i in range(int(rng.integers(1, 6)))]
    features, labels, guards = {}, {}, {}
    for now in range(start, start + ticks):
        for key in keys:
            features[key, now] = float(rng.normal())
            labels[key, now] = None if rng.random() < 0.1 else float(rng.normal())
            guards[key, now] = bool(rng.random() < 0.8)
    return _Trace(start, ticks, keys, features, labels, guards)


def _trace_estimate(trace: _Trace, horizon) -> ValueEstimate:
    return ValueEstimate(
        "trace_value",
        Attachment.COMPONENT,
        inputs=[Feature.number("x", lambda ctx, now: trace.features[ctx.key, now])],
        output=OutputSpec.continuous(lambda ctx, now: trace.labels[ctx.key, now]),
        horizon=horizon,
        guard=lambda ctx, now: trace.guards[ctx.key, now],
    )


def expected_examples(estimate: ValueEstimate, trace: _Trace) -> List[tuple]:
    """Nested-loop reference: every guarded snapshot joined with every later
    readable, guarded label within the horizon."""
    examples = []
    end = trace.start + trace.ticks
    for now in range(trace.start, end):
        for key in trace.keys:
            if not trace.guards[key, now] or trace.labels[key, now] is None:
                continue
            for t in range(estimate.min_t, estimate.max_t + 1):
                then = now - t
                if then < trace.start or not trace.guards[key, then]:
                    continue
                inputs = np.asarray(
                    [trace.features[key, then], float(estimate.encode_horizon(t))], dtype=np.float32
                )
                examples.append((t, tuple(inputs.tolist()), trace.labels[key, now]))
    return examples


def check_dataset(cases: int = 20, seed: int = 0) -> SuiteResult:
    """Collector output against the nested-loop reference, example by example."""
    rng = np.random.default_rng(seed)
    details = []
    for case in range(cases):
        trace = _random_trace(rng)
        min_t = int(rng.integers(1, 31))
        horizon = (min_t, int(rng.integers(min_t, 31)))
        estimate = _trace_estimate(trace, horizon)
        history = InputHistory(estimate.max_t)
        dataset = TrainingDataset(estimate.name, estimate.input_width)
        contexts = [EstimateContext(key) for key in trace.keys]
        for now in range(trace.start, trace.start + trace.ticks):
            collect_step(estimate, contexts, now, history, dataset)
        actual = [
            (int(t), tuple(x.tolist()), float(y))
            for t, x, y in zip(dataset.t, dataset.inputs, dataset.labels)
        ]
        expected = expected_examples(estimate, trace)
        if actual != expected:
            details.append(f"case {case}: {len(actual)} examples collected, {len(expected)} expected")
    return SuiteResult("dataset", cases, len(details), details)


# -----------------------------------------------------------------------------
# Selection
# -----------------------------------------------------------------------------


def check_selection(cases: int = 1000, seed: int = 0, restarts: int = 16) -> SuiteResult:
    """Validity of greedy and exact assignments, and greedy success on feasible problems."""
    rng = np.random.default_rng(seed)
    details = []
    feasible = solved = 0
    for case in range(cases):
        problem = random_selection_problem(
            rng,
            candidates=int(rng.integers(1, 11)),
            instances=int(rng.integers(1, 5)),
            density=float(rng.uniform(0.2, 0.8)),
        )
        exact = exact_select(problem)
        greedy = exclusive_select(problem, seed=case, restarts=restarts)
        for label, assignment in (("exact", exact), ("greedy", greedy)):
            if assignment is not None:
                for violation in check_assignment(problem, assignment):
                    details.append(f"case {case} ({label}): {violation}")
        if exact is not None:
            feasible += 1
            solved += greedy is not None
        elif greedy is not None:
            details.append(f"case {case}: greedy solved a problem the exact matcher rejects")
    rate = solved / feasible if feasible else 1.0
    if rate < GREEDY_SUCCESS_RATE:
        details.append(f"greedy solved {solved}/{feasible} feasible problems ({rate:.1%})")
    logger.info(f"selection: greedy solved {solved}/{feasible} feasible problems")
    return SuiteResult("selection", cases, len(details), details)


# -----------------------------------------------------------------------------
# Learning machinery
# -----------------------------------------------------------------------------


def numeric_gradients(model: Estimator, xs: np.ndarray, y: np.ndarray, eps: float = 1e-7) -> Dict[str, np.ndarray]:
    """Central finite differences of the mean loss, parameter by parameter."""
    grads = {}
    for name, value in model.params.items():
        grad = np.zeros_like(value)
        for index in np.ndindex(value.shape):
            original = value[index]
            value[index] = original + eps
            upper = model.loss(xs, y)
            value[index] = original - eps
            lower = model.loss(xs, y)
            value[index] = original
            grad[index] = (upper - lower) / (2 * eps)
        grads[name] = grad
    return grads


def gradient_error(model: Estimator, xs: np.ndarray, y: np.ndarray) -> float:
    """Relative difference between analytic and numeric gradients over all parameters."""
    _, analytic = model.loss_and_gradients(xs, y)
    numeric = numeric_gradients(model, xs, y)
    a = np.concatenate([analytic[name].ravel() for name in sorted(analytic)])
    n = np.concatenate([numeric[name].ravel() for name in sorted(numeric)])
    return float(np.linalg.norm(a - n) / max(np.linalg.norm(a) + np.linalg.norm(n), 1e-8))


def random_estimator_case(rng: np.random.Generator, seed: int):
    kind = list(EstimatorKind)[int(rng.integers(len(EstimatorKind)))]
    width = int(rng.integers(1, 7))
    hidden = int(rng.integers(1, 9))
    outputs = int(rng.integers(2, 5)) if kind is EstimatorKind.FEED_FORWARD_CATEGORICAL else 1
    n = int(rng.integers(1, 11))
    model = Estimator(kind, width, hidden_units=hidden, outputs=outputs, seed=seed)
    xs = rng.normal(size=(n, width))
    if kind is EstimatorKind.FEED_FORWARD_BINARY:
        y = (rng.random(n) < 0.5).astype(float)
    elif kind is EstimatorKind.FEED_FORWARD_CATEGORICAL:
        y = rng.integers(0, outputs, size=n).astype(float)
    else:
        y = rng.normal(size=n)
    return model, xs, y


def separable_accuracy(seed: int = 0, samples: int = 200) -> float:
    """Training accuracy of a binary estimator on a linearly separable set."""
    rng = np.random.default_rng(seed)
    points = rng.uniform(-1.0, 1.0, size=(4 * samples, 2))
    margin = points.sum(axis=1)
    points = points[np.abs(margin) > 0.2][:samples]
    labels = (points.sum(axis=1) > 0).astype(float)
    dataset = TrainingDataset("separable", 2)
    dataset.append(np.ones(len(labels)), points, labels)
    model = Estimator(EstimatorKind.FEED_FORWARD_BINARY, 2, hidden_units=8, seed=seed)
    descend(model, dataset, TrainingParams(batch_size=16, learning_rate=0.1, epochs=200, seed=seed))
    return float(np.mean((model.predict(points) >= 0.5) == (labels == 1.0)))


def check_gradients(cases: int = 100, seed: int = 0) -> SuiteResult:
    """Gradient agreement, separable-set accuracy and softmax normalization."""
    rng = np.random.default_rng(seed)
    details = []
    for case in range(cases):
        model, xs, y = random_estimator_case(rng, seed + case)
        error = gradient_error(model, xs, y)
        if error > GRADIENT_TOLERANCE:
            details.append(f"case {case} ({model.kind.value}): relative gradient error {error:.2e}")
        if model.kind is EstimatorKind.FEED_FORWARD_CATEGORICAL:
            sums = model.predict(xs).sum(axis=1)
            if np.any(np.abs(sums - 1.0) > 1e-6):
                details.append(f"case {case}: class probabilities sum to {sums.tolist()}")
    accuracy = separable_accuracy(seed)
    if accuracy < 0.95:
        details.append(f"separable set reached only {accuracy:.3f} training accuracy")
    return SuiteResult("gradients", cases, len(details), details)


SUITES: Dict[str, Callable[..., SuiteResult]] = {
    "resolution": check_resolution,
    "dataset": check_dataset,
    "selection": check_selection,
    "gradients": check_gradients,
}


def run_suites(names: Optional[Sequence[str]] = None, seed: int = 0) -> List[SuiteResult]:
    """Run the named suites, all of them by default."""
    names = list(SUITES) if not names or "all" in names else list(names)
    unknown = [name for name in names if name not in SUITES]
    if unknown:
        raise ContractError(f"Unknown oracle suites: {', '.join(unknown)}")
    results = []
    for name in names:
        result = SUITES[name](seed=seed)
        level = logging.INFO if result.ok else logging.ERROR
        logger.log(level, f"{name}: {result.cases} cases, {result.mismatches} mismatches")
        for detail in result.details:
            logger.error(f"{name}: {detail}")
        results.append(result)
    return results
