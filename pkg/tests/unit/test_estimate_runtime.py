"""Unit tests for the estimate runtime."""

import numpy as np
import pytest

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
from ensemblr.estimates import (
    Attachment,
    EstimateRuntime,
    Feature,
    OutputSpec,
    TrainingParams,
    ValueEstimate,
    context_for,
    train_estimator,
)
from ensemblr.utils.errors import ContractError, EstimationError, RegistrationError

ZONE = ComponentType("Zone", [FieldSpec("load", SemanticType.NUMBER)])
ROBOT = ComponentType(
    "Robot",
    [FieldSpec("zone", SemanticType.IDENTIFIER), FieldSpec("battery", SemanticType.NUMBER)],
)
REGISTRY = ComponentRegistry([ZONE, ROBOT])


def _in_zone():
    return ValueEstimate(
        "in_zone",
        Attachment.PAIR,
        [Feature.flag("charged", lambda c, now: c.component.battery > 50)],
        OutputSpec.binary(lambda c, now: c.component.zone == c.bindings.zone.id),
        horizon=(1, 2),
    )


def _load():
    return ValueEstimate(
        "load",
        Attachment.ENSEMBLE,
        [Feature.number("load", lambda c, now: c.bindings.zone.load)],
        OutputSpec.continuous(lambda c, now: c.bindings.zone.load),
        horizon=(1, 1),
    )


def _patrol(estimates=(), inner=()):
    return EnsembleType(
        "Patrol",
        static_roles=[StaticRoleSpec("zone", "Zone")],
        dynamic_roles=[
            DynamicRoleSpec(
                "robots",
                "Robot",
                condition=lambda r, b, now: r.zone == b.zone.id,
                estimates=estimates,
            )
        ],
        inner_types=inner,
    )


def _population():
    return Population(
        [
            ComponentInstance("z1", ZONE, load=0.0),
            ComponentInstance("z2", ZONE, load=0.0),
            ComponentInstance("r1", ROBOT, zone="z1", battery=80),
            ComponentInstance("r2", ROBOT, zone="z2", battery=20),
        ]
    )


class TestRegistration:
    """Tests for estimate discovery."""

    def test_names(self):
        runtime = EstimateRuntime([_patrol([_in_zone(), _load()])])
        assert runtime.names == ("in_zone", "load")
        assert runtime.owner("load").ensemble_type.name == "Patrol"

    def test_duplicate_estimate_raises(self):
        inner = EnsembleType(
            "Backup", dynamic_roles=[DynamicRoleSpec("spare", "Robot", estimates=[_in_zone()])]
        )
        with pytest.raises(RegistrationError, match="declared twice"):
            EstimateRuntime([_patrol([_in_zone()], inner=[inner])])

    def test_unknown_estimate_raises(self):
        with pytest.raises(EstimationError, match="Unknown estimate"):
            EstimateRuntime([_patrol()]).estimate("missing")


class TestContexts:
    """Tests for context enumeration."""

    def test_pair_contexts_cover_every_candidate(self):
        runtime = EstimateRuntime([_patrol([_in_zone()])])
        contexts = runtime.contexts("in_zone", _population(), 0)
        assert [(c.component.id, c.bindings.zone.id) for c in contexts] == [
            ("r1", "z1"),
            ("r2", "z1"),
            ("r1", "z2"),
            ("r2", "z2"),
        ]
        assert contexts[0].key == ("r1", contexts[0].bindings.key)

    def test_ensemble_contexts(self):
        runtime = EstimateRuntime([_patrol([_load()])])
        contexts = runtime.contexts("load", _population(), 0)
        assert [c.bindings.zone.id for c in contexts] == ["z1", "z2"]
        assert all(c.component is None for c in contexts)

    def test_inner_contexts_follow_live_parents(self):
        inner = EnsembleType(
            "Backup",
            dynamic_roles=[DynamicRoleSpec("spare", "Robot", Cardinality.any(), estimates=[_in_zone()])],
        )
        patrol = _patrol(inner=[inner])
        population = _population()
        resolution = Resolver([patrol], REGISTRY).resolve(population, 0)
        runtime = EstimateRuntime([patrol])
        assert runtime.contexts("in_zone", population, 0) == []
        contexts = runtime.contexts("in_zone", population, 0, resolution.instances)
        assert len(contexts) == 4
        assert contexts[0].bindings.zone.id == "z1"


class TestCollection:
    """Tests for collection and datasets."""

    def test_collect_and_take(self):
        runtime = EstimateRuntime([_patrol([_in_zone()])], run_id="run")
        population = _population()
        counts = [runtime.collect(population, now)["in_zone"] for now in range(3)]
        assert counts == [0, 4, 8]
        taken = runtime.take_dataset("in_zone")
        assert len(taken) == 12
        assert taken.run_id == "run"
        assert len(runtime.dataset("in_zone")) == 0

    def test_reset_histories(self):
        runtime = EstimateRuntime([_patrol([_in_zone()])])
        population = _population()
        runtime.collect(population, 0)
        runtime.reset_histories()
        assert runtime.collect(population, 1) == {"in_zone": 0}


class TestPrediction:
    """Tests for predictions through the runtime."""

    def test_untrained_raises(self):
        runtime = EstimateRuntime([_patrol([_in_zone()])])
        (context, *_) = runtime.contexts("in_zone", _population(), 0)
        with pytest.raises(EstimationError):
            runtime.predict_for("in_zone", context.bindings, context.component, 1, 0)

    def test_context_for_checks_attachment(self):
        with pytest.raises(ContractError, match="component-ensemble pairs"):
            context_for(_in_zone(), object(), None)
        with pytest.raises(ContractError, match="needs ensemble bindings"):
            context_for(_load(), None)

    def test_set_model_rejects_unknown_estimate(self):
        with pytest.raises(EstimationError):
            EstimateRuntime([_patrol()]).set_model("load", None)

    def test_ensemble_regression_estimate(self):
        runtime = EstimateRuntime([_patrol([_load()])])
        population = _population()
        for now in range(20):
            population["z1"].set("load", 0.1 * now)
            population["z2"].set("load", 0.1 * now + 0.05)
            runtime.collect(population, now)
        dataset = runtime.take_dataset("load")
        assert len(dataset) == 38
        np.testing.assert_allclose(dataset.labels - dataset.inputs[:, 0], 0.1, atol=1e-6)

        estimate = runtime.estimate("load")
        params = TrainingParams(batch_size=8, learning_rate=0.05, epochs=300, hidden_units=16, seed=0)
        runtime.set_model("load", train_estimator(dataset, estimate, params))

        population["z1"].set("load", 1.0)
        (z1, _) = runtime.contexts("load", population, 30)
        predicted = runtime.predict_for("load", z1.bindings, None, 31, 30)
        assert abs(predicted - 1.1) < 0.15
