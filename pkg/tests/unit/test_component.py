"""Unit tests for the component metamodel."""

import pytest

from ensemblr.ensembles import (
    ComponentInstance,
    ComponentRegistry,
    ComponentType,
    FieldSpec,
    Population,
    SemanticType,
)
from ensemblr.utils.errors import ContractError, RegistrationError

SENSOR = ComponentType(
    "Sensor",
    [
        FieldSpec("reading", SemanticType.NUMBER),
        FieldSpec("active", SemanticType.BOOLEAN),
        FieldSpec("seen_at", SemanticType.TIME, optional=True),
        FieldSpec("neighbours", SemanticType.IDENTIFIERS),
    ],
)


def _sensor(id, **values):
    defaults = dict(reading=1.5, active=True, neighbours=[])
    defaults.update(values)
    return ComponentInstance(id, SENSOR, **defaults)


class TestComponentType:
    """Tests for ComponentType."""

    def test_field_names_keep_declaration_order(self):
        assert SENSOR.field_names == ("reading", "active", "seen_at", "neighbours")

    def test_duplicate_field_raises(self):
        with pytest.raises(RegistrationError, match="Duplicate field"):
            ComponentType("Bad", [("x", SemanticType.NUMBER), ("x", SemanticType.BOOLEAN)])

    def test_tuples_are_accepted_as_field_specs(self):
        t = ComponentType("Door", [("position", SemanticType.POSITION)])
        assert t.field("position").semantic_type is SemanticType.POSITION

    def test_unknown_field_raises(self):
        with pytest.raises(ContractError, match="no field"):
            SENSOR.field("missing")

    def test_coerce_rejects_wrong_type(self):
        with pytest.raises(ContractError, match="expects number"):
            SENSOR.coerce("reading", "high")

    def test_coerce_rejects_bool_as_number(self):
        with pytest.raises(ContractError):
            SENSOR.coerce("reading", True)

    def test_time_must_be_integral(self):
        with pytest.raises(ContractError):
            SENSOR.coerce("seen_at", 1.5)


class TestComponentInstance:
    """Tests for ComponentInstance."""

    def test_fields_read_as_attributes(self):
        s = _sensor("s1", neighbours=["s2", "s3"])
        assert s.reading == 1.5
        assert s.active is True
        assert s.seen_at is None
        assert s.neighbours == frozenset({"s2", "s3"})

    def test_attribute_assignment_is_rejected(self):
        s = _sensor("s1")
        with pytest.raises(AttributeError, match="set()"):
            s.reading = 2.0

    def test_set_validates(self):
        s = _sensor("s1")
        s.set("reading", 3)
        assert s.reading == 3
        with pytest.raises(ContractError):
            s.set("active", "yes")

    def test_required_field_cannot_be_cleared(self):
        s = _sensor("s1")
        with pytest.raises(ContractError, match="required"):
            s.set("reading", None)

    def test_unknown_fields_raise(self):
        with pytest.raises(ContractError, match="no fields"):
            _sensor("s1", colour="red")

    def test_empty_id_raises(self):
        with pytest.raises(ContractError, match="Invalid component id"):
            _sensor("")

    def test_as_dict_sorts_identifier_sets(self):
        s = _sensor("s1", neighbours={"b", "a"})
        assert s.as_dict()["neighbours"] == ["a", "b"]

    def test_update_sets_several_fields(self):
        s = _sensor("s1")
        s.update(active=False, seen_at=10)
        assert (s.active, s.seen_at) == (False, 10)


class TestComponentRegistry:
    """Tests for ComponentRegistry."""

    def test_duplicate_registration_raises(self):
        registry = ComponentRegistry([SENSOR])
        with pytest.raises(RegistrationError, match="already registered"):
            registry.register(SENSOR)

    def test_unknown_type_raises(self):
        with pytest.raises(RegistrationError, match="Unknown component type"):
            ComponentRegistry().get("Sensor")

    def test_contains_and_len(self):
        registry = ComponentRegistry([SENSOR])
        assert "Sensor" in registry
        assert len(registry) == 1


class TestPopulation:
    """Tests for Population."""

    def test_of_type_is_sorted_by_id(self):
        population = Population([_sensor("s3"), _sensor("s1"), _sensor("s2")])
        assert [c.id for c in population.of_type("Sensor")] == ["s1", "s2", "s3"]

    def test_of_type_sees_later_additions(self):
        population = Population([_sensor("s2")])
        population.of_type("Sensor")
        population.add(_sensor("s1"))
        assert [c.id for c in population.of_type("Sensor")] == ["s1", "s2"]

    def test_duplicate_id_raises(self):
        population = Population([_sensor("s1")])
        with pytest.raises(ContractError, match="Duplicate component id"):
            population.add(_sensor("s1"))

    def test_resolve_ids_skips_unknown_and_sorts(self):
        population = Population([_sensor("s1"), _sensor("s2")])
        assert [c.id for c in population.resolve_ids({"s2", "x", "s1"})] == ["s1", "s2"]

    def test_unknown_type_is_empty(self):
        assert Population().of_type("Sensor") == ()
