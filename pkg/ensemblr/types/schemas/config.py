"""Experiment configuration schemas.

Configuration files are flat camelCase mappings. ExperimentConfigSchema routes
scenario and training keys into their nested sections before validation, so
both the flat form and an explicit nested form load.
"""

from typing import Any, Dict
from marshmallow import fields, pre_load, validate, validates_schema, ValidationError
from ensemblr.types.base import BaseSchema
from ensemblr.types.models.config import (
    POLICIES,
    ExperimentConfig,
    ScenarioConfig,
    TrainingConfig,
)
from ensemblr.types.settings import Settings
from ensemblr.utils.helpers import parse_list

SELECTION_STRATEGIES = ("greedy", "exact")


class ScenarioConfigSchema(BaseSchema):
    __model__ = ScenarioConfig

    shifts_count = fields.Integer(
        data_key="shiftsCount", load_default=3, validate=validate.Range(min=1)
    )
    workers_per_shift = fields.Integer(
        data_key="workersPerShift", load_default=100, validate=validate.Range(min=1)
    )
    standbys_per_shift = fields.Integer(
        data_key="standbysPerShift", load_default=60, validate=validate.Range(min=0)
    )
    late_fraction = fields.Float(
        data_key="lateFraction", load_default=0.10, validate=validate.Range(min=0.0, max=1.0)
    )
    bus_offset_business = fields.Integer(data_key="busOffsetBusiness", load_default=-24)
    bus_offset_weekend = fields.Integer(data_key="busOffsetWeekend", load_default=-30)
    late_bus_business = fields.Integer(data_key="lateBusBusiness", load_default=-18)
    late_bus_weekend = fields.Integer(data_key="lateBusWeekend", load_default=-15)
    standby_travel_time = fields.Integer(
        data_key="standbyTravelTime", load_default=30, validate=validate.Range(min=1)
    )
    delay_mean = fields.Float(
        data_key="delayMean", load_default=5.0, validate=validate.Range(min=0.0)
    )
    rigid_cutoff = fields.Integer(
        data_key="rigidCutoff", load_default=16, validate=validate.Range(min=0)
    )
    walk_bus_stop_to_gate = fields.Integer(
        data_key="walkBusStopToGate", load_default=0, validate=validate.Range(min=0)
    )
    walk_gate_to_dispenser = fields.Integer(
        data_key="walkGateToDispenser", load_default=2, validate=validate.Range(min=0)
    )
    walk_dispenser_to_workplace = fields.Integer(
        data_key="walkDispenserToWorkplace", load_default=3, validate=validate.Range(min=0)
    )
    shift_start = fields.Integer(
        data_key="shiftStart", load_default=360, validate=validate.Range(min=0, max=1439)
    )
    shift_duration = fields.Integer(
        data_key="shiftDuration", load_default=480, validate=validate.Range(min=1)
    )
    window_margin = fields.Integer(
        data_key="windowMargin", load_default=60, validate=validate.Range(min=31)
    )
    global_standbys = fields.Boolean(data_key="globalStandbys", load_default=False)
    selection_strategy = fields.String(
        data_key="selectionStrategy",
        load_default=lambda: Settings.selection_strategy,
        validate=validate.OneOf(SELECTION_STRATEGIES),
    )
    selection_restarts = fields.Integer(
        data_key="selectionRestarts",
        load_default=lambda: Settings.selection_restarts,
        validate=validate.Range(min=0),
    )

    @validates_schema
    def validate_offsets(self, data: Dict[str, Any], **kwargs: Any) -> None:
        for name in (
            "bus_offset_business",
            "bus_offset_weekend",
            "late_bus_business",
            "late_bus_weekend",
        ):
            if data.get(name, -1) >= 0:
                raise ValidationError("Bus offsets must be negative.", name)


class TrainingConfigSchema(BaseSchema):
    __model__ = TrainingConfig

    hidden_units = fields.Integer(
        data_key="hiddenUnits", load_default=16, validate=validate.Range(min=1)
    )
    batch_size = fields.Integer(
        data_key="batchSize", load_default=512, validate=validate.Range(min=1)
    )
    learning_rate = fields.Float(
        data_key="learningRate", load_default=0.1, validate=validate.Range(min=0.0, min_inclusive=False)
    )
    epochs = fields.Integer(data_key="epochs", load_default=15, validate=validate.Range(min=0))
    full_retrain = fields.Boolean(data_key="fullRetrain", load_default=False)


class PolicySchedule(fields.Field):
    """Comma separated policies, one per week (`rigid,ml,ml`)."""

    def _deserialize(self, value, attr, data, **kwargs):
        if isinstance(value, str):
            value = parse_list(value)
        if not isinstance(value, (list, tuple)) or not value:
            raise ValidationError("Expected a non-empty list of policies.")
        policies = [str(v).strip().lower() for v in value]
        unknown = [p for p in policies if p not in POLICIES]
        if unknown:
            raise ValidationError(f"Unknown policies: {', '.join(unknown)}.")
        return policies

    def _serialize(self, value, attr, obj, **kwargs):
        return None if value is None else ",".join(value)


class ExperimentConfigSchema(BaseSchema):
    __model__ = ExperimentConfig

    weeks = fields.Integer(data_key="weeks", load_default=3, validate=validate.Range(min=1))
    seed = fields.Integer(data_key="seed", load_default=0, validate=validate.Range(min=0))
    policy_schedule = PolicySchedule(data_key="policySchedule", load_default=None, allow_none=True)
    out = fields.String(data_key="out", load_default=None, allow_none=True)
    scenario = fields.Nested(ScenarioConfigSchema(), data_key="scenario", required=True)
    training = fields.Nested(TrainingConfigSchema(), data_key="training", required=True)

    @pre_load
    def route_flat_keys(self, data: Dict[str, Any], **kwargs: Any) -> Dict[str, Any]:
        """Move flat scenario and training keys into their sections."""
        data = dict(data)
        for section, schema in (
            ("scenario", ScenarioConfigSchema),
            ("training", TrainingConfigSchema),
        ):
            nested = dict(data.get(section) or {})
            for key in schema.data_keys():
                if key in data:
                    nested[key] = data.pop(key)
            data[section] = nested
        return data
