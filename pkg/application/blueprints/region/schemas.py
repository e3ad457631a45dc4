from application.extensions import ma # Import Marshmallow (ma) from the extensions setup.
from marshmallow import fields, validate, pre_load, post_load # Import fields, validators and load hooks.
from application.models import ChannelKind, ConstraintLabel, Optimality, Provenance, RegimeTag # Import enums dumped by value.
from application.utils.scenario import build_scenario # Import helper that normalizes a configuration and its alpha pair.


# Schema for the channel, antennas and alpha every engine request starts with
class ScenarioSchema(ma.Schema):

    # Channel kind: broadcast or interference channel
    channel = fields.String(required=True, validate=validate.OneOf([kind.value for kind in ChannelKind]))

    # Antenna counts: (M, N1, N2) for bc, (M1, M2, N1, N2) for ic
    antennas = fields.List(fields.Integer(strict=True), required=True, validate=validate.Length(min=3, max=4))

    # CSIT qualities (alpha1, alpha2), each in [0, 1]
    alpha = fields.List(fields.Float(validate=validate.Range(min=0.0, max=1.0)), required=True,
                        validate=validate.Length(equal=2))

    # Query strings carry "4,2,3" style lists; split them before validation
    @pre_load
    def split_lists(self, data, **kwargs):
        data = dict(data)
        for key in ("antennas", "alpha"):
            if isinstance(data.get(key), str):
                parts = [part.strip() for part in data[key].split(",") if part.strip()]
                data[key] = [int(part) if key == "antennas" and part.lstrip("-").isdigit() else part
                             for part in parts]
        return data

    # Attach the normalized scenario so routes never normalize twice
    @post_load
    def attach_scenario(self, data, **kwargs):
        data["scenario"] = build_scenario(data["channel"], data["antennas"], data["alpha"])
        return data


# Schema for reference regions, which do not depend on alpha
class ReferenceRequestSchema(ScenarioSchema):
    alpha = fields.List(fields.Float(validate=validate.Range(min=0.0, max=1.0)),
                        load_default=lambda: [0.0, 0.0], validate=validate.Length(equal=2))


# Schema for an antenna configuration as the engine normalized it
class ConfigSchema(ma.Schema):
    kind = fields.Enum(ChannelKind, by_value=True)
    counts = fields.List(fields.Integer())
    normalized = fields.Boolean()
    swapped = fields.Boolean()
    notes = fields.List(fields.String())


# Schema for one labeled half-plane c1*d1 + c2*d2 <= rhs
class ConstraintSchema(ma.Schema):
    label = fields.Enum(ConstraintLabel, by_value=True)
    c1 = fields.Float()
    c2 = fields.Float()
    rhs = fields.Float()
    active = fields.Boolean()
    sense = fields.String()


# Schema for one corner point and the constraints tight at it
class VertexSchema(ma.Schema):
    d1 = fields.Float()
    d2 = fields.Float()
    labels = fields.List(fields.String())


# Schema for a whole region: constraints plus vertices
class RegionSchema(ma.Schema):
    constraints = fields.List(fields.Nested(ConstraintSchema))
    vertices = fields.List(fields.Nested(VertexSchema))
    provenance = fields.Enum(Provenance, by_value=True)
    regime = fields.Enum(RegimeTag, by_value=True, allow_none=True)
    swapped = fields.Boolean()


# Schema for the optimality verdict with both regions
class VerdictSchema(ma.Schema):
    achievable = fields.Nested(RegionSchema)
    outer = fields.Nested(RegionSchema)
    optimal = fields.Enum(Optimality, by_value=True)
    rationale = fields.String()


scenario_schema = ScenarioSchema() # Schema to validate channel/antennas/alpha input
reference_request_schema = ReferenceRequestSchema() # Schema to validate reference-region input
config_schema = ConfigSchema() # Schema for a normalized configuration
constraint_schema = ConstraintSchema() # Schema for a single constraint
region_schema = RegionSchema() # Schema for a single region
verdict_schema = VerdictSchema() # Schema for a verdict with its two regions
