from application.extensions import ma # Import Marshmallow (ma) from the extensions setup.
from marshmallow import fields, validate # Import fields and validators for request and response schemas.
from application.models import RegimeTag # Import the regime enum, dumped by value.
from application.blueprints.region.schemas import ScenarioSchema, ConfigSchema # Import the shared scenario input and config output schemas.


# Schema for an allocation request: scenario plus boundary sample count
class AllocRequestSchema(ScenarioSchema):
    samples = fields.Integer(load_default=11, validate=validate.Range(min=2, max=201))


# Schema for a Case II boundary point request at one lambda
class Ic2RequestSchema(ScenarioSchema):
    lam = fields.Float(required=True, validate=validate.Range(min=0.0))


# Schema for power exponents and the space-time fraction
class PowerPolicySchema(ma.Schema):
    A1 = fields.Float()
    A2 = fields.Float()
    A2p = fields.Float(allow_none=True)
    rho = fields.Float()
    scheme = fields.String()
    rho_clipped = fields.Boolean()


# Schema for common/private DoF with per-receiver caps and extreme splits
class DofTupleSchema(ma.Schema):
    dc = fields.Float()
    dp1 = fields.Float()
    dp2 = fields.Float()
    dc1 = fields.Float(allow_none=True)
    dc2 = fields.Float(allow_none=True)
    sum_dof = fields.Float()
    caps = fields.Dict(keys=fields.String(), values=fields.Float())
    splits = fields.List(fields.List(fields.Float()))
    clipped = fields.Boolean()


# Schema for one solution of the Case II boundary program
class Ic2SolutionSchema(ma.Schema):
    lam = fields.Float()
    d2 = fields.Float()
    branch = fields.String()
    policy = fields.Nested(PowerPolicySchema)


# Schema for the full allocation report
class AllocationSchema(ma.Schema):
    config = fields.Nested(ConfigSchema)
    alpha = fields.Function(lambda allocation: list(allocation.alpha.as_tuple()))
    regime = fields.Enum(RegimeTag, by_value=True)
    policy = fields.Nested(PowerPolicySchema, allow_none=True)
    dof = fields.Nested(DofTupleSchema, allow_none=True)
    boundary = fields.List(fields.Nested(Ic2SolutionSchema))


alloc_request_schema = AllocRequestSchema() # Schema to validate allocation input
ic2_request_schema = Ic2RequestSchema() # Schema to validate Case II boundary input
power_policy_schema = PowerPolicySchema() # Schema for a single policy
dof_tuple_schema = DofTupleSchema() # Schema for a single DoF tuple
ic2_solution_schema = Ic2SolutionSchema() # Schema for a single boundary point
allocation_schema = AllocationSchema() # Schema for the allocation report
