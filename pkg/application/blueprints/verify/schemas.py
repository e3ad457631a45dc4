from application.extensions import ma # Import Marshmallow (ma) from the extensions setup.
from marshmallow import fields, validate # Import fields and validators for request and response schemas.
from application.blueprints.region.schemas import ScenarioSchema, ConfigSchema # Import the shared scenario input and config output schemas.


# Schema for a verification request; unset values fall back to the app config
class VerifyRequestSchema(ScenarioSchema):
    grid_step = fields.Float(load_default=None, validate=validate.Range(min=0.0, max=0.5, min_inclusive=False))
    tolerance = fields.Float(load_default=None, validate=validate.Range(min=0.0, min_inclusive=False))
    samples = fields.Integer(load_default=None, validate=validate.Range(min=2, max=201))


# Schema for one closed form compared with its grid maximum
class CheckSchema(ma.Schema):
    name = fields.String()
    branch = fields.String()
    closed_form = fields.Float()
    oracle = fields.Float()
    deviation = fields.Float()


# Schema for the whole verification report
class VerificationReportSchema(ma.Schema):
    config = fields.Nested(ConfigSchema)
    alpha = fields.Function(lambda report: list(report.alpha.as_tuple()))
    step = fields.Float()
    tolerance = fields.Float()
    checks = fields.List(fields.Nested(CheckSchema))
    branch_coverage = fields.Dict(keys=fields.String(), values=fields.Integer())
    max_deviation = fields.Float()
    passed = fields.Boolean()


verify_request_schema = VerifyRequestSchema() # Schema to validate verification input
verification_report_schema = VerificationReportSchema() # Schema for a verification report
