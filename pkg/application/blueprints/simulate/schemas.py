from application.extensions import ma # Import Marshmallow (ma) from the extensions setup.
from marshmallow import fields, validate # Import fields and validators for request and response schemas.
from application.blueprints.region.schemas import ScenarioSchema # Import the shared scenario input schema.

# Exponent fields share the unit-interval rule
unit = validate.Range(min=0.0, max=1.0)


# Schema for a rate simulation request; unset sweep values fall back to the app config
class SimulateRequestSchema(ScenarioSchema):
    snr_db = fields.String(load_default=None, validate=validate.Regexp(r"^-?[\d.]+:-?[\d.]+:[\d.]+$"))
    trials = fields.Integer(load_default=None, validate=validate.Range(min=100, max=5000))
    seed = fields.Integer(load_default=None, validate=validate.Range(min=0))

    # Optional explicit policy; omitted means the recommended one
    A1 = fields.Float(load_default=None, validate=unit)
    A2 = fields.Float(load_default=None, validate=unit)
    A2p = fields.Float(load_default=None, validate=unit)
    rho = fields.Float(load_default=None, validate=unit)

    # Boundary point used to pick the policy of a Case II configuration
    lam = fields.Float(load_default=0.0, validate=validate.Range(min=0.0))


# Schema for a residual-interference sweep request
class ResidualRequestSchema(ma.Schema):
    alpha = fields.Float(required=True, validate=unit)
    snr_db = fields.String(load_default=None, validate=validate.Regexp(r"^-?[\d.]+:-?[\d.]+:[\d.]+$"))
    trials = fields.Integer(load_default=None, validate=validate.Range(min=200, max=20000))
    seed = fields.Integer(load_default=None, validate=validate.Range(min=0))


# Schema for one fitted slope
class MessageSlopeSchema(ma.Schema):
    message = fields.String()
    slope = fields.Float()
    intercept = fields.Float()
    residual_rms = fields.Float()


# Schema for a sweep: fitted slopes plus the averaged rate table
class SlopeEstimateSchema(ma.Schema):
    slopes = fields.List(fields.Nested(MessageSlopeSchema))
    snr_db = fields.List(fields.Float())
    trials = fields.Integer()
    seed = fields.Integer()
    rates = fields.Method("dump_rates")

    def dump_rates(self, estimate):
        if estimate.rates is None:
            return []
        return estimate.rates.to_dict(orient="records")


simulate_request_schema = SimulateRequestSchema() # Schema to validate simulation input
residual_request_schema = ResidualRequestSchema() # Schema to validate residual sweep input
slope_estimate_schema = SlopeEstimateSchema() # Schema for a sweep result
