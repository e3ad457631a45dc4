from flask import request, jsonify, current_app # Import request for client data, jsonify for JSON responses, current_app for config.
from . import verify_bp # Import the blueprint for verification routes.
from application.extensions import limiter # Import rate limiter.
from application.dof.oracle import run_verification # Import the closed-form versus grid-oracle comparison.
from application.utils.numeric import round_nested # Import helper that rounds floats to 12 significant digits.
from .schemas import verify_request_schema, verification_report_schema # Import schemas to validate input and format the report.
from application.error_handlers import handle_dof_exceptions # Import decorator to catch and format engine errors nicely.


# RUN VERIFICATION – compare every applicable closed form with its brute-force grid maximum
@verify_bp.route('/', methods=['POST'])
@limiter.limit("10 per minute")  # Grid searches are heavier: limit to 10 requests per minute.
@handle_dof_exceptions
def verify():
    # Validate request body and normalize the configuration
    data = verify_request_schema.load(request.get_json() or {})
    scenario = data["scenario"]

    # Fill unset parameters from the app config
    step = data["grid_step"] or current_app.config["GRID_STEP"]
    tolerance = data["tolerance"] or current_app.config["ORACLE_TOLERANCE"]
    samples = data["samples"] or current_app.config["LAMBDA_SAMPLES"]

    report = run_verification(scenario.config, scenario.alpha, step=step, tolerance=tolerance, samples=samples)
    body = round_nested({
        "message": "Verification passed" if report.passed else "Verification failed",
        "report": verification_report_schema.dump(report)
    })

    # A failed comparison is a conflict between closed form and oracle
    return jsonify(body), 200 if report.passed else 409
