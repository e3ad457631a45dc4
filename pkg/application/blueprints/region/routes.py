from flask import request, jsonify # Import request to get data from client, jsonify to send JSON responses.
from . import region_bp # Import the blueprint for region routes.
from application.extensions import cache, limiter # Import caching system and rate limiter.
from application.dof.regimes import classify # Import regime classification for the response summary.
from application.dof.regions import no_csit_region, perfect_csit_region, reorient # Import reference-region builders.
from application.utils.numeric import round_nested # Import helper that rounds floats to 12 significant digits.
from application.utils.scenario import user_verdict # Import verdict builder that reports regions in the caller's user order.
from .schemas import scenario_schema, reference_request_schema, config_schema, region_schema, verdict_schema # Import schemas to validate input and format regions.
from application.error_handlers import handle_dof_exceptions # Import decorator to catch and format engine errors nicely.


# Build the region response shared by GET and POST
def _region_response(data):
    scenario = data["scenario"]

    # Compute achievable and outer regions with the optimality verdict
    verdict = user_verdict(scenario)
    regime = classify(scenario.config, scenario.alpha)

    return jsonify(round_nested({
        "config": config_schema.dump(scenario.config),
        "alpha": list(data["alpha"]),
        "regime": regime.tag.value,
        "thresholds": list(regime.thresholds),
        "verdict": verdict_schema.dump(verdict)
    })), 200


# GET REGION – channel, antennas and alpha as query parameters
@region_bp.route('/', methods=['GET'])
@limiter.limit("60 per minute")  # Limit to 60 requests per minute.
@cache.cached(timeout=300, query_string=True)  # Same query, same region: cache for 5 minutes.
@handle_dof_exceptions
def get_region():
    # Validate query parameters and normalize the configuration
    data = scenario_schema.load(request.args.to_dict())
    return _region_response(data)


# POST REGION – channel, antennas and alpha in a JSON body
@region_bp.route('/', methods=['POST'])
@limiter.limit("60 per minute")  # Limit to 60 requests per minute.
@handle_dof_exceptions
def post_region():
    # Validate request body and normalize the configuration
    data = scenario_schema.load(request.get_json() or {})
    return _region_response(data)


# GET REFERENCE REGIONS – no-CSIT region, plus the perfect-CSIT region for a BC
@region_bp.route('/reference', methods=['GET'])
@limiter.limit("60 per minute")  # Limit to 60 requests per minute.
@cache.cached(timeout=300, query_string=True)  # Reference regions only depend on the antennas.
@handle_dof_exceptions
def get_reference_regions():
    data = reference_request_schema.load(request.args.to_dict())
    scenario = data["scenario"]
    config = scenario.config

    # Build both reference regions on the normalized configuration
    no_csit = no_csit_region(config)
    perfect = perfect_csit_region(config) if config.is_bc else None

    # Report them in the caller's user order
    if scenario.swapped:
        no_csit = reorient(no_csit)
        perfect = reorient(perfect) if perfect is not None else None

    return jsonify(round_nested({
        "config": config_schema.dump(config),
        "no_csit": region_schema.dump(no_csit),
        "perfect_csit": region_schema.dump(perfect) if perfect is not None else None
    })), 200
