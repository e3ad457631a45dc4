from flask import request, jsonify, current_app # Import request for client data, jsonify for JSON responses, current_app for config.
from . import simulate_bp # Import the blueprint for simulation routes.
from application.extensions import limiter # Import rate limiter.
from application.dof.channels import residual_slope # Import the residual-interference sweep.
from application.dof.ratesim import predicted_slopes # Import the DoF values the fitted slopes should approach.
from application.utils.numeric import parse_snr_range, round_nested # Import SNR range parser and float rounding helper.
from application.utils.scenario import choose_policy, simulate # Import policy selection and the sweep dispatcher.
from application.blueprints.alloc.schemas import power_policy_schema # Import schema to format the simulated policy.
from .schemas import simulate_request_schema, residual_request_schema, slope_estimate_schema # Import schemas to validate input and format sweeps.
from application.error_handlers import handle_dof_exceptions # Import decorator to catch and format engine errors nicely.


# Read sweep parameters, falling back to the app config
def _sweep_settings(data):
    config = current_app.config
    snr_db = parse_snr_range(data["snr_db"] or config["SNR_DB"])
    trials = data["trials"] or config["MC_TRIALS"]
    seed = config["MC_SEED"] if data["seed"] is None else data["seed"]
    return snr_db, trials, seed, config.get("THREADS")


# RUN SIMULATION – Monte Carlo rates over an SNR sweep and their fitted DoF slopes
@simulate_bp.route('/', methods=['POST'])
@limiter.limit("5 per minute")  # Sweeps are expensive: limit to 5 requests per minute.
@handle_dof_exceptions
def run_simulation():
    # Validate request body and normalize the configuration
    data = simulate_request_schema.load(request.get_json() or {})
    scenario = data["scenario"]
    snr_db, trials, seed, workers = _sweep_settings(data)

    # Pick the explicit policy or the recommended one
    policy = choose_policy(scenario, A1=data["A1"], A2=data["A2"], A2p=data["A2p"], rho=data["rho"], lam=data["lam"])
    estimate = simulate(scenario, policy, snr_db, trials, seed, workers)

    return jsonify(round_nested({
        "message": "Simulation completed successfully",
        "policy": power_policy_schema.dump(policy),
        "predicted": predicted_slopes(scenario.config, scenario.alpha, policy),
        "estimate": slope_estimate_schema.dump(estimate)
    })), 200


# RUN RESIDUAL SWEEP – slope of zero-forcing leakage power against log2 P
@simulate_bp.route('/residual', methods=['POST'])
@limiter.limit("5 per minute")  # Sweeps are expensive: limit to 5 requests per minute.
@handle_dof_exceptions
def run_residual_sweep():
    data = residual_request_schema.load(request.get_json() or {})
    snr_db, trials, seed, workers = _sweep_settings(data)

    # Residual sweeps need at least 200 trials
    estimate = residual_slope(data["alpha"], snr_db, max(trials, 200), seed, workers)

    return jsonify(round_nested({
        "message": "Residual sweep completed successfully",
        "expected_slope": -data["alpha"],
        "estimate": slope_estimate_schema.dump(estimate)
    })), 200
