from flask import request, jsonify # Import request to get data from client, jsonify to send JSON responses.
from . import alloc_bp # Import the blueprint for allocation routes.
from application.extensions import limiter # Import rate limiter.
from application.dof.allocation import allocate, ic2_branch_intervals, ic2_constraint_line, ic2_optimal # Import closed-form allocation functions.
from application.utils.numeric import round_nested # Import helper that rounds floats to 12 significant digits.
from application.blueprints.region.schemas import constraint_schema # Import schema to format the constraint a boundary point lies on.
from .schemas import alloc_request_schema, ic2_request_schema, allocation_schema, ic2_solution_schema # Import schemas to validate input and format allocations.
from application.error_handlers import handle_dof_exceptions # Import decorator to catch and format engine errors nicely.


# CREATE ALLOCATION – recommended policy and DoF tuple, or the lambda boundary for Case II
@alloc_bp.route('/', methods=['POST'])
@limiter.limit("30 per minute")  # Limit to 30 requests per minute.
@handle_dof_exceptions
def create_allocation():
    # Validate request body and normalize the configuration
    data = alloc_request_schema.load(request.get_json() or {})
    scenario = data["scenario"]

    # Solve the closed forms for this configuration
    allocation = allocate(scenario.config, scenario.alpha, data["samples"])

    return jsonify(round_nested({
        "message": "Allocation computed successfully",
        "allocation": allocation_schema.dump(allocation)
    })), 200


# CASE II BOUNDARY POINT – exponents maximizing d2 for dc1 = lam
@alloc_bp.route('/ic2', methods=['POST'])
@limiter.limit("30 per minute")  # Limit to 30 requests per minute.
@handle_dof_exceptions
def ic2_point():
    data = ic2_request_schema.load(request.get_json() or {})
    scenario = data["scenario"]
    config, alpha = scenario.config, scenario.alpha

    # Solve the boundary program and find the region constraint it runs along
    solution = ic2_optimal(config, alpha, data["lam"])
    line = ic2_constraint_line(config, alpha, solution.branch)

    return jsonify(round_nested({
        "solution": ic2_solution_schema.dump(solution),
        "constraint": constraint_schema.dump(line),
        "branches": {name: list(span) for name, span in ic2_branch_intervals(config, alpha).items()}
    })), 200
