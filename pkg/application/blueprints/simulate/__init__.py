from flask import Blueprint # Import Blueprint from Flask to group related routes together

# Create 'simulate' blueprint to group Monte Carlo slope-fit routes
simulate_bp = Blueprint('simulate', __name__)

# Import simulate routes after blueprint is defined to avoid circular imports
from . import routes
