from flask import Blueprint # Import Blueprint from Flask to group related routes together

# Create 'region' blueprint to group all DoF region routes together
region_bp = Blueprint('region', __name__)

# Import region routes after blueprint is defined to avoid circular imports
from . import routes
