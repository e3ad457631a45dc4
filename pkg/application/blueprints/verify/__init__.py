from flask import Blueprint # Import Blueprint from Flask to group related routes together

# Create 'verify' blueprint to group closed-form versus oracle checks
verify_bp = Blueprint('verify', __name__)

# Import verify routes after blueprint is defined to avoid circular imports
from . import routes
