from flask import Blueprint # Import Blueprint from Flask to group related routes together

# Create 'alloc' blueprint to group all power allocation routes together
alloc_bp = Blueprint('alloc', __name__)

# Import alloc routes after blueprint is defined to avoid circular imports
from . import routes
