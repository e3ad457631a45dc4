from flask import Flask  # Import the Flask class; used to create the main Flask application instance
from .extensions import ma, cache, limiter  # Import Flask extensions: ma, cache, limiter
from .error_handlers import register_error_handlers  # Import function to register JSON error handlers
from .logging_config import configure_logging  # Import logging setup shared with the command line
from .blueprints.region import region_bp  # Import the region blueprint for DoF regions and verdicts
from .blueprints.alloc import alloc_bp  # Import the alloc blueprint for power allocation routes
from .blueprints.verify import verify_bp  # Import the verify blueprint for closed-form vs oracle checks
from .blueprints.simulate import simulate_bp  # Import the simulate blueprint for Monte Carlo slope fits


# Function to create and configure the Flask app
def create_app(config_name='application.config.Config'):
    # Create Flask app instance
    app = Flask(__name__)

    # Load configuration settings from the given config class
    app.config.from_object(config_name)

    # Set up logging before anything else writes to it
    configure_logging(app.config.get("LOG_LEVEL", "INFO"))

    # Initialize extensions with the Flask app
    ma.init_app(app)
    cache.init_app(app, config={
        'CACHE_TYPE': app.config.get('CACHE_TYPE', 'SimpleCache'),
        'CACHE_DEFAULT_TIMEOUT': app.config.get('CACHE_DEFAULT_TIMEOUT', 300),
    })
    limiter.init_app(app)

    # Register blueprints with URL prefixes
    app.register_blueprint(region_bp, url_prefix='/api/regions')
    app.register_blueprint(alloc_bp, url_prefix='/api/alloc')
    app.register_blueprint(verify_bp, url_prefix='/api/verify')
    app.register_blueprint(simulate_bp, url_prefix='/api/simulate')

    # Register JSON error handlers for 404/405/429/500 and engine errors
    register_error_handlers(app)

    # Return the configured Flask app instance
    return app
