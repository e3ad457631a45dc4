from functools import wraps # Import wraps to create decorators that keep the original function's info
from flask import jsonify # Import jsonify to send JSON responses
from marshmallow import ValidationError # Import ValidationError raised by schema.load on bad request bodies
from application.dof.errors import DofAtlasError, VerificationError # Import engine errors carrying their HTTP status
import logging # Import logging to record unexpected failures with their stack trace

logger = logging.getLogger(__name__)


# Decorator to catch and handle engine and validation errors in route functions
def handle_dof_exceptions(fn):
    @wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            # Try to run the original function
            return fn(*args, **kwargs)
        except ValidationError as e:
            # Handle request bodies that fail schema validation
            return jsonify({"error": "Validation error", "details": e.messages}), 400
        except VerificationError as e:
            # Closed form and oracle disagree: report the worst deviation
            body = {"error": e.title, "details": str(e)}
            if e.report is not None:
                body["max_deviation"] = e.report.max_deviation
            return jsonify(body), e.http_status
        except DofAtlasError as e:
            # Handle configuration, regime and rank errors with their own status codes
            return jsonify({"error": e.title, "details": str(e)}), e.http_status
        except Exception as e:
            # Catch any other unexpected errors
            logger.exception("unexpected error in %s", fn.__name__)
            return jsonify({"error": "Unexpected error", "details": str(e)}), 500
    return wrapper


# Function to add global error handlers to the Flask app
def register_error_handlers(app):
    # Handle 404 Not Found error globally
    @app.errorhandler(404)
    def not_found_error(error):
        return jsonify({
            "error": "Not Found",
            "message": "The requested URL was not found. Please check the path or spelling."
        }), 404

    # Handle 405 Method Not Allowed error globally
    @app.errorhandler(405)
    def method_not_allowed(error):
        return jsonify({
            "error": "Method Not Allowed",
            "message": "The method is not allowed for the requested URL. Check the API documentation."
        }), 405

    # Handle 429 Too Many Requests from the rate limiter
    @app.errorhandler(429)
    def rate_limited(error):
        return jsonify({
            "error": "Too Many Requests",
            "message": "Rate limit exceeded for this endpoint. Please wait before sending more requests."
        }), 429

    # Handle 500 Internal Server Error globally
    @app.errorhandler(500)
    def internal_server_error(error):
        return jsonify({
            "error": "Internal Server Error",
            "message": "An unexpected error occurred. Please try again later."
        }), 500

    # Handle engine errors raised outside the route decorator
    @app.errorhandler(DofAtlasError)
    def handle_engine_error(error):
        return jsonify({
            "error": error.title,
            "message": str(error)
        }), error.http_status
