"""Exception hierarchy raised by the DoF engine.

Every error carries the process exit code the command line maps it to and
the HTTP status the API answers with, so both front ends stay in step.
"""


class DofAtlasError(Exception):
    """Base class for all engine errors."""

    exit_code = 1
    http_status = 500
    title = "DoF engine error"


class ConfigurationError(DofAtlasError):
    """Invalid antenna counts, CSIT qualities, exponents or sweep parameters."""

    exit_code = 2
    http_status = 400
    title = "Invalid configuration"


class RegimeError(DofAtlasError):
    """An operation was called outside the regime it is defined for."""

    exit_code = 2
    http_status = 422
    title = "Regime mismatch"


class RankDeficientError(DofAtlasError):
    """A random channel draw produced a rank-deficient block (probability zero)."""

    exit_code = 2
    http_status = 500
    title = "Rank-deficient channel"


class VerificationError(DofAtlasError):
    """A closed form disagreed with its brute-force oracle beyond tolerance."""

    exit_code = 3
    http_status = 409
    title = "Verification failed"

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
