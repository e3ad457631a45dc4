"""Small numeric helpers shared across the engine."""
import math # Import math for finiteness checks

import numpy as np # Import numpy so helpers accept arrays

from application.dof.errors import ConfigurationError # Import the input error type

# Absolute tolerance for feasibility, tightness and vertex merging
TOLERANCE = 1e-9


def pos(value):
    """Positive part (x)^+ for scalars and arrays."""
    if np.ndim(value) == 0:
        return max(float(value), 0.0)
    return np.maximum(value, 0.0)


def ratio(numerator, denominator, zero_over_zero=0.0):
    """Division that maps x/0 to +-inf and 0/0 to ``zero_over_zero``."""
    if denominator == 0:
        if numerator == 0:
            return zero_over_zero
        return math.inf if numerator > 0 else -math.inf
    return numerator / denominator


def round_sig(value, digits=12):
    """Round a float to ``digits`` significant digits."""
    if value is None or not math.isfinite(value):
        return value
    return float(f"{value:.{digits}g}")


def round_nested(obj, digits=12):
    # Walks dicts/lists produced by marshmallow dumps
    if isinstance(obj, float):
        return round_sig(obj, digits)
    if isinstance(obj, dict):
        return {key: round_nested(item, digits) for key, item in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_nested(item, digits) for item in obj]
    return obj


def clip_unit(value):
    """Clip to [0, 1] and report whether clipping happened."""
    clipped = min(max(value, 0.0), 1.0)
    return clipped, not math.isclose(clipped, value, abs_tol=TOLERANCE)


def parse_snr_range(text):
    """``lo:hi:step`` in dB to the inclusive list of SNR points."""
    try:
        low, high, step = (float(part) for part in str(text).split(":"))
    except ValueError:
        raise ConfigurationError(f"SNR range must look like lo:hi:step, got {text!r}") from None
    if step <= 0 or high < low:
        raise ConfigurationError(f"SNR range {text!r} needs step > 0 and hi >= lo")
    count = int(math.floor((high - low) / step + 1e-9)) + 1
    return [round(low + i * step, 9) for i in range(count)]
