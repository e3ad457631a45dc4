"""Antenna normalization, derived stream counts and regime classification.

The discriminants ``phi_bc``/``phi_ic`` decide whether space-time mixing of
two power profiles beats a single profile, and ``alpha0_bc``/``alpha0_ic``
give the effective CSIT exponent that scales the achievable sum DoF.
All dimension arithmetic stays in integers; only alpha-dependent values are floats.
"""
import logging # Import logging to trace classification
from dataclasses import replace # Import replace to build normalized copies of frozen configs

from application.dof.errors import ConfigurationError, RegimeError # Import engine errors
from application.models import ChannelKind, DerivedDims, Regime, RegimeTag # Import configuration and regime types
from application.utils.numeric import ratio # Import division with explicit x/0 handling

logger = logging.getLogger(__name__)


def normalize(config):
    """Switch off redundant antennas and order users so that N1 <= N2."""
    if config.normalized:
        return config
    M1, M2, N1, N2 = config.M1, config.M2, config.N1, config.N2
    swapped = False
    notes = []

    if config.kind is ChannelKind.BC:
        if N1 > N2:
            N1, N2 = N2, N1
            swapped = True
            notes.append("users swapped so that N1 <= N2")
        if M1 > N1 + N2:
            notes.append(f"M clamped from {M1} to {N1 + N2}")
            M1 = M2 = N1 + N2
        result = replace(config, M1=M1, M2=M2, N1=N1, N2=N2, normalized=True,
                         swapped=swapped, notes=tuple(notes))
        logger.debug("normalized BC %s -> %s", config.label(), result.label())
        return result

    # IC: clamping one side can loosen the other, so iterate to a fixed point
    while True:
        if N1 > N2:
            M1, M2, N1, N2 = M2, M1, N2, N1
            swapped = not swapped
            notes.append("users swapped so that N1 <= N2")
        before = (M1, M2, N1, N2)
        M1, M2 = min(M1, N1 + N2), min(M2, N1 + N2)
        N1, N2 = min(N1, M1 + M2), min(N2, M1 + M2)
        if (M1, M2, N1, N2) == before and N1 <= N2:
            break
        notes.append(f"clamped {before} to {(M1, M2, N1, N2)}")

    if M2 < N1:
        raise ConfigurationError(
            f"IC {config.label()} normalizes to ({M1},{M2},{N1},{N2}) with M2 < N1, "
            "which the rate-splitting schemes do not cover"
        )
    result = replace(config, M1=M1, M2=M2, N1=N1, N2=N2, normalized=True,
                     swapped=swapped, notes=tuple(notes))
    logger.debug("normalized IC %s -> %s", config.label(), result.label())
    return result


def align_alpha(config, alpha):
    """Reorder CSIT qualities to follow a user swap made by ``normalize``."""
    return alpha.swapped() if config.swapped else alpha


def _require_normalized(config, kind):
    if not config.normalized:
        raise ConfigurationError("configuration must be normalized first")
    if config.kind is not kind:
        raise RegimeError(f"expected a {kind.value.upper()} configuration, got {config.kind.value.upper()}")


def bc_dims(config):
    """(X, Y1, Y2) = (min{M,N1+N2}, min{M,N1}, min{M,N2})."""
    M = config.M
    return min(M, config.N1 + config.N2), min(M, config.N1), min(M, config.N2)


def ic_dims(config):
    """(X1, X2) = (min{M1,N1+N2}, min{M2,N1+N2})."""
    total = config.N1 + config.N2
    return min(config.M1, total), min(config.M2, total)


def derived_dims(config):
    _require_normalized(config, ChannelKind.IC)
    M1, M2, N1, N2 = config.M1, config.M2, config.N1, config.N2
    if M1 > N2:
        raise RegimeError("stream counts are defined for M1 <= N2 only")
    N1p = min(M1, N1)
    N2p = min(M2, N2)
    N1pp = max(M1, N1)
    tau = N1 - N1p
    mu1 = min(N2 - M1 - tau, M2 - N1)
    mu2 = min(N2p - tau, M2 - N1) - mu1
    delta1 = N2 - M1 - tau - mu1
    delta2 = N2p - N2 + M1 - mu2
    xi = min(N1p, mu1 + delta1)
    return DerivedDims(N1p=N1p, N2p=N2p, N1pp=N1pp, tau=tau, mu1=mu1, mu2=mu2,
                       delta1=delta1, delta2=delta2, xi=xi)


def phi_bc(config, alpha):
    _require_normalized(config, ChannelKind.BC)
    X, Y1, Y2 = bc_dims(config)
    return Y2 - Y1 + (X - Y2) * alpha.alpha2 - (X - Y1) * alpha.alpha1


def phi_ic(config, alpha):
    _require_normalized(config, ChannelKind.IC)
    X1, X2 = ic_dims(config)
    N1, N2 = config.N1, config.N2
    return N2 - N1 + (X1 - N2) * alpha.alpha2 - (X2 - N1) * alpha.alpha1


def alpha0_bc(config, alpha):
    X, Y1, Y2 = bc_dims(config)
    a1, a2 = alpha.alpha1, alpha.alpha2
    phi = phi_bc(config, alpha)
    if phi <= 0:
        return a2
    if a1 >= 1 - a2:
        return a2 - ratio(phi, X - Y1)
    return ratio(a1 * a2 * (X - Y2), (Y2 - Y1) * (1 - a1) + (X - Y2) * a2)


def alpha0_ic(config, alpha):
    _require_normalized(config, ChannelKind.IC)
    if config.M1 < config.N2:
        raise RegimeError("alpha0_ic is defined for M1 >= N2 only")
    X1, X2 = ic_dims(config)
    N1, N2 = config.N1, config.N2
    a1, a2 = alpha.alpha1, alpha.alpha2
    if config.M2 <= N2:
        return 0.0
    phi = phi_ic(config, alpha)
    if phi <= 0:
        return a2
    if X1 > N2 and (X1 - X2) / (X1 - N2) * a1 >= 1 - a2:
        return (X2 - N2) / (X1 - N2) * a1
    if a1 >= 1 - a2:
        return a2 - ratio(phi, X1 - N1)
    return ratio(a1 * a2 * (X2 - N2), (N2 - N1) * (1 - a1) + (X1 - N2) * a2)


def ic2_thresholds(config):
    """Alpha1 breakpoints splitting the M2 > N2 sub-cases of the IC with M1 < N2."""
    dims = derived_dims(config)
    low = ratio(config.M1 - dims.N1p, dims.mu2)
    high = ratio(config.N2 - config.N1, dims.mu2 + config.N2 - dims.N1pp)
    return low, high


def classify(config, alpha):
    if not config.normalized:
        raise ConfigurationError("configuration must be normalized first")
    a1 = alpha.alpha1

    if config.kind is ChannelKind.BC:
        tag = RegimeTag.BC_PHI_NONPOS if phi_bc(config, alpha) <= 0 else RegimeTag.BC_PHI_POS
        return Regime(tag)

    M1, M2, N1, N2 = config.M1, config.M2, config.N1, config.N2
    if M1 >= N2:
        if M2 <= N2:
            return Regime(RegimeTag.IC_I1)
        if phi_ic(config, alpha) <= 0:
            return Regime(RegimeTag.IC_I2_PHI_NONPOS)
        return Regime(RegimeTag.IC_I2_PHI_POS)

    if M2 <= N2:
        return Regime(RegimeTag.IC_II1)

    dims = derived_dims(config)
    low, high = ic2_thresholds(config)
    # The low ranges only exist when Tx1 has more antennas than Rx1
    in_low = M1 > dims.N1p and a1 <= low
    # At N1 + M1 == N2 the L3 and L4 lines coincide; the tie goes to II.2.b
    if N1 + M1 < N2:
        tag = RegimeTag.IC_II2A_LOW if in_low else RegimeTag.IC_II2A_HIGH
        return Regime(tag, thresholds=(low,))
    if in_low:
        tag = RegimeTag.IC_II2B_LOW
    elif a1 <= high:
        tag = RegimeTag.IC_II2B_MID
    else:
        tag = RegimeTag.IC_II2B_HIGH
    return Regime(tag, thresholds=(low, high))
