"""Monte Carlo rates of the rate-splitting schemes at finite SNR.

Each receiver decodes both common messages and its own private message, so
its achievable rates are the four log-det differences of a MAC. DoF are read
off as slopes of the trial-averaged rates against log2 P.
"""
import logging # Import logging for sweep summaries
from dataclasses import replace # Import replace to derive the second slot policy
from fractions import Fraction # Import Fraction for the p/q space-time approximation

import numpy as np # Import numpy for covariance algebra
import pandas as pd # Import pandas for the trial-sorted rate reduction

from application.dof.allocation import SPACE_TIME, dof_tuple, ic2_dof_caps
from application.dof.channels import (build_precoders, check_sweep, draw_channels, fit_slope,
                                      csit_rng, make_csit)
from application.dof.errors import ConfigurationError, RegimeError
from application.dof.regimes import phi_bc, phi_ic
from application.models import CovarianceStack, PowerPolicy, RatePoint, SlopeEstimate
from application.utils.numeric import TOLERANCE
from application.utils.parallel import ordered_map

logger = logging.getLogger(__name__)

# Eigenvalue floor of the log-det
EIGEN_FLOOR = 1e-12
# Fewest trials a slope fit accepts
MIN_TRIALS = 100
# Narrowest SNR window a rate sweep accepts, in dB
MIN_SPAN_DB = 20.0


def logdet2(matrix):
    """log2 det of a Hermitian PSD matrix, eigenvalues floored at 1e-12."""
    hermitian = 0.5 * (matrix + matrix.conj().T)
    eigenvalues = np.linalg.eigvalsh(hermitian)
    return float(np.sum(np.log2(np.maximum(eigenvalues, EIGEN_FLOOR))))


def transmit_covariances(config, bundle, P, normalize=True):
    """Per transmitter: isotropic common covariance and one private covariance per user.

    With ``normalize`` each transmitter is rescaled so that its total power is
    exactly P; without it the common covariance alone carries P.
    """
    users = (1,) if config.is_bc else (1, 2)
    result = {}
    # A BC has one transmitter hosting both private covariances
    for j, antennas in zip(users, bundle.antennas):
        common = (P / antennas) * np.eye(antennas, dtype=complex)
        private = {k: np.zeros((antennas, antennas), dtype=complex) for k in (1, 2)}
        for group in bundle.groups:
            if not group.enabled or (not config.is_bc and group.transmitter != j):
                continue
            V = group.columns
            private[group.transmitter] += (P ** group.exponent) * (V @ V.conj().T)
        # Total power before rescaling
        total = np.trace(common).real + sum(np.trace(B).real for B in private.values())
        scale = P / total if normalize else 1.0
        result[j] = (common * scale, {k: B * scale for k, B in private.items()})
    return result


def build_covariances(config, channels, bundle, P, receiver, normalize=True):
    """Q matrices seen by ``receiver`` for the transmit covariances of ``bundle``."""
    k, j = receiver, 3 - receiver
    covariances = transmit_covariances(config, bundle, P, normalize)
    if config.is_bc:
        H = channels[f"H{k}"]
        common, private = covariances[1]
        n = H.shape[1]
        Q_ck = H.conj().T @ common @ H
        Q_cj = np.zeros((n, n), dtype=complex)
        Q_k = H.conj().T @ private[k] @ H
        Q_eta = H.conj().T @ private[j] @ H + np.eye(n)
    else:
        # IC: own transmitter on the direct link, the other on the cross link
        H_own, H_cross = channels[f"H{k}{k}"], channels[f"H{k}{j}"]
        own_common, own_private = covariances[k]
        cross_common, cross_private = covariances[j]
        n = H_own.shape[1]
        if H_cross.shape[1] != n:
            raise ConfigurationError("channel shapes disagree at the receiver")
        Q_ck = H_own.conj().T @ own_common @ H_own
        Q_cj = H_cross.conj().T @ cross_common @ H_cross
        Q_k = H_own.conj().T @ own_private[k] @ H_own
        Q_eta = H_cross.conj().T @ cross_private[j] @ H_cross + np.eye(n)
    return CovarianceStack(receiver, float(P), Q_ck, Q_cj, Q_k, Q_eta)


def rate_point(stack):
    """The four MAC rate constraints at one receiver, in bits per channel use."""
    for name in ("Q_ck", "Q_cj", "Q_k", "Q_eta"):
        if not np.all(np.isfinite(getattr(stack, name))):
            raise ConfigurationError(f"{name} has non-finite entries")
    # Common messages are decoded treating the own private message as noise
    base = stack.Q_k + stack.Q_eta
    floor = logdet2(base)
    r_ck = logdet2(stack.Q_ck + base) - floor
    r_cj = logdet2(stack.Q_cj + base) - floor
    r_sum = logdet2(stack.Q_ck + stack.Q_cj + base) - floor
    r_pk = floor - logdet2(stack.Q_eta)
    return RatePoint(stack.receiver, stack.P, max(r_ck, 0.0), max(r_cj, 0.0),
                     max(r_sum, 0.0), max(r_pk, 0.0))


def _mix(first, second, rho):
    return RatePoint(
        first.receiver, first.P,
        rho * first.r_ck + (1 - rho) * second.r_ck,
        rho * first.r_cj + (1 - rho) * second.r_cj,
        rho * first.r_sum + (1 - rho) * second.r_sum,
        rho * first.r_pk + (1 - rho) * second.r_pk,
    )


def message_rates(config, points):
    """Per-message rates from the rate points of both receivers."""
    rx1, rx2 = points[1], points[2]
    if config.is_bc:
        dc = min(rx1.r_ck, rx2.r_ck)
        return {"dc": dc, "dp1": rx1.r_pk, "dp2": rx2.r_pk, "sum": dc + rx1.r_pk + rx2.r_pk}
    dp1, dp2 = rx1.r_pk, rx2.r_pk
    # Each common message must be decodable at both receivers
    dc1 = min(rx1.r_ck, rx1.r_sum, rx2.r_cj, rx2.r_sum)
    dc2 = min(rx1.r_cj, rx1.r_sum, rx2.r_ck, rx2.r_sum)
    dc = min(rx1.r_sum, rx2.r_sum)
    return {
        "dc": dc, "dc1": dc1, "dc2": dc2, "dp1": dp1, "dp2": dp2,
        "d1_c1": dc1 + dp1, "d2_c1": dp2, "d1_c2": dp1, "d2_c2": dc2 + dp2,
        "sum": dc + dp1 + dp2,
    }


def _points(config, alpha, channels, csit, policy, P, normalize=True):
    bundle = build_precoders(config, csit, policy, alpha)
    return {k: rate_point(build_covariances(config, channels, bundle, P, k, normalize)) for k in (1, 2)}


def slot_rates(config, alpha, channels, csit, policy, P, normalize=True):
    """Message rates of ``policy``; space-time policies mix their two slot types."""
    points = _points(config, alpha, channels, csit, policy, P, normalize)
    # The remaining 1 - rho of the slots use A2 = alpha1
    if policy.rho < 1.0:
        other = replace(policy, A2=alpha.alpha1, rho=1.0)
        alternate = _points(config, alpha, channels, csit, other, P, normalize)
        points = {k: _mix(points[k], alternate[k], policy.rho) for k in (1, 2)}
    return message_rates(config, points)


def _summarize(rows):
    frame = pd.DataFrame(rows, columns=["P_db", "message_id", "trial", "rate"])
    # Grouping sorts by SNR and message, so the reduction order is fixed
    summary = (frame.groupby(["P_db", "message_id"], sort=True)["rate"]
               .agg(mean_rate_bits="mean", stderr="sem")
               .reset_index())
    return summary


def _fit_all(summary):
    slopes = []
    for message, group in summary.groupby("message_id", sort=True):
        slopes.append(fit_slope(message, group["P_db"].to_numpy(), group["mean_rate_bits"].to_numpy()))
    return tuple(slopes)


def sweep_and_fit(config, alpha, policy, snr_db, trials=200, seed=7, workers=None, normalize=True):
    """Trial-averaged message rates over an SNR sweep and their fitted DoF slopes.

    ``normalize=False`` skips the per-transmitter power rescaling.
    """
    snr_db = check_sweep(snr_db, min_span=MIN_SPAN_DB)
    if trials < MIN_TRIALS:
        raise ConfigurationError(f"a slope fit needs at least {MIN_TRIALS} trials, got {trials}")

    def run(trial):
        channels = draw_channels(config, seed, trial)
        rows = []
        # One channel draw per trial, a fresh estimate at every SNR point
        for index, db in enumerate(snr_db):
            P = 10.0 ** (db / 10.0)
            csit = make_csit(channels, alpha, P, rng=csit_rng(seed, trial, index))
            for message, value in slot_rates(config, alpha, channels, csit, policy, P, normalize).items():
                rows.append((db, message, trial, value))
        return rows

    rows = [row for chunk in ordered_map(run, range(trials), workers) for row in chunk]
    summary = _summarize(rows)
    estimate = SlopeEstimate(slopes=_fit_all(summary), snr_db=tuple(snr_db), trials=trials,
                             seed=seed, rates=summary)
    logger.info("swept %s alpha=%s over %d trials: %s", config.label(), alpha.as_tuple(), trials,
                ", ".join(f"{s.message}={s.slope:.3f}" for s in estimate.slopes))
    return estimate


def st_fraction_approximation(rho):
    """rho as p/q with q <= 100."""
    if not 0.0 <= rho <= 1.0:
        raise ConfigurationError(f"rho must lie in [0, 1], got {rho}")
    return Fraction(rho).limit_denominator(100)


def st_sweep(config, alpha, rho, snr_db, trials=200, seed=7, workers=None):
    """Slope fit of the two-slot space-time scheme with the (alpha2, 1) slot used a fraction rho."""
    if config.is_bc:
        if phi_bc(config, alpha) < -TOLERANCE:
            raise RegimeError("space-time sweeps need Phi_BC >= 0")
    elif config.M1 < config.N2 or config.M2 <= config.N2 or phi_ic(config, alpha) < -TOLERANCE:
        raise RegimeError("space-time sweeps need IC Case I.2 with Phi_IC >= 0")
    fraction = st_fraction_approximation(rho)
    logger.debug("space-time fraction %s approximated by %s", rho, fraction)
    policy = PowerPolicy(A1=alpha.alpha2, A2=1.0, rho=float(fraction), scheme=SPACE_TIME)
    return sweep_and_fit(config, alpha, policy, snr_db, trials, seed, workers)


def _ic2_predicted(config, alpha, policy):
    A2p = policy.A2p if policy.A2p is not None else max(policy.A2, alpha.alpha1)
    caps = ic2_dof_caps(config, alpha, policy.A2, A2p)
    # Tx1 sends common messages only
    dc = min(caps.rx1_common, caps.rx2_sum)
    return {
        "dc": dc, "dc1": min(caps.rx1_common, caps.rx2_c1), "dc2": min(caps.rx1_common, caps.rx2_c2),
        "dp1": 0.0, "dp2": caps.dp2, "sum": dc + caps.dp2,
    }


def predicted_slopes(config, alpha, policy):
    """DoF values the fitted slopes should approach."""
    if not config.is_bc and config.M1 < config.N2:
        return _ic2_predicted(config, alpha, policy)
    tuple_ = dof_tuple(config, alpha, policy)
    predicted = {"dc": tuple_.dc, "dp1": tuple_.dp1, "dp2": tuple_.dp2, "sum": tuple_.sum_dof}
    if not config.is_bc:
        (d1_c1, d2_c1), (d1_c2, d2_c2) = tuple_.splits
        predicted.update({"dc1": tuple_.dc1, "dc2": tuple_.dc2, "d1_c1": d1_c1, "d2_c1": d2_c1,
                          "d1_c2": d1_c2, "d2_c2": d2_c2})
    return predicted
