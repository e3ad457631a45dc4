"""Random MIMO channels, imperfect CSIT and the precoders built on it.

Channel matrices are stored transmitter-side first: a BC channel ``Hk`` is
M x Nk and an IC link ``Hkj`` (Tx j to Rx k) is Mj x Nk, so Rx k observes
``Hkj^H @ s_j``. Every random draw uses its own generator seeded with the
tuple (seed, trial, ...), so results do not depend on evaluation order.
"""
import logging # Import logging for sweep summaries

import numpy as np # Import numpy for random draws and matrix algebra
import pandas as pd # Import pandas for the residual rate table
from scipy.linalg import null_space, orth # Import SVD-based null space and range bases

from application.dof.errors import ConfigurationError, RankDeficientError, RegimeError
from application.dof.regimes import derived_dims
from application.models import (ChannelKind, ChannelSet, CsitSet, MessageSlope, PrecoderBundle,
                                RowTransform, RowTransformPair, SlopeEstimate, StreamGroup)
from application.utils.numeric import TOLERANCE, pos
from application.utils.parallel import ordered_map

logger = logging.getLogger(__name__)

# Relative cutoff for null space and range bases
RCOND = 1e-9
# Smallest singular value a drawn channel may have
SINGULAR_FLOOR = 1e-9


def rng_for(*keys):
    """Generator for one (seed, trial, ...) coordinate."""
    return np.random.default_rng([int(k) for k in keys])


def csit_rng(seed, trial, index):
    """Generator of the CSIT error drawn at SNR point ``index`` of ``trial``.

    SeedSequence drops trailing zero words, so the index is offset by one to
    keep this stream apart from the channel stream keyed by (seed, trial).
    """
    return rng_for(seed, trial, 1 + int(index))


def complex_gaussian(rng, shape, variance=1.0):
    scale = np.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


# Matrix shapes keyed by channel name, transmitter side first
def _shapes(config):
    if config.is_bc:
        return {"H1": (config.M, config.N1), "H2": (config.M, config.N2)}
    M = {1: config.M1, 2: config.M2}
    N = {1: config.N1, 2: config.N2}
    return {f"H{k}{j}": (M[j], N[k]) for k in (1, 2) for j in (1, 2)}


# "H21" and "H2" both end at Rx2
def _receiver_of(name):
    return int(name[1])


def draw_channels(config, seed, trial=0):
    """I.i.d. CN(0, 1) channels, reproducible from (seed, trial)."""
    if seed < 0:
        raise ConfigurationError(f"seed must be non-negative, got {seed}")
    rng = rng_for(seed, trial)
    matrices = {name: complex_gaussian(rng, shape) for name, shape in _shapes(config).items()}
    # Full rank holds with probability one; a failure means a bad seed or a numeric fault
    for name, matrix in matrices.items():
        smallest = np.linalg.svd(matrix, compute_uv=False).min()
        if smallest <= SINGULAR_FLOOR:
            raise RankDeficientError(f"{name} is rank deficient (smallest singular value {smallest:.3g})")
    return ChannelSet(config.kind, matrices)


def make_csit(channels, alpha, P, rng=None):
    """Estimates H_hat = H - E with E ~ CN(0, P^-alpha_k) for every channel into Rx k."""
    if not np.isfinite(P) or P <= 1.0:
        raise ConfigurationError(f"transmit power must exceed 1 (linear scale), got {P}")
    rng = rng if rng is not None else np.random.default_rng()
    qualities = {1: alpha.alpha1, 2: alpha.alpha2}
    estimates, variances = {}, {}
    # Sorted names keep the draw order fixed
    for name in sorted(channels.matrices):
        matrix = channels[name]
        variance = float(P) ** (-qualities[_receiver_of(name)])
        estimates[name] = matrix - complex_gaussian(rng, matrix.shape, variance)
        variances[name] = variance
    return CsitSet(estimates, variances, float(P))


def zf_precoder(estimate, streams):
    """Orthonormal columns v with estimate^H v = 0."""
    basis = null_space(estimate.conj().T, rcond=RCOND)
    if streams > basis.shape[1]:
        raise ConfigurationError(
            f"requested {streams} zero-forcing streams but the null space has dimension {basis.shape[1]}")
    return basis[:, :streams]


def subspace_precoder(estimate, streams, exclude=None):
    """Orthonormal columns inside range(estimate), orthogonal to ``exclude``."""
    basis = orth(estimate, rcond=RCOND)
    if exclude is not None and exclude.shape[1] > 0:
        # Directions of the range orthogonal to the excluded columns
        inner = null_space((basis.conj().T @ exclude).conj().T, rcond=RCOND)
        basis = basis @ inner
    if streams > basis.shape[1]:
        raise ConfigurationError(
            f"requested {streams} subspace streams but only {basis.shape[1]} dimensions remain")
    return basis[:, :streams]


def _marker_group(name, columns, A2, alpha):
    """Subspace group at the (A2 - alpha1)+ level of user 2, off when A2 < alpha1."""
    return StreamGroup(name, 2, columns, pos(A2 - alpha.alpha1), "private-subspace",
                       active=A2 >= alpha.alpha1 - TOLERANCE)


def _bc_groups(config, csit, policy, alpha):
    M = config.M
    n1, n2 = min(config.N1, M), min(config.N2, M)
    # V1 nulls Rx2, V21 nulls Rx1, V22 fills the rest of Rx2's range
    v1 = zf_precoder(csit["H2"], M - n2)
    v21 = zf_precoder(csit["H1"], M - n1)
    v22 = subspace_precoder(csit["H2"], n1 + n2 - M, exclude=v21)
    return (
        StreamGroup("V1", 1, v1, policy.A1, "private-zf"),
        StreamGroup("V21", 2, v21, policy.A2, "private-zf"),
        _marker_group("V22", v22, policy.A2, alpha),
    )


def _ic1_groups(config, csit, policy, alpha):
    M1, M2, N1, N2 = config.M1, config.M2, config.N1, config.N2
    N2p = min(M2, N2)
    # Same layout as the BC, with cross links as the nulled channels
    v1 = zf_precoder(csit["H21"], M1 - N2)
    v21 = zf_precoder(csit["H12"], M2 - N1)
    v22 = subspace_precoder(csit["H22"], N1 + N2p - M2, exclude=v21)
    return (
        StreamGroup("V1", 1, v1, policy.A1, "private-zf"),
        StreamGroup("V21", 2, v21, policy.A2, "private-zf"),
        _marker_group("V22", v22, policy.A2, alpha),
    )


def _ic2_groups(config, csit, policy, alpha):
    dims = derived_dims(config)
    A2 = policy.A2
    A2p = policy.A2p if policy.A2p is not None else max(A2, alpha.alpha1)
    # Zero-forced streams avoid Rx1; subspace streams stay inside Rx2's range
    zf = zf_precoder(csit["H12"], dims.mu1 + dims.mu2)
    sub = subspace_precoder(csit["H22"], dims.tau + dims.delta1 + dims.delta2, exclude=zf)
    t, d1 = dims.tau, dims.delta1
    return (
        StreamGroup("V2_1", 2, sub[:, :t], 1.0, "private-subspace"),
        StreamGroup("V2_2", 2, zf[:, :dims.mu1], A2p, "private-zf"),
        StreamGroup("V2_3", 2, zf[:, dims.mu1:], A2, "private-zf"),
        StreamGroup("V2_4", 2, sub[:, t:t + d1], A2p - alpha.alpha1, "private-subspace"),
        _marker_group("V2_5", sub[:, t + d1:], A2, alpha),
    )


def build_precoders(config, csit, policy, alpha):
    """Private-stream precoders of the scheme that applies to ``config``."""
    if config.is_bc:
        groups = _bc_groups(config, csit, policy, alpha)
        antennas = (config.M,)
    elif config.M1 >= config.N2:
        groups = _ic1_groups(config, csit, policy, alpha)
        antennas = (config.M1, config.M2)
    else:
        groups = _ic2_groups(config, csit, policy, alpha)
        antennas = (config.M1, config.M2)
    return PrecoderBundle(groups=groups, antennas=antennas)


# ---------------------------------------------------------------- row transforms

def _annihilator(H):
    """Orthonormal rows r with r @ H^H = 0, for H of shape (M, N)."""
    return null_space(H, rcond=RCOND).conj().T


def _complement(rows, size):
    if rows.shape[0] == 0:
        return np.eye(size, dtype=complex)
    return null_space(rows, rcond=RCOND).conj().T


def _require_rank(block, expected, name):
    rank = np.linalg.matrix_rank(block, tol=SINGULAR_FLOOR) if block.size else 0
    if rank != expected:
        raise RankDeficientError(f"{name} has rank {rank}, expected {expected}")


def row_transform(channels):
    """Invertible T1, T2 exposing the zero rows of the IC channels when M1 <= N2."""
    if channels.kind is not ChannelKind.IC:
        raise RegimeError("row transforms are defined for the interference channel")
    H11, H12, H21, H22 = (channels[name] for name in ("H11", "H12", "H21", "H22"))
    M1, N1 = H11.shape
    M2, N2 = H22.shape
    if M1 > N2:
        raise RegimeError("row transforms need M1 <= N2")
    N1p, N2p = min(M1, N1), min(M2, N2)

    # Rx1: rows that see nothing from Tx1 go first
    zero1 = _annihilator(H11)
    T1 = np.vstack([zero1, _complement(zero1, N1)]) if zero1.shape[0] else np.eye(N1, dtype=complex)

    # Rx2: rows blind to Tx2 first, rows blind to Tx1 last
    head = _annihilator(H22)
    tail = _annihilator(H21)
    middle = _complement(np.vstack([head, tail]), N2)
    T2 = np.vstack([head, middle, tail])
    _require_rank(T1, N1, "T1")
    _require_rank(T2, N2, "T2")

    # The transformed blocks must keep full rank outside the zero rows
    blocks1 = {"H11": T1 @ H11.conj().T, "H12": T1 @ H12.conj().T}
    blocks2 = {"H21": T2 @ H21.conj().T, "H22": T2 @ H22.conj().T}
    _require_rank(blocks1["H11"][N1 - N1p:], N1p, "T1 H11^H")
    _require_rank(blocks2["H21"][:M1], M1, "T2 H21^H")
    _require_rank(blocks2["H22"][N2 - N2p:], N2p, "T2 H22^H")

    overlap = M1 + N2p - N2
    logger.debug("row transform: %d zero rows at Rx1, overlap %d at Rx2", N1 - N1p, overlap)
    return RowTransformPair(
        rx1=RowTransform(T1, blocks1, leading_zero_rows=N1 - N1p),
        rx2=RowTransform(T2, blocks2, leading_zero_rows=N2 - N2p,
                         trailing_zero_rows=N2 - M1, overlap_dim=overlap),
    )


# ---------------------------------------------------------------- residual interference

# dB to log2 of linear power
def _log2_power(snr_db):
    return np.asarray(snr_db, dtype=float) / 10.0 * np.log2(10.0)


def check_sweep(snr_db, min_points=4, min_span=30.0):
    snr_db = [float(s) for s in snr_db]
    if len(snr_db) < min_points:
        raise ConfigurationError(f"a slope fit needs at least {min_points} SNR points, got {len(snr_db)}")
    if max(snr_db) - min(snr_db) < min_span - 1e-9:
        raise ConfigurationError(f"SNR points must span at least {min_span:g} dB")
    return snr_db


def fit_slope(message, snr_db, values):
    x = _log2_power(snr_db)
    slope, intercept = np.polyfit(x, np.asarray(values, dtype=float), 1)
    residual = np.asarray(values) - (slope * x + intercept)
    return MessageSlope(message, float(slope), float(intercept), float(np.sqrt(np.mean(residual ** 2))))


def residual_slope(alpha, snr_db, trials=200, seed=7, workers=None):
    """Slope of log2 E|h^H w|^2 against log2 P for a ZF precoder built on imperfect CSIT.

    Two transmit antennas serve one single-antenna receiver; ``w`` zero-forces
    the estimate. The expected slope is ``-alpha``.
    """
    snr_db = check_sweep(snr_db)
    if trials < 200:
        raise ConfigurationError(f"residual sweeps need at least 200 trials, got {trials}")
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise ConfigurationError(f"alpha must lie in [0, 1], got {alpha}")

    def run(trial):
        rng = rng_for(seed, trial)
        h = complex_gaussian(rng, (2, 1))
        # A fresh estimate at every SNR point; the channel stays fixed over the sweep
        powers = []
        for index, db in enumerate(snr_db):
            P = 10.0 ** (db / 10.0)
            error = complex_gaussian(csit_rng(seed, trial, index), (2, 1), P ** (-alpha))
            w = zf_precoder(h - error, 1)
            powers.append(float(np.abs(h.conj().T @ w)[0, 0] ** 2))
        return powers

    # Rows come back in trial order whatever the worker count
    samples = np.array(ordered_map(run, range(trials), workers))
    frame = pd.DataFrame({
        "P_db": snr_db,
        "message_id": "residual",
        "mean_power": samples.mean(axis=0),
        "stderr": samples.std(axis=0, ddof=1) / np.sqrt(trials),
    })
    fit = fit_slope("residual", snr_db, np.log2(frame["mean_power"].to_numpy()))
    logger.info("residual slope alpha=%.3g -> %.4f", alpha, fit.slope)
    return SlopeEstimate(slopes=(fit,), snr_db=tuple(snr_db), trials=trials, seed=seed, rates=frame)


def snapshot(config, alpha, policy, seed, P, trial=0, index=0):
    """Every matrix one trial of a sweep uses at power ``P``, keyed by name.

    ``index`` is the position of ``P`` in the sweep, so the estimates match
    the ones the sweep drew there.
    """
    channels = draw_channels(config, seed, trial)
    csit = make_csit(channels, alpha, P, rng=csit_rng(seed, trial, index))
    bundle = build_precoders(config, csit, policy, alpha)
    matrices = dict(channels.matrices)
    matrices.update({f"{name}_hat": estimate for name, estimate in csit.estimates.items()})
    # Empty groups have no matrix to dump
    for group in bundle.groups:
        if group.streams:
            matrices[group.name] = group.columns
    # Row transforms exist for the IC with M1 <= N2 only
    if not config.is_bc and config.M1 <= config.N2:
        pair = row_transform(channels)
        matrices["T1"], matrices["T2"] = pair.rx1.T, pair.rx2.T
    return matrices
