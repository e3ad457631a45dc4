"""Closed-form power allocation for the rate-splitting schemes.

Every scheme is described by a :class:`PowerPolicy`. A policy with ``rho < 1``
is a space-time scheme: its DoF tuple is the rho-weighted mixture of the
per-slot common-message caps, decoded on the aggregate of all slots.

The ``bc_parts``/``ic1_parts``/``_ic2_parts`` helpers accept numpy arrays as
well as floats so the grid oracle can evaluate whole grids with them.
"""
import logging # Import logging to report clipped fractions and chosen allocations
import math # Import math for finiteness checks and infinities

import numpy as np # Import numpy so the part helpers evaluate whole grids

from application.dof.errors import ConfigurationError, RegimeError # Import engine errors for bad input and wrong regimes
from application.dof.regimes import (classify, derived_dims, ic_dims, phi_bc, phi_ic) # Import regime discriminants and stream counts
from application.dof.regions import ic2_constraints # Import the Case II region constraints to label boundary lines
from application.models import (Allocation, ChannelKind, ConstraintLabel, DofTuple, Ic2Caps,
                                Ic2Solution, PowerPolicy) # Import engine data types
from application.utils.numeric import TOLERANCE, clip_unit, pos, ratio # Import numeric helpers

logger = logging.getLogger(__name__)

RATE_SPLITTING = "rate-splitting"
SPACE_TIME = "space-time"

# Case II.2 branches in increasing order of lambda
IC2_BRANCHES = ("F", "E", "D", "C", "B", "A")
IC2_BRANCHES_M2_SMALL = ("II1-full", "II1-shared")


def _check_range(name, value, low, high):
    if not math.isfinite(value) or value < low - TOLERANCE or value > high + TOLERANCE:
        raise ConfigurationError(f"{name}={value} outside [{low:g}, {high:g}]")
    return min(max(float(value), low), high)


def _require(config, kind):
    if not config.normalized:
        raise ConfigurationError("configuration must be normalized first")
    if config.kind is not kind:
        raise RegimeError(f"expected a {kind.value.upper()} configuration")


# ---------------------------------------------------------------- broadcast channel

def _bc_sizes(config):
    M = config.M
    return M, min(config.N1, M), min(config.N2, M)


def bc_parts(M, n1, n2, alpha1, A1, A2):
    """(dp1, dp2, common cap at Rx1, common cap at Rx2)."""
    # Only the part of V22 above Rx1's estimate error leaks into Rx1
    excess = pos(A2 - alpha1)
    shared = n1 + n2 - M
    dp1 = (M - n2) * pos(A1 - excess)
    dp2 = (M - n1) * A2 + shared * excess
    rx1 = n1 - (M - n2) * np.maximum(A1, excess) - shared * excess
    rx2 = n2 - dp2
    return dp1, dp2, rx1, rx2


def _bc_tuple(dp1, dp2, rx1, rx2):
    dc = min(rx1, rx2)
    clipped = dc < -TOLERANCE
    if clipped:
        logger.debug("common DoF %.6g clipped at 0", dc)
    dc = max(dc, 0.0)
    return DofTuple(
        dc=dc, dp1=dp1, dp2=dp2,
        caps={"rx1": rx1, "rx2": rx2},
        splits=((dc + dp1, dp2), (dp1, dc + dp2)),
        clipped=clipped,
    )


def bc_dof_tuple(config, alpha, A1, A2):
    """DoF tuple of the BC rate-splitting scheme with power exponents (A1, A2)."""
    _require(config, ChannelKind.BC)
    A1 = _check_range("A1", A1, 0.0, alpha.alpha2)
    A2 = _check_range("A2", A2, 0.0, 1.0)
    M, n1, n2 = _bc_sizes(config)
    return _bc_tuple(*(float(v) for v in bc_parts(M, n1, n2, alpha.alpha1, A1, A2)))


def bc_optimal_exponents(config, alpha):
    """Exponents maximizing the BC sum DoF without space-time transmission."""
    _require(config, ChannelKind.BC)
    M, n1, n2 = _bc_sizes(config)
    a1, a2 = alpha.alpha1, alpha.alpha2
    first = 1.0 if M == n1 else (n2 - n1 + (M - n2) * a2) / (M - n1)
    # Undefined for equal receivers; the first arm then decides
    second = -math.inf if n2 == n1 else 1.0 - (M - n2) * a1 / (n2 - n1)
    A2 = min(max(first, second), 1.0)
    return PowerPolicy(A1=a2, A2=A2, rho=1.0, scheme=RATE_SPLITTING)


def bc_st_fraction(config, alpha):
    return _bc_st_fraction(config, alpha)[0]


def _bc_st_fraction(config, alpha):
    _require(config, ChannelKind.BC)
    phi = phi_bc(config, alpha)
    if phi < -TOLERANCE:
        raise RegimeError(f"space-time transmission needs Phi_BC >= 0, got {phi:.6g}")
    M, n1, n2 = _bc_sizes(config)
    a1, a2 = alpha.alpha1, alpha.alpha2
    denominator = (n2 - n1) * (1 - a1) + (M - n2) * (a2 - pos(a1 + a2 - 1))
    rho, clipped = clip_unit(ratio(max(phi, 0.0), denominator))
    if clipped:
        logger.warning("rho*_BC clipped to %.6g for %s alpha=%s", rho, config.label(), alpha.as_tuple())
    return rho, clipped


def bc_st_policy(config, alpha):
    rho, clipped = _bc_st_fraction(config, alpha)
    return PowerPolicy(A1=alpha.alpha2, A2=1.0, rho=rho, scheme=SPACE_TIME, rho_clipped=clipped)


def _bc_mixture(config, alpha, policy):
    M, n1, n2 = _bc_sizes(config)
    full = bc_parts(M, n1, n2, alpha.alpha1, policy.A1, policy.A2)
    other = bc_parts(M, n1, n2, alpha.alpha1, policy.A1, alpha.alpha1)
    rho = policy.rho
    return [float(rho * a + (1 - rho) * b) for a, b in zip(full, other)]


def bc_st_dof_tuple(config, alpha):
    """Aggregate DoF tuple of the BC space-time scheme at rho*_BC."""
    policy = bc_st_policy(config, alpha)
    return _bc_tuple(*_bc_mixture(config, alpha, policy))


# ---------------------------------------------------------------- IC, M1 >= N2

def ic1_parts(M1, M2, N1, N2, alpha1, A1, A2):
    """(dp1, dp2, Rx1 cap, Rx2 cap for c1 and the sum, Rx2 cap for c2)."""
    N2p = min(M2, N2)
    excess = pos(A2 - alpha1)
    leak = N1 + N2p - M2
    dp1 = (M1 - N2) * pos(A1 - excess)
    dp2 = (M2 - N1) * A2 + leak * excess
    rx1 = N1 - (M1 - N2) * np.maximum(A1, excess) - (N1 + N2 - M1) * excess
    rx2_sum = N2 - (M2 - N1) * A2 - leak * excess
    rx2_c2 = N2p - (M2 - N1) * A2 - leak * excess
    return dp1, dp2, rx1, rx2_sum, rx2_c2


def _ic1_tuple(dp1, dp2, rx1, rx2_sum, rx2_c2):
    # Rx2 decodes c2 on its N2' effective dimensions, c1 on all N2
    dc1 = min(rx1, rx2_sum)
    dc2 = min(rx1, rx2_c2, rx2_sum)
    dc = min(rx1, rx2_sum)
    clipped = min(dc1, dc2) < -TOLERANCE
    dc1, dc2, dc = max(dc1, 0.0), max(dc2, 0.0), max(dc, 0.0)
    return DofTuple(
        dc=dc, dp1=dp1, dp2=dp2, dc1=dc1, dc2=dc2,
        caps={"rx1": rx1, "rx2_c1": rx2_sum, "rx2_c2": rx2_c2, "rx2_sum": rx2_sum},
        splits=((dc1 + dp1, dp2), (dp1, dc2 + dp2)),
        clipped=clipped,
    )


def _require_case_one(config):
    _require(config, ChannelKind.IC)
    if config.M1 < config.N2:
        raise RegimeError("the Case I scheme needs M1 >= N2")


def ic1_dof_tuple(config, alpha, A1, A2):
    """DoF tuple of the IC scheme when Tx1 can zero-force towards all of Rx2."""
    _require_case_one(config)
    A1 = _check_range("A1", A1, 0.0, alpha.alpha2)
    A2 = _check_range("A2", A2, 0.0, 1.0)
    parts = ic1_parts(config.M1, config.M2, config.N1, config.N2, alpha.alpha1, A1, A2)
    return _ic1_tuple(*(float(v) for v in parts))


def _ic1_st_condition(config, alpha):
    M1, M2, N2 = config.M1, config.M2, config.N2
    return (M1 - M2) / (M1 - N2) * alpha.alpha1 if M1 > N2 else -math.inf


def ic1_optimal_exponents(config, alpha):
    """Best single-profile exponents for Case I, or the space-time policy when it wins."""
    _require_case_one(config)
    M1, M2, N1, N2 = config.M1, config.M2, config.N1, config.N2
    a1, a2 = alpha.alpha1, alpha.alpha2
    if M2 <= N2:
        return PowerPolicy(A1=0.0, A2=1.0)
    if phi_ic(config, alpha) <= 0:
        A2 = min((N2 - N1 + (M1 - N2) * a2) / (M2 - N1), 1.0)
        return PowerPolicy(A1=a2, A2=A2)
    k_alpha = _ic1_st_condition(config, alpha)
    if k_alpha >= 1 - a2:
        # Rx2 out-decodes Rx1 in both slot types, so space-time cannot help
        return PowerPolicy(A1=1 - k_alpha, A2=1.0)
    return ic1_st_policy(config, alpha)


def ic1_st_fraction(config, alpha):
    return _ic1_st_fraction(config, alpha)[0]


def _ic1_st_fraction(config, alpha):
    _require_case_one(config)
    M1, M2, N1, N2 = config.M1, config.M2, config.N1, config.N2
    a1, a2 = alpha.alpha1, alpha.alpha2
    if M2 <= N2:
        raise RegimeError("space-time transmission applies to Case I.2 (M2 > N2) only")
    phi = phi_ic(config, alpha)
    if phi < -TOLERANCE:
        raise RegimeError(f"space-time transmission needs Phi_IC >= 0, got {phi:.6g}")
    if _ic1_st_condition(config, alpha) > 1 - a2 + TOLERANCE:
        raise RegimeError("space-time transmission does not help when (M1-M2)/(M1-N2)*alpha1 > 1-alpha2")
    X1, _ = ic_dims(config)
    denominator = (N2 - N1) * (1 - a1) + (X1 - N2) * (a2 - pos(a1 + a2 - 1))
    rho, clipped = clip_unit(ratio(max(phi, 0.0), denominator))
    if clipped:
        logger.warning("rho*_IC clipped to %.6g for %s alpha=%s", rho, config.label(), alpha.as_tuple())
    return rho, clipped


def ic1_st_policy(config, alpha):
    rho, clipped = _ic1_st_fraction(config, alpha)
    return PowerPolicy(A1=alpha.alpha2, A2=1.0, rho=rho, scheme=SPACE_TIME, rho_clipped=clipped)


def _ic1_mixture(config, alpha, policy):
    args = (config.M1, config.M2, config.N1, config.N2, alpha.alpha1)
    full = ic1_parts(*args, policy.A1, policy.A2)
    other = ic1_parts(*args, policy.A1, alpha.alpha1)
    rho = policy.rho
    return [float(rho * a + (1 - rho) * b) for a, b in zip(full, other)]


def ic1_st_dof_tuple(config, alpha):
    policy = ic1_st_policy(config, alpha)
    return _ic1_tuple(*_ic1_mixture(config, alpha, policy))


# ---------------------------------------------------------------- IC, M1 <= N2

def _ic2_parts(dims, M1, alpha1, A2, A2p):
    """Common-message caps and private DoF of the Case II scheme."""
    n, xi = dims.N1p, dims.xi
    excess = pos(A2 - alpha1)
    rx1 = n - xi * (A2p - alpha1) - (n - xi) * excess
    rx2_c1 = M1 - dims.mu2 * A2 - dims.delta2 * excess
    private = (dims.mu2 * A2 + dims.delta2 * excess + dims.mu1 * A2p
               + dims.delta1 * (A2p - alpha1) + dims.tau)
    return rx1, rx2_c1, private


def ic2_dof_caps(config, alpha, A2, A2p):
    dims = derived_dims(config)
    A2p = _check_range("A2p", A2p, alpha.alpha1, 1.0)
    A2 = _check_range("A2", A2, 0.0, A2p)
    rx1, rx2_c1, private = (float(v) for v in _ic2_parts(dims, config.M1, alpha.alpha1, A2, A2p))
    return Ic2Caps(rx1_common=rx1, rx2_c1=rx2_c1, rx2_c2=dims.N2p - private,
                   rx2_sum=config.N2 - private, dp2=private)


def ic2_program(dims, M1, N2, alpha1, lam, A2, A2p):
    """Objective d2 = dc2 + dp2 of the Case II program and its feasibility mask.

    dc2 is the largest value the two dc2 constraints allow; it is not
    sign-constrained. Works elementwise on arrays.
    """
    rx1, rx2_c1, private = _ic2_parts(dims, M1, alpha1, A2, A2p)
    dc2 = np.minimum(rx1 - lam, np.minimum(dims.N2p, N2 - lam) - private)
    feasible = ((lam <= rx1 + TOLERANCE) & (lam <= rx2_c1 + TOLERANCE)
                & (A2 <= A2p + TOLERANCE) & (A2 >= -TOLERANCE) & (A2p >= alpha1 - TOLERANCE)
                & (A2p <= 1 + TOLERANCE))
    return dc2 + private, feasible


def ic2_branch_intervals(config, alpha):
    """Lambda interval of every branch valid for this configuration, lowest lambda first."""
    _require(config, ChannelKind.IC)
    dims = derived_dims(config)
    M1, M2, N2 = config.M1, config.M2, config.N2
    n, xi, mu2, delta2 = dims.N1p, dims.xi, dims.mu2, dims.delta2
    a1 = alpha.alpha1

    if M2 <= N2:
        return {"II1-full": (0.0, n * a1), "II1-shared": (n * a1, float(n))}

    ceiling = M1 - mu2 * a1
    e_up = ratio((mu2 * n + delta2 * xi) * a1, M1 - n + xi, zero_over_zero=math.inf)
    d_up = math.inf if M1 == n else n * mu2 * a1 / (M1 - n)
    candidates = {
        "F": (0.0, delta2 * a1),
        "E": (delta2 * a1, min(e_up, ceiling, n)),
        "D": (e_up, min(ceiling, d_up, n)) if xi > 0 else None,
        "C": (d_up, min(ceiling, n)) if M1 != n else None,
        "B": (ceiling, n - xi * (1 - a1)),
        "A": (max(ceiling, n - xi * (1 - a1)), float(n)),
    }
    intervals = {}
    for name, span in candidates.items():
        if span is not None and span[1] >= span[0] - TOLERANCE:
            intervals[name] = (float(span[0]), float(span[1]))
    return intervals


def _ic2_point(config, dims, a1, branch, lam):
    M1, n, xi, mu2, delta2 = config.M1, dims.N1p, dims.xi, dims.mu2, dims.delta2
    if branch == "II1-full" or branch == "F":
        return 1.0, 1.0
    if branch == "II1-shared" or branch == "C":
        x = (n - lam + n * a1) / n
        return x, x
    if branch == "E":
        return (M1 - lam + delta2 * a1) / M1, 1.0
    if branch == "D":
        A2 = (M1 - lam + delta2 * a1) / M1
        A2p = (1 - (M1 - n + xi) * lam / (M1 * xi)
               + (mu2 * n + delta2 * xi) * a1 / (M1 * xi))
        return A2, A2p
    if branch == "B":
        return (M1 - lam) / mu2, 1.0
    if branch == "A":
        A2 = a1 if mu2 == 0 else (M1 - lam) / mu2
        A2p = 1.0 if xi == 0 else a1 + (n - lam) / xi
        return A2, A2p
    raise RegimeError(f"unknown branch {branch!r}")


def ic2_optimal(config, alpha, lam):
    """Largest d2 = dc2 + dp2 for a given dc1 = lam, with the exponents achieving it."""
    _require(config, ChannelKind.IC)
    dims = derived_dims(config)
    n = dims.N1p
    if not math.isfinite(lam) or lam < -TOLERANCE or lam > n + TOLERANCE:
        raise ConfigurationError(f"lambda={lam} outside [0, {n}]")
    lam = min(max(float(lam), 0.0), float(n))

    for branch, (lo, hi) in ic2_branch_intervals(config, alpha).items():
        if lo - TOLERANCE <= lam <= hi + TOLERANCE:
            break
    else:
        raise RegimeError(f"no closed-form branch covers lambda={lam} for {config.label()}")

    A2, A2p = _ic2_point(config, dims, alpha.alpha1, branch, lam)
    # Keep alpha1 <= A2' <= 1 and 0 <= A2 <= A2'
    A2p = min(max(A2p, alpha.alpha1), 1.0)
    A2 = min(max(A2, 0.0), A2p)
    d2, _ = ic2_program(dims, config.M1, config.N2, alpha.alpha1, lam, A2, A2p)
    policy = PowerPolicy(A1=0.0, A2=A2, A2p=A2p)
    return Ic2Solution(policy=policy, d2=float(d2), branch=branch, lam=lam)


def ic2_constraint_line(config, alpha, branch):
    """The region constraint that (lam, d2(lam)) runs along inside ``branch``."""
    intervals = ic2_branch_intervals(config, alpha)
    if branch not in intervals:
        raise RegimeError(f"branch {branch!r} does not hold for {config.label()} at alpha1={alpha.alpha1:g}")
    if branch in ("II1-full", "F", "E", "B"):
        label = ConstraintLabel.L1
    elif branch in ("II1-shared", "C"):
        label = ConstraintLabel.L2
    # The A and D segments lie on L3 when N2 > M1 + N1
    elif config.N2 > config.M1 + config.N1:
        label = ConstraintLabel.L3
    elif branch == "D":
        label = ConstraintLabel.L4
    else:
        label = ConstraintLabel.L5
    for item in ic2_constraints(config, alpha.alpha1):
        if item.label is label:
            return item
    raise RegimeError(f"constraint {label.value} is not part of the region of {config.label()}")


def ic2_boundary(config, alpha, count=11):
    """Solutions at ``count`` evenly spaced lambda values on [0, N1']."""
    n = derived_dims(config).N1p
    return tuple(ic2_optimal(config, alpha, float(lam)) for lam in np.linspace(0.0, n, count))


# ---------------------------------------------------------------- dispatch

def dof_tuple(config, alpha, policy):
    """DoF tuple of ``policy`` on a BC or a Case I IC, space-time mixtures included."""
    if config.is_bc:
        _require(config, ChannelKind.BC)
        if policy.rho < 1.0:
            return _bc_tuple(*_bc_mixture(config, alpha, policy))
        return bc_dof_tuple(config, alpha, policy.A1, policy.A2)
    _require_case_one(config)
    if policy.rho < 1.0:
        return _ic1_tuple(*_ic1_mixture(config, alpha, policy))
    return ic1_dof_tuple(config, alpha, policy.A1, policy.A2)


def optimal_policy(config, alpha):
    """Sum-DoF maximizing policy: space-time whenever the discriminant is positive."""
    if config.is_bc:
        if phi_bc(config, alpha) > 0:
            return bc_st_policy(config, alpha)
        return bc_optimal_exponents(config, alpha)
    return ic1_optimal_exponents(config, alpha)


def allocate(config, alpha, samples=11):
    """Recommended policy and DoF tuple, or the lambda boundary for Case II."""
    regime = classify(config, alpha)
    if not config.is_bc and not regime.is_case_one:
        boundary = ic2_boundary(config, alpha, samples)
        return Allocation(config, alpha, regime.tag, boundary=boundary)
    policy = optimal_policy(config, alpha)
    result = Allocation(config, alpha, regime.tag, policy=policy,
                        dof=dof_tuple(config, alpha, policy))
    logger.info("allocation %s alpha=%s regime=%s scheme=%s sum=%.6g", config.label(),
                alpha.as_tuple(), regime.tag.value, policy.scheme, result.dof.sum_dof)
    return result

