"""Achievable and outer-bound DoF regions as labeled half-plane sets.

A region is the polygon cut out of the first quadrant by constraints of the
form c1*d1 + c2*d2 <= rhs. Vertices are enumerated by intersecting every pair
of boundary lines and keeping the feasible points.
"""
import itertools # Import itertools to intersect every pair of boundary lines
import logging # Import logging to trace regions and verdicts

import numpy as np # Import numpy for the 2x2 line intersections

from application.dof.errors import ConfigurationError, RegimeError # Import engine errors
from application.dof.regimes import (alpha0_bc, alpha0_ic, bc_dims, classify, derived_dims,
                                     ic_dims, normalize) # Import regime helpers and stream counts
from application.models import (AntennaConfig, ChannelKind, ConstraintLabel, DofRegion,
                                LinearConstraint, Optimality, Provenance, RegimeTag,
                                RegionVerdict, Vertex) # Import region data types
from application.utils.numeric import TOLERANCE # Import the shared feasibility tolerance

logger = logging.getLogger(__name__)

L = ConstraintLabel

# Constraints each Table-style regime keeps active; the rest are emitted flagged inactive
ACTIVE_LABELS = {
    RegimeTag.BC_PHI_NONPOS: {L.L1},
    RegimeTag.BC_PHI_POS: {L.L1, L.L2},
    RegimeTag.IC_I1: {L.L1, L.L2},
    RegimeTag.IC_I2_PHI_NONPOS: {L.L1},
    RegimeTag.IC_I2_PHI_POS: {L.L1, L.L2},
    RegimeTag.IC_II1: {L.L1, L.L2},
    RegimeTag.IC_II2A_LOW: {L.L1, L.L2, L.L3},
    RegimeTag.IC_II2A_HIGH: {L.L1, L.L3},
    RegimeTag.IC_II2B_LOW: {L.L1, L.L2, L.L4},
    RegimeTag.IC_II2B_MID: {L.L1, L.L4, L.L5},
    RegimeTag.IC_II2B_HIGH: {L.L1, L.L5},
}

_SWAPPED_LABELS = {L.L0: L.L0P, L.L0P: L.L0, L.AXIS1: L.AXIS2, L.AXIS2: L.AXIS1}


def _axes():
    return (
        LinearConstraint(L.AXIS1, 1.0, 0.0, 0.0, sense="ge"),
        LinearConstraint(L.AXIS2, 0.0, 1.0, 0.0, sense="ge"),
    )


def corner_points(constraints, tol=TOLERANCE):
    """Extreme points of the polygon, counterclockwise from the origin."""
    constraints = tuple(constraints)
    if not constraints:
        raise ConfigurationError("cannot enumerate vertices of an empty constraint set")
    labels = {c.label for c in constraints}
    if not {L.L0, L.L0P} <= labels:
        raise ConfigurationError("region is unbounded without both single-user constraints")
    if not {L.AXIS1, L.AXIS2} <= labels:
        constraints = constraints + _axes()

    candidates = []
    for first, second in itertools.combinations(constraints, 2):
        lhs = np.array([[first.c1, first.c2], [second.c1, second.c2]], dtype=float)
        if abs(np.linalg.det(lhs)) < 1e-12:
            continue
        d1, d2 = np.linalg.solve(lhs, np.array([first.rhs, second.rhs], dtype=float))
        if all(c.slack(d1, d2) >= -tol for c in constraints):
            candidates.append((float(d1), float(d2)))

    unique = []
    for point in candidates:
        if not any(np.hypot(point[0] - q[0], point[1] - q[1]) < tol for q in unique):
            unique.append(point)
    if not unique:
        raise ConfigurationError("constraint set is infeasible")

    pts = np.array(unique)
    centre = pts.mean(axis=0)
    order = np.argsort(np.arctan2(pts[:, 1] - centre[1], pts[:, 0] - centre[0]), kind="stable")
    pts = pts[order]
    start = int(np.argmin(np.hypot(pts[:, 0], pts[:, 1])))
    pts = np.roll(pts, -start, axis=0)

    vertices = []
    for d1, d2 in pts:
        # Snap round-off so the origin and axis points print cleanly
        d1 = 0.0 if abs(d1) < tol else float(d1)
        d2 = 0.0 if abs(d2) < tol else float(d2)
        tight = tuple(c.label.value for c in constraints if abs(c.slack(d1, d2)) <= tol)
        vertices.append(Vertex(d1, d2, tight))
    return vertices


def _build(constraints, provenance, regime=None):
    regime_tag = regime.tag if regime is not None else None
    active = ACTIVE_LABELS.get(regime_tag)
    flagged = []
    for item in constraints:
        if active is not None and item.label not in (L.L0, L.L0P) and item.label not in active:
            item = LinearConstraint(item.label, item.c1, item.c2, item.rhs, active=False)
        flagged.append(item)
    flagged = tuple(flagged) + _axes()
    return DofRegion(flagged, tuple(corner_points(flagged)), provenance, regime_tag)


def _bc_constraints(M, N1, N2, alpha0, alpha1):
    X, Y1, Y2 = min(M, N1 + N2), min(M, N1), min(M, N2)
    return [
        LinearConstraint(L.L0, 1.0, 0.0, float(Y1)),
        LinearConstraint(L.L0P, 0.0, 1.0, float(Y2)),
        LinearConstraint(L.L1, 1.0, 1.0, Y2 + (X - Y2) * alpha0),
        LinearConstraint(L.L2, 1.0 / Y1, 1.0 / Y2, 1.0 + (X - Y1) * alpha1 / Y2),
    ]


def _ic1_constraints(config, alpha0, alpha1):
    N1, N2 = config.N1, config.N2
    N2p = min(config.M2, N2)
    X1, X2 = ic_dims(config)
    return [
        LinearConstraint(L.L0, 1.0, 0.0, float(N1)),
        LinearConstraint(L.L0P, 0.0, 1.0, float(N2p)),
        LinearConstraint(L.L1, 1.0, 1.0, N2p + (X1 - N2) * alpha0),
        LinearConstraint(L.L2, 1.0 / N1, 1.0 / N2p, 1.0 + (X2 - N1) * alpha1 / N2p),
    ]


def ic2_constraints(config, alpha1):
    M1, M2, N1, N2 = config.M1, config.M2, config.N1, config.N2
    dims = derived_dims(config)
    n, N2p, N1pp = dims.N1p, dims.N2p, dims.N1pp
    _, X2 = ic_dims(config)

    constraints = [
        LinearConstraint(L.L0, 1.0, 0.0, float(n)),
        LinearConstraint(L.L0P, 0.0, 1.0, float(N2p)),
        LinearConstraint(L.L1, 1.0, 1.0, float(N2p)),
        LinearConstraint(L.L2, 1.0 / n, 1.0 / (N2p - N1 + n),
                         (N2p + (X2 - N1) * alpha1) / (N2p - N1 + n)),
    ]
    if M2 >= N2 and N1 + M1 <= N2:
        width = N2 - N1pp + n
        constraints.append(
            LinearConstraint(L.L3, 1.0 / n, 1.0 / width, (N2 + (N2 - N1pp) * alpha1) / width))
    if M2 >= N2 and N1 + M1 >= N2:
        width = N2 - N1 + M1
        slope = (N2 - N1pp) / width + dims.mu2 * (M1 + N1 - N2) / (M1 * width)
        constraints.append(LinearConstraint(L.L4, 1.0 / M1, 1.0 / width, N2 / width + slope * alpha1))
        constraints.append(LinearConstraint(L.L5, 1.0, 0.5, 0.5 * (M1 + N1 + (N2 - N1pp) * alpha1)))
    return constraints


def bc_region(config, alpha):
    if config.kind is not ChannelKind.BC:
        raise RegimeError("bc_region needs a BC configuration")
    regime = classify(config, alpha)
    constraints = _bc_constraints(config.M, config.N1, config.N2,
                                  alpha0_bc(config, alpha), alpha.alpha1)
    return _build(constraints, Provenance.ACHIEVABLE_BC, regime)


def ic_region(config, alpha):
    if config.kind is not ChannelKind.IC:
        raise RegimeError("ic_region needs an IC configuration")
    regime = classify(config, alpha)
    if regime.is_case_one:
        constraints = _ic1_constraints(config, alpha0_ic(config, alpha), alpha.alpha1)
    else:
        constraints = ic2_constraints(config, alpha.alpha1)
    return _build(constraints, Provenance.ACHIEVABLE_IC, regime)


def achievable_region(config, alpha):
    if config.is_bc:
        return bc_region(config, alpha)
    return ic_region(config, alpha)


def cooperative_config(config):
    """The BC obtained when both IC transmitters pool their antennas."""
    return normalize(AntennaConfig.bc(config.M1 + config.M2, config.N1, config.N2))


def outer_region(config, alpha):
    if config.is_bc:
        base, provenance = config, Provenance.OUTER_BC
    else:
        base, provenance = cooperative_config(config), Provenance.OUTER_IC
    constraints = _bc_constraints(base.M, base.N1, base.N2, alpha.alpha2, alpha.alpha1)
    return _build(constraints, provenance)


def no_csit_region(config):
    """Reference region with every CSIT-dependent term dropped."""
    if config.is_bc:
        constraints = _bc_constraints(config.M, config.N1, config.N2, 0.0, 0.0)
    elif config.M1 >= config.N2:
        constraints = _ic1_constraints(config, 0.0, 0.0)
    else:
        constraints = ic2_constraints(config, 0.0)
    return _build(constraints, Provenance.NO_CSIT)


def perfect_csit_region(config):
    if not config.is_bc:
        raise RegimeError("the perfect-CSIT reference region is defined for the BC only")
    X, Y1, Y2 = bc_dims(config)
    constraints = [
        LinearConstraint(L.L0, 1.0, 0.0, float(Y1)),
        LinearConstraint(L.L0P, 0.0, 1.0, float(Y2)),
        LinearConstraint(L.L1, 1.0, 1.0, float(X)),
    ]
    return _build(constraints, Provenance.PERFECT_CSIT)


def same_vertices(first, second, tol=TOLERANCE):
    a, b = first.points(), second.points()
    return a.shape == b.shape and bool(np.all(np.abs(a - b) < tol))


def reorient(region):
    """Express a region computed on swapped users in the caller's user order."""
    constraints = []
    for item in region.constraints:
        label = _SWAPPED_LABELS.get(item.label, item.label)
        constraints.append(LinearConstraint(label, item.c2, item.c1, item.rhs,
                                            active=item.active, sense=item.sense))
    constraints = tuple(constraints)
    return DofRegion(constraints, tuple(corner_points(constraints)), region.provenance,
                     region.regime, swapped=not region.swapped)


def verdict(config, alpha):
    regime = classify(config, alpha)
    achievable = achievable_region(config, alpha)
    outer = outer_region(config, alpha)
    tag = regime.tag

    if config.is_bc and tag is RegimeTag.BC_PHI_NONPOS:
        optimal, rationale = Optimality.YES, "BC with Phi_BC <= 0"
    elif config.is_bc and config.M <= config.N2:
        optimal, rationale = Optimality.YES, "BC with M <= N2"
    elif tag is RegimeTag.IC_I1:
        optimal, rationale = Optimality.YES, "IC case I.1 (M1 >= N2, M2 <= N2)"
    elif tag is RegimeTag.IC_I2_PHI_NONPOS:
        optimal, rationale = Optimality.YES, "IC case I.2 with Phi_IC <= 0"
    elif tag is RegimeTag.IC_II1 and config.N1 <= config.M1 <= config.N2:
        optimal, rationale = Optimality.YES, "IC case II.1 with N1 <= M1 <= N2"
    elif same_vertices(achievable, outer):
        optimal, rationale = Optimality.YES, "achievable and outer vertices coincide"
    else:
        optimal, rationale = Optimality.UNKNOWN, f"{tag.value}: outer bound not shown tight"

    logger.debug("verdict %s %s -> %s (%s)", config.label(), alpha.as_tuple(), optimal.value, rationale)
    return RegionVerdict(achievable, outer, optimal, rationale)
