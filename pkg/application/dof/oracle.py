"""Brute-force grid maximizers that check every closed-form allocation.

Each ``grid_max_*`` function evaluates its objective on a full grid of power
exponents with numpy and returns a :class:`scipy.optimize.OptimizeResult`
(``x`` holds the maximizer, ``fun`` the maximum). Ties go to the largest first
coordinate, then the largest second coordinate.
"""
import logging # Import logging for the verification summary
from collections import Counter # Import Counter to tally Case II branches

import numpy as np # Import numpy to evaluate objectives on meshgrids
from scipy.optimize import OptimizeResult # Import OptimizeResult as the grid result container

from application.dof import allocation
from application.dof.errors import RegimeError, VerificationError
from application.dof.regimes import classify, derived_dims, phi_bc
from application.models import CheckResult, GridSpec, VerificationReport
from application.utils.numeric import TOLERANCE
from application.utils.parallel import ordered_map

logger = logging.getLogger(__name__)

# Largest accepted gap between a closed form and its grid maximum
DEFAULT_TOLERANCE = 0.02


# Accept a GridSpec, a bare step or None for the default step
def _grid(grid):
    if grid is None:
        return GridSpec()
    if isinstance(grid, GridSpec):
        return grid
    return GridSpec(float(grid))


def _argmax(values, first, second, feasible=None):
    values = np.asarray(values, dtype=float)
    if feasible is not None:
        values = np.where(feasible, values, -np.inf)
    best = float(np.max(values))
    if not np.isfinite(best):
        return None, best
    # Among ties, take the largest first coordinate, then the largest second
    ties = np.flatnonzero(values.ravel() >= best - 1e-12)
    a, b = first.ravel()[ties], second.ravel()[ties]
    pick = ties[np.lexsort((b, a))[-1]]
    return (float(first.ravel()[pick]), float(second.ravel()[pick])), best


def _result(x, fun, nfev, message):
    return OptimizeResult(x=x, fun=fun, nfev=nfev, success=x is not None,
                          status=0 if x is not None else 2, message=message)


def _bc_sum(config, alpha, A1, A2):
    M = config.M
    n1, n2 = min(config.N1, M), min(config.N2, M)
    dp1, dp2, rx1, rx2 = allocation.bc_parts(M, n1, n2, alpha.alpha1, A1, A2)
    return dp1, dp2, rx1, rx2


def grid_max_sum_bc(config, alpha, grid=None):
    """max over (A1, A2) of the BC sum DoF without space-time transmission."""
    mesh = _grid(grid)
    A1, A2 = np.meshgrid(mesh.axis(0.0, alpha.alpha2), mesh.axis(0.0, 1.0), indexing="ij")
    dp1, dp2, rx1, rx2 = _bc_sum(config, alpha, A1, A2)
    # Common DoF is the smaller receiver cap, floored at zero
    total = dp1 + dp2 + np.maximum(np.minimum(rx1, rx2), 0.0)
    x, best = _argmax(total, A1, A2)
    return _result(x, best, total.size, "BC sum-DoF grid complete")


# Space-time grids search rho only; the second axis is a dummy
def _mixture_axis(mesh):
    rho = mesh.axis(0.0, 1.0)
    return rho, np.zeros_like(rho)


def grid_max_st_bc(config, alpha, grid=None):
    """max over rho of the aggregate sum DoF of the two-slot space-time scheme."""
    if phi_bc(config, alpha) < -TOLERANCE:
        raise RegimeError("space-time grid needs Phi_BC >= 0")
    mesh = _grid(grid)
    rho, zeros = _mixture_axis(mesh)
    full = _bc_sum(config, alpha, alpha.alpha2, 1.0)
    other = _bc_sum(config, alpha, alpha.alpha2, alpha.alpha1)
    # rho of the slots use (alpha2, 1), the rest (alpha2, alpha1)
    dp1, dp2, rx1, rx2 = (rho * a + (1 - rho) * b for a, b in zip(full, other))
    total = dp1 + dp2 + np.maximum(np.minimum(rx1, rx2), 0.0)
    x, best = _argmax(total, rho, zeros)
    return _result(None if x is None else x[0], best, total.size, "BC space-time grid complete")


def _ic1_sum(config, alpha, A1, A2):
    dp1, dp2, rx1, rx2_sum, _ = allocation.ic1_parts(
        config.M1, config.M2, config.N1, config.N2, alpha.alpha1, A1, A2)
    return dp1 + dp2 + np.maximum(np.minimum(rx1, rx2_sum), 0.0)


def grid_max_sum_ic1(config, alpha, grid=None):
    mesh = _grid(grid)
    A1, A2 = np.meshgrid(mesh.axis(0.0, alpha.alpha2), mesh.axis(0.0, 1.0), indexing="ij")
    total = _ic1_sum(config, alpha, A1, A2)
    x, best = _argmax(total, A1, A2)
    return _result(x, best, total.size, "IC Case I sum-DoF grid complete")


def grid_max_st_ic1(config, alpha, grid=None):
    mesh = _grid(grid)
    rho, zeros = _mixture_axis(mesh)
    args = (config.M1, config.M2, config.N1, config.N2, alpha.alpha1)
    full = allocation.ic1_parts(*args, alpha.alpha2, 1.0)
    other = allocation.ic1_parts(*args, alpha.alpha2, alpha.alpha1)
    dp1, dp2, rx1, rx2_sum, _ = (rho * a + (1 - rho) * b for a, b in zip(full, other))
    total = dp1 + dp2 + np.maximum(np.minimum(rx1, rx2_sum), 0.0)
    x, best = _argmax(total, rho, zeros)
    return _result(None if x is None else x[0], best, total.size, "IC Case I space-time grid complete")


def grid_max_d2_ic2(config, alpha, lam, grid=None):
    """max d2 = dc2 + dp2 over feasible (A2, A2') for a fixed dc1 = lam."""
    mesh = _grid(grid)
    dims = derived_dims(config)
    A2, A2p = np.meshgrid(mesh.axis(0.0, 1.0), mesh.axis(alpha.alpha1, 1.0), indexing="ij")
    d2, feasible = allocation.ic2_program(dims, config.M1, config.N2, alpha.alpha1, lam, A2, A2p)
    # Infeasible pairs are masked to -inf
    x, best = _argmax(d2, A2, A2p, feasible)
    if x is None:
        raise RegimeError(f"no feasible exponents for lambda={lam} on {config.label()}")
    return _result(x, best, int(np.count_nonzero(feasible)), "IC Case II grid complete")


def _bc_checks(config, alpha, mesh):
    checks = []
    policy = allocation.bc_optimal_exponents(config, alpha)
    closed = allocation.dof_tuple(config, alpha, policy).sum_dof
    checks.append(CheckResult("bc-sum", closed, grid_max_sum_bc(config, alpha, mesh).fun))
    # The space-time closed form only applies when Phi_BC >= 0
    if phi_bc(config, alpha) >= 0:
        closed = allocation.bc_st_dof_tuple(config, alpha).sum_dof
        checks.append(CheckResult("bc-space-time", closed, grid_max_st_bc(config, alpha, mesh).fun))
    return checks


def _ic1_checks(config, alpha, mesh):
    policy = allocation.ic1_optimal_exponents(config, alpha)
    closed = allocation.dof_tuple(config, alpha, policy).sum_dof
    if policy.scheme == allocation.SPACE_TIME:
        return [CheckResult("ic1-space-time", closed, grid_max_st_ic1(config, alpha, mesh).fun)]
    return [CheckResult("ic1-sum", closed, grid_max_sum_ic1(config, alpha, mesh).fun)]


def _ic2_checks(config, alpha, mesh, samples):
    n = derived_dims(config).N1p

    def check(lam):
        solution = allocation.ic2_optimal(config, alpha, lam)
        oracle = grid_max_d2_ic2(config, alpha, lam, mesh)
        return CheckResult(f"ic2-d2@{lam:.6g}", solution.d2, oracle.fun, solution.branch)

    # Lambda samples run on the worker pool in order
    return ordered_map(check, [float(lam) for lam in np.linspace(0.0, n, samples)])


def run_verification(config, alpha, step=None, tolerance=DEFAULT_TOLERANCE, samples=11):
    """Compare every closed form that applies to ``config`` with its grid oracle."""
    mesh = _grid(step)
    regime = classify(config, alpha)
    if config.is_bc:
        checks = _bc_checks(config, alpha, mesh)
    elif regime.is_case_one:
        checks = _ic1_checks(config, alpha, mesh)
    else:
        checks = _ic2_checks(config, alpha, mesh, samples)

    # Branch counts only exist for Case II checks
    coverage = Counter(check.branch for check in checks if check.branch)
    report = VerificationReport(config=config, alpha=alpha, step=mesh.step, tolerance=tolerance,
                                checks=tuple(checks), branch_coverage=dict(coverage))
    logger.info("verified %s alpha=%s: %d checks, max deviation %.3g (tolerance %.3g)",
                config.label(), alpha.as_tuple(), len(checks), report.max_deviation, tolerance)
    return report


def require_passed(report):
    if not report.passed:
        worst = max(report.checks, key=lambda check: check.deviation)
        raise VerificationError(
            f"{worst.name} deviates by {worst.deviation:.6g} > {report.tolerance:g} "
            f"on {report.config.label()}", report=report)
    return report
