"""User input to engine input: parsing, normalization and user-order reporting."""
from dataclasses import dataclass, replace # Import dataclass tools for the scenario record

from application.dof import ratesim # Import the rate simulator for sweep validation
from application.dof.allocation import RATE_SPLITTING, SPACE_TIME, ic2_optimal, optimal_policy # Import policy builders
from application.dof.errors import ConfigurationError # Import the input error type
from application.dof.regimes import align_alpha, classify, normalize # Import normalization and classification
from application.dof.regions import reorient, verdict # Import region builders and user-order reorientation
from application.models import AntennaConfig, CsitQuality, PowerPolicy # Import engine input types


@dataclass(frozen=True)
class Scenario:
    """A configuration as typed (``raw``) and as the engine sees it (``config``, ``alpha``)."""

    raw: AntennaConfig
    config: AntennaConfig
    alpha: CsitQuality

    @property
    def swapped(self):
        return self.config.swapped


def parse_counts(text):
    """``"4,2,3"`` to ``[4, 2, 3]``."""
    if isinstance(text, (list, tuple)):
        parts = list(text)
    else:
        parts = [part.strip() for part in str(text).split(",") if part.strip()]
    try:
        return [int(part) for part in parts]
    except (TypeError, ValueError):
        raise ConfigurationError(f"antenna counts must be integers, got {text!r}") from None


def parse_alpha(text):
    if isinstance(text, (list, tuple)):
        parts = list(text)
    else:
        parts = [part.strip() for part in str(text).split(",")]
    if len(parts) != 2:
        raise ConfigurationError(f"alpha needs two values alpha1,alpha2, got {text!r}")
    return CsitQuality(*parts)


def build_scenario(channel, antennas, alpha):
    raw = AntennaConfig.from_counts(channel, parse_counts(antennas))
    alpha = alpha if isinstance(alpha, CsitQuality) else parse_alpha(alpha)
    config = normalize(raw)
    return Scenario(raw, config, align_alpha(config, alpha))


def user_verdict(scenario):
    """Verdict with both regions expressed in the caller's user order."""
    result = verdict(scenario.config, scenario.alpha)
    if not scenario.swapped:
        return result
    return replace(result, achievable=reorient(result.achievable), outer=reorient(result.outer))


def choose_policy(scenario, A1=None, A2=None, A2p=None, rho=None, lam=0.0):
    """Explicit exponents when any is given, else the recommended policy.

    A fraction ``rho < 1`` without exponents selects the space-time scheme with
    the (alpha2, 1) slot; ``rho = 1`` alone is the recommended policy. Case II
    configurations have no single optimum; their policy is the solution of the
    boundary program at ``lam``.
    """
    config, alpha = scenario.config, scenario.alpha
    rho = 1.0 if rho is None else float(rho)
    explicit = any(value is not None for value in (A1, A2, A2p))
    if not explicit and rho < 1.0:
        A1, A2 = alpha.alpha2, 1.0
    if explicit or rho < 1.0:
        return PowerPolicy(A1=A1 or 0.0, A2=A2 or 0.0, A2p=A2p, rho=rho,
                           scheme=SPACE_TIME if rho < 1.0 else RATE_SPLITTING)
    if config.is_bc or classify(config, alpha).is_case_one:
        return optimal_policy(config, alpha)
    return ic2_optimal(config, alpha, lam).policy


def simulate(scenario, policy, snr_db, trials, seed, workers=None):
    """Slope fit for ``policy``; space-time policies go through the two-slot sweep."""
    config, alpha = scenario.config, scenario.alpha
    if policy.scheme == SPACE_TIME and policy.A1 == alpha.alpha2 and policy.A2 == 1.0:
        return ratesim.st_sweep(config, alpha, policy.rho, snr_db, trials, seed, workers)
    return ratesim.sweep_and_fit(config, alpha, policy, snr_db, trials, seed, workers)
