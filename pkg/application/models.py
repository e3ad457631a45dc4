"""Domain value types shared by the DoF engine, the command line and the API.

All types are frozen dataclasses so they can be passed between worker threads
and used as cache keys without copying.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np
import pandas as pd

from application.dof.errors import ConfigurationError


class ChannelKind(str, Enum):
    BC = "bc"
    IC = "ic"


@dataclass(frozen=True)
class AntennaConfig:
    """Antenna counts of a two-receiver BC (M1 == M2 == M) or IC."""

    kind: ChannelKind
    M1: int
    M2: int
    N1: int
    N2: int
    normalized: bool = False
    swapped: bool = False
    notes: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "kind", ChannelKind(self.kind))
        for name in ("M1", "M2", "N1", "N2"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise ConfigurationError(f"antenna count {name} must be an integer, got {value!r}")
            if value < 1:
                raise ConfigurationError(f"antenna count {name} must be at least 1, got {value}")
            object.__setattr__(self, name, int(value))
        if self.kind is ChannelKind.BC and self.M1 != self.M2:
            raise ConfigurationError("a broadcast channel has a single transmitter")

    @classmethod
    def bc(cls, M, N1, N2):
        return cls(ChannelKind.BC, M, M, N1, N2)

    @classmethod
    def ic(cls, M1, M2, N1, N2):
        return cls(ChannelKind.IC, M1, M2, N1, N2)

    @classmethod
    def from_counts(cls, kind, counts):
        """Build from a channel kind and the antenna list as typed by a user."""
        try:
            kind = ChannelKind(kind)
        except ValueError:
            raise ConfigurationError(f"unknown channel kind {kind!r}") from None
        expected = 3 if kind is ChannelKind.BC else 4
        if len(counts) != expected:
            raise ConfigurationError(
                f"{kind.value} needs {expected} antenna counts, got {len(counts)}"
            )
        if kind is ChannelKind.BC:
            return cls.bc(*counts)
        return cls.ic(*counts)

    @property
    def is_bc(self):
        return self.kind is ChannelKind.BC

    @property
    def M(self):
        return self.M1

    @property
    def counts(self):
        if self.is_bc:
            return (self.M1, self.N1, self.N2)
        return (self.M1, self.M2, self.N1, self.N2)

    def label(self):
        return "(" + ",".join(str(c) for c in self.counts) + ")"


@dataclass(frozen=True)
class CsitQuality:
    """CSIT quality exponents; alpha_k describes the transmitter's knowledge of receiver k."""

    alpha1: float
    alpha2: float

    def __post_init__(self):
        for name in ("alpha1", "alpha2"):
            value = getattr(self, name)
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise ConfigurationError(f"{name} must be a number, got {value!r}") from None
            if not math.isfinite(value) or value < 0.0 or value > 1.0:
                raise ConfigurationError(f"{name} must lie in [0, 1], got {value}")
            object.__setattr__(self, name, value)

    def swapped(self):
        return CsitQuality(self.alpha2, self.alpha1)

    def as_tuple(self):
        return (self.alpha1, self.alpha2)


@dataclass(frozen=True)
class DerivedDims:
    """Stream counts of the IC scheme where Tx1 has fewer antennas than Rx2."""

    N1p: int
    N2p: int
    N1pp: int
    tau: int
    mu1: int
    mu2: int
    delta1: int
    delta2: int
    xi: int


class RegimeTag(str, Enum):
    BC_PHI_NONPOS = "BC_PhiNonPos"
    BC_PHI_POS = "BC_PhiPos"
    IC_I1 = "IC_I1"
    IC_I2_PHI_NONPOS = "IC_I2_PhiNonPos"
    IC_I2_PHI_POS = "IC_I2_PhiPos"
    IC_II1 = "IC_II1"
    IC_II2A_LOW = "IC_II2a_low"
    IC_II2A_HIGH = "IC_II2a_high"
    IC_II2B_LOW = "IC_II2b_low"
    IC_II2B_MID = "IC_II2b_mid"
    IC_II2B_HIGH = "IC_II2b_high"


@dataclass(frozen=True)
class Regime:
    tag: RegimeTag
    thresholds: tuple = ()

    @property
    def is_case_one(self):
        return self.tag in (RegimeTag.IC_I1, RegimeTag.IC_I2_PHI_NONPOS, RegimeTag.IC_I2_PHI_POS)

    @property
    def is_case_two(self):
        return self.tag.value.startswith("IC_II")

    @property
    def is_case_two_two(self):
        return self.tag.value.startswith("IC_II2")


class ConstraintLabel(str, Enum):
    L0 = "L0"
    L0P = "L0p"
    L1 = "L1"
    L2 = "L2"
    L3 = "L3"
    L4 = "L4"
    L5 = "L5"
    AXIS1 = "Axis1"
    AXIS2 = "Axis2"


@dataclass(frozen=True)
class LinearConstraint:
    """c1*d1 + c2*d2 <= rhs, or >= rhs for the axis constraints."""

    label: ConstraintLabel
    c1: float
    c2: float
    rhs: float
    active: bool = True
    sense: str = "le"

    def value(self, d1, d2):
        return self.c1 * d1 + self.c2 * d2

    def slack(self, d1, d2):
        if self.sense == "ge":
            return self.value(d1, d2) - self.rhs
        return self.rhs - self.value(d1, d2)

    @property
    def is_axis(self):
        return self.label in (ConstraintLabel.AXIS1, ConstraintLabel.AXIS2)


@dataclass(frozen=True)
class Vertex:
    d1: float
    d2: float
    labels: tuple = ()

    def point(self):
        return (self.d1, self.d2)


class Provenance(str, Enum):
    ACHIEVABLE_BC = "AchievableBC"
    ACHIEVABLE_IC = "AchievableIC"
    OUTER_BC = "OuterBC"
    OUTER_IC = "OuterIC"
    NO_CSIT = "NoCSIT"
    PERFECT_CSIT = "PerfectCSIT"


@dataclass(frozen=True)
class DofRegion:
    constraints: tuple
    vertices: tuple
    provenance: Provenance
    regime: Optional[RegimeTag] = None
    swapped: bool = False

    def constraint(self, label):
        label = ConstraintLabel(label)
        for item in self.constraints:
            if item.label is label:
                return item
        return None

    def points(self):
        return np.array([v.point() for v in self.vertices], dtype=float)

    def min_slack(self, d1, d2):
        return min(c.slack(d1, d2) for c in self.constraints)

    def contains(self, d1, d2, tol=1e-9):
        return self.min_slack(d1, d2) >= -tol


class Optimality(str, Enum):
    YES = "Yes"
    UNKNOWN = "No/Unknown"


@dataclass(frozen=True)
class RegionVerdict:
    achievable: DofRegion
    outer: DofRegion
    optimal: Optimality
    rationale: str


@dataclass(frozen=True)
class PowerPolicy:
    """Power exponents of a rate-splitting scheme and its space-time fraction.

    A fraction ``rho`` of the slots uses (A1, A2); the remaining ``1 - rho``
    uses (A1, alpha1). Space-time schemes set A2 = 1.
    """

    A1: float = 0.0
    A2: float = 0.0
    A2p: Optional[float] = None
    rho: float = 1.0
    scheme: str = "rate-splitting"
    rho_clipped: bool = False

    def __post_init__(self):
        for name in ("A1", "A2", "A2p", "rho"):
            value = getattr(self, name)
            if value is None:
                continue
            if not math.isfinite(value) or value < -1e-9 or value > 1.0 + 1e-9:
                raise ConfigurationError(f"{name} must lie in [0, 1], got {value}")
        if self.A2p is not None and self.A2 > self.A2p + 1e-9:
            raise ConfigurationError(f"A2={self.A2} exceeds A2'={self.A2p}")


@dataclass(frozen=True)
class DofTuple:
    """Common and private DoF of one scheme.

    ``dc`` is the total common DoF; ``dc1``/``dc2`` are filled for an IC where
    the two common messages have separate caps. ``caps`` holds the per-receiver
    common-message bounds and ``splits`` the extreme (d1, d2) pairs.
    """

    dc: float
    dp1: float
    dp2: float
    dc1: Optional[float] = None
    dc2: Optional[float] = None
    caps: dict = field(default_factory=dict)
    splits: tuple = ()
    clipped: bool = False

    @property
    def sum_dof(self):
        return self.dc + self.dp1 + self.dp2


@dataclass(frozen=True)
class Ic2Caps:
    rx1_common: float
    rx2_c1: float
    rx2_c2: float
    rx2_sum: float
    dp2: float


@dataclass(frozen=True)
class Ic2Solution:
    policy: PowerPolicy
    d2: float
    branch: str
    lam: float


@dataclass(frozen=True)
class Allocation:
    """Recommended scheme for one configuration, as reported by ``alloc``."""

    config: AntennaConfig
    alpha: CsitQuality
    regime: RegimeTag
    policy: Optional[PowerPolicy] = None
    dof: Optional[DofTuple] = None
    boundary: tuple = ()


@dataclass(frozen=True)
class GridSpec:
    step: float = 1.0 / 400.0

    def __post_init__(self):
        if not math.isfinite(self.step) or self.step <= 0.0 or self.step > 0.5:
            raise ConfigurationError(f"grid step must lie in (0, 0.5], got {self.step}")

    def axis(self, low, high):
        """Inclusive grid on [low, high] whose spacing does not exceed ``step``."""
        if high <= low:
            return np.array([low], dtype=float)
        count = int(math.ceil((high - low) / self.step - 1e-9)) + 1
        return np.linspace(low, high, count)


@dataclass(frozen=True)
class CheckResult:
    name: str
    closed_form: float
    oracle: float
    branch: str = ""

    @property
    def deviation(self):
        return abs(self.closed_form - self.oracle)


@dataclass(frozen=True)
class VerificationReport:
    config: AntennaConfig
    alpha: CsitQuality
    step: float
    tolerance: float
    checks: tuple
    branch_coverage: dict = field(default_factory=dict)

    @property
    def max_deviation(self):
        return max((check.deviation for check in self.checks), default=0.0)

    @property
    def passed(self):
        return self.max_deviation <= self.tolerance


@dataclass(frozen=True)
class ChannelSet:
    """True channels. BC keys: H1, H2 (M x Nk). IC keys: Hkj (Mj x Nk), link Tx j -> Rx k."""

    kind: ChannelKind
    matrices: dict

    def __getitem__(self, name):
        return self.matrices[name]


@dataclass(frozen=True)
class CsitSet:
    estimates: dict
    variances: dict
    P: float

    def __getitem__(self, name):
        return self.estimates[name]


@dataclass(frozen=True)
class StreamGroup:
    name: str
    transmitter: int
    columns: np.ndarray = field(repr=False)
    exponent: float
    role: str
    # False for the (A2 - alpha1)+ marker with A2 < alpha1; a P^0 stream is otherwise sent at unit power
    active: bool = True

    @property
    def streams(self):
        return self.columns.shape[1]

    @property
    def enabled(self):
        return self.streams > 0 and self.active


@dataclass(frozen=True)
class PrecoderBundle:
    groups: tuple
    antennas: tuple

    def for_transmitter(self, transmitter):
        return [g for g in self.groups if g.transmitter == transmitter]

    def group(self, name):
        for item in self.groups:
            if item.name == name:
                return item
        raise KeyError(name)


@dataclass(frozen=True)
class RowTransform:
    T: np.ndarray = field(repr=False)
    blocks: dict = field(repr=False)
    leading_zero_rows: int = 0
    trailing_zero_rows: int = 0
    overlap_dim: int = 0


@dataclass(frozen=True)
class RowTransformPair:
    rx1: RowTransform
    rx2: RowTransform

    @property
    def overlap_dim(self):
        return self.rx2.overlap_dim


@dataclass(frozen=True)
class CovarianceStack:
    receiver: int
    P: float
    Q_ck: np.ndarray = field(repr=False)
    Q_cj: np.ndarray = field(repr=False)
    Q_k: np.ndarray = field(repr=False)
    Q_eta: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class RatePoint:
    receiver: int
    P: float
    r_ck: float
    r_cj: float
    r_sum: float
    r_pk: float


@dataclass(frozen=True)
class MessageSlope:
    message: str
    slope: float
    intercept: float
    residual_rms: float


@dataclass(frozen=True)
class SlopeEstimate:
    slopes: tuple
    snr_db: tuple
    trials: int
    seed: int
    rates: Optional[pd.DataFrame] = field(default=None, repr=False, compare=False)

    def slope(self, message):
        for item in self.slopes:
            if item.message == message:
                return item.slope
        raise KeyError(message)
