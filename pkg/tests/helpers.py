import unittest # Import Python's built-in unittest framework for testing
import numpy as np # Import numpy for tolerance-aware array comparisons
from application.dof.regimes import align_alpha, normalize # Import normalization so tests start from engine-ready configs
from application.models import AntennaConfig, CsitQuality # Import the value types every test builds


# Build a normalized BC configuration
def bc(M, N1, N2):
    return normalize(AntennaConfig.bc(M, N1, N2))


# Build a normalized IC configuration
def ic(M1, M2, N1, N2):
    return normalize(AntennaConfig.ic(M1, M2, N1, N2))


# Build a CSIT quality pair aligned with a (possibly swapped) configuration
def quality(a1, a2, config=None):
    alpha = CsitQuality(a1, a2)
    return align_alpha(config, alpha) if config is not None else alpha


# Base test case with tolerance-aware assertions
class DofTestCase(unittest.TestCase):

    # np.testing.assert_allclose has no absolute tolerance by default, which fails near zero
    def assert_allclose(self, first, second, atol=1e-9):
        np.testing.assert_allclose(first, second, atol=atol, rtol=0)

    def assert_within(self, value, target, tol):
        self.assertLessEqual(abs(value - target), tol, f"{value} not within {tol} of {target}")

    def assert_points(self, region, expected, atol=1e-9):
        self.assert_allclose(region.points(), np.array(expected, dtype=float), atol=atol)

    def assert_nondecreasing(self, seq, tol=1e-9):
        for a, b in zip(seq[:-1], seq[1:]):
            self.assertLessEqual(a, b + tol)
