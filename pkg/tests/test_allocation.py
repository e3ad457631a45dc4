import unittest # Import Python's built-in unittest framework for testing
from application.dof import allocation # Import the allocation module under test
from application.dof.errors import ConfigurationError, RegimeError # Import engine errors checked by the tests
from application.dof.regions import ic_region # Import the IC region to check boundary points against
from application.models import ConstraintLabel, RegimeTag # Import constraint labels and regime tags
from tests.helpers import DofTestCase, bc, ic, quality # Import shared builders and assertions


# Tests for the closed-form power allocation of the BC and the IC
class AllocationTestCase(DofTestCase):

    # Set up the (4,2,3) BC used by most tests
    def setUp(self):
        self.config = bc(4, 2, 3)

    # Test the single-profile BC exponents and their DoF tuple
    def test_bc_optimal_exponents(self):
        alpha = quality(0.9, 0.6)
        policy = allocation.bc_optimal_exponents(self.config, alpha)
        self.assert_allclose((policy.A1, policy.A2), (0.6, 0.8))
        self.assertEqual(policy.scheme, allocation.RATE_SPLITTING)
        dof = allocation.dof_tuple(self.config, alpha, policy)
        self.assert_allclose((dof.dc, dof.dp1, dof.dp2), (1.4, 0.6, 1.6))
        self.assert_within(dof.sum_dof, 3.6, 1e-9)
        self.assert_allclose(dof.splits, [(2.0, 1.6), (0.6, 3.0)])
        self.assertFalse(dof.clipped)

    # Test the BC DoF tuple when A2 exceeds alpha1
    def test_bc_dof_tuple_with_excess_power(self):
        dof = allocation.bc_dof_tuple(self.config, quality(0.7, 0.6), 0.6, 0.8)
        self.assert_allclose((dof.dc, dof.dp1, dof.dp2), (1.3, 0.5, 1.7))
        self.assert_allclose((dof.caps["rx1"], dof.caps["rx2"]), (1.3, 1.3))

    # Test that exponents outside their ranges are rejected
    def test_bc_dof_tuple_range_checks(self):
        with self.assertRaises(ConfigurationError):
            allocation.bc_dof_tuple(self.config, quality(0.9, 0.6), 0.7, 0.8)
        with self.assertRaises(ConfigurationError):
            allocation.bc_dof_tuple(self.config, quality(0.9, 0.6), 0.5, 1.2)

    # Test the space-time fraction and the mixed DoF tuple
    def test_bc_space_time(self):
        alpha = quality(0.3, 0.2)
        self.assert_within(allocation.bc_st_fraction(self.config, alpha), 2.0 / 3.0, 1e-12)
        dof = allocation.bc_st_dof_tuple(self.config, alpha)
        self.assert_allclose((dof.dc, dof.dp1, dof.dp2), (1.0, 0.2 / 3.0, 2.0))
        self.assert_within(dof.sum_dof, 3.0 + 0.06 / 0.9, 1e-9)

    # Test that the space-time fraction needs a non-negative discriminant
    def test_bc_space_time_needs_nonnegative_phi(self):
        with self.assertRaises(RegimeError):
            allocation.bc_st_fraction(self.config, quality(0.9, 0.6))

    # Test single-profile and space-time sum DoF on a table of alpha pairs
    def test_bc_sum_dof_table(self):
        rows = [
            ((0.6, 0.5), 0.75, 3.35, 0.375, 3.35),
            ((0.45, 0.3), 0.65, 3.1, 0.4 / 0.85, 3.0 + 0.135 / 0.85),
            ((0.1, 0.2), 0.9, 3.0, 1.0 / 1.1, 3.0 + 0.02 / 1.1),
        ]
        for (a1, a2), A2, plain_sum, rho, st_sum in rows:
            alpha = quality(a1, a2)
            policy = allocation.bc_optimal_exponents(self.config, alpha)
            self.assert_within(policy.A2, A2, 1e-12)
            self.assert_within(allocation.dof_tuple(self.config, alpha, policy).sum_dof, plain_sum, 1e-9)
            st = allocation.optimal_policy(self.config, alpha)
            self.assertEqual(st.scheme, allocation.SPACE_TIME)
            self.assert_within(st.rho, rho, 1e-12)
            self.assert_within(allocation.dof_tuple(self.config, alpha, st).sum_dof, st_sum, 1e-9)
            self.assertGreaterEqual(st_sum, plain_sum - 1e-12)

    # Test the Case I.1 IC policy and its extreme splits
    def test_ic_case_one_small_rx2(self):
        config = ic(4, 3, 2, 3)
        alpha = quality(0.5, 0.5)
        policy = allocation.ic1_optimal_exponents(config, alpha)
        self.assert_allclose((policy.A1, policy.A2), (0.0, 1.0))
        dof = allocation.dof_tuple(config, alpha, policy)
        self.assert_allclose((dof.dc1, dof.dc2, dof.dp1, dof.dp2), (1.0, 1.0, 0.0, 2.0))
        self.assert_allclose(dof.splits, [(1.0, 2.0), (0.0, 3.0)])

    # Test the Case I.2 IC policies on both sides of the discriminant
    def test_ic_case_one_large_rx2(self):
        config = ic(4, 4, 2, 3)
        plain = allocation.ic1_optimal_exponents(config, quality(0.9, 0.6))
        self.assert_allclose((plain.A1, plain.A2), (0.6, 0.8))
        self.assert_within(allocation.dof_tuple(config, quality(0.9, 0.6), plain).sum_dof, 3.6, 1e-9)

        alpha = quality(0.3, 0.2)
        st = allocation.ic1_optimal_exponents(config, alpha)
        self.assertEqual(st.scheme, allocation.SPACE_TIME)
        self.assert_within(st.rho, 2.0 / 3.0, 1e-12)
        self.assert_within(allocation.ic1_st_dof_tuple(config, alpha).sum_dof, 3.0 + 0.06 / 0.9, 1e-9)

    # Test that Case I helpers refuse a Case II configuration
    def test_ic_case_one_requires_large_tx1(self):
        with self.assertRaises(RegimeError):
            allocation.ic1_dof_tuple(ic(2, 4, 1, 3), quality(0.4, 0.3), 0.0, 1.0)
        with self.assertRaises(RegimeError):
            allocation.ic1_st_fraction(ic(4, 3, 2, 3), quality(0.3, 0.2))

    # Test the Case II common-message caps
    def test_ic2_dof_caps(self):
        caps = allocation.ic2_dof_caps(ic(2, 4, 1, 3), quality(0.4, 0.3), 0.7, 0.8)
        self.assert_allclose((caps.rx1_common, caps.rx2_c1, caps.dp2), (0.6, 0.6, 2.2))
        self.assert_allclose((caps.rx2_c2, caps.rx2_sum), (0.8, 0.8))

    # Test the lambda branches of a Case II.2 IC and the lines they run along
    def test_ic2_branches(self):
        config = ic(2, 4, 1, 3)
        alpha = quality(0.4, 0.3)
        intervals = allocation.ic2_branch_intervals(config, alpha)
        self.assertEqual(list(intervals), ["F", "E", "D", "C"])
        self.assert_allclose([intervals["E"], intervals["D"], intervals["C"]], [(0.0, 0.4), (0.4, 0.8), (0.8, 1.0)])
        expected = [(0.2, "E", (0.9, 1.0), 2.8, ConstraintLabel.L1),
                    (0.6, "D", (0.7, 0.8), 2.2, ConstraintLabel.L4),
                    (0.9, "C", (0.5, 0.5), 1.5, ConstraintLabel.L2)]
        for lam, branch, exponents, d2, label in expected:
            solution = allocation.ic2_optimal(config, alpha, lam)
            self.assertEqual(solution.branch, branch)
            self.assert_allclose((solution.policy.A2, solution.policy.A2p), exponents)
            self.assert_within(solution.d2, d2, 1e-9)
            line = allocation.ic2_constraint_line(config, alpha, branch)
            self.assertIs(line.label, label)
            self.assert_within(line.slack(lam, solution.d2), 0.0, 1e-9)

    # Test the high-lambda branch of a Case II.2 IC where Tx1 has a single antenna
    def test_ic2_branch_a(self):
        config = ic(1, 4, 2, 3)
        alpha = quality(0.5, 0.5)
        solution = allocation.ic2_optimal(config, alpha, 0.75)
        self.assertEqual(solution.branch, "A")
        self.assert_allclose((solution.policy.A2, solution.policy.A2p), (0.25, 0.75))
        self.assert_within(solution.d2, 2.0, 1e-9)
        line = allocation.ic2_constraint_line(config, alpha, "A")
        self.assert_within(line.slack(0.75, 2.0), 0.0, 1e-9)

    # Test that the A and D segments run along L3 when N2 > M1 + N1
    def test_ic2_wide_receiver_line(self):
        config = ic(1, 5, 1, 4)
        found = set()
        for a1 in (0.2, 0.5, 0.8):
            alpha = quality(a1, 0.5)
            for branch, (lo, hi) in allocation.ic2_branch_intervals(config, alpha).items():
                if branch not in ("A", "D"):
                    continue
                line = allocation.ic2_constraint_line(config, alpha, branch)
                self.assertIs(line.label, ConstraintLabel.L3)
                lam = 0.5 * (lo + hi)
                solution = allocation.ic2_optimal(config, alpha, lam)
                self.assert_within(line.slack(lam, solution.d2), 0.0, 1e-9)
                found.add(branch)
        self.assertIn("A", found)

    # Test the two branches of a Case II.1 IC
    def test_ic2_case_two_one(self):
        config = ic(3, 3, 2, 4)
        alpha = quality(0.5, 0.5)
        self.assertEqual(list(allocation.ic2_branch_intervals(config, alpha)), ["II1-full", "II1-shared"])
        full = allocation.ic2_optimal(config, alpha, 0.5)
        self.assertEqual(full.branch, "II1-full")
        self.assert_within(full.d2, 2.5, 1e-9)
        shared = allocation.ic2_optimal(config, alpha, 1.5)
        self.assertEqual(shared.branch, "II1-shared")
        self.assert_allclose((shared.policy.A2, shared.policy.A2p), (0.75, 0.75))
        self.assert_within(shared.d2, 1.25, 1e-9)

    # Test that every boundary point lies on the upper edge of the achievable region
    def test_ic2_boundary_on_region(self):
        for counts, alpha in [((2, 4, 1, 3), quality(0.4, 0.3)), ((1, 4, 2, 3), quality(0.5, 0.5)),
                              ((3, 3, 2, 4), quality(0.5, 0.5))]:
            config = ic(*counts)
            region = ic_region(config, alpha)
            boundary = allocation.ic2_boundary(config, alpha, 21)
            self.assertEqual(len(boundary), 21)
            for solution in boundary:
                self.assert_within(region.min_slack(solution.lam, solution.d2), 0.0, 1e-9)
            self.assert_nondecreasing([-s.d2 for s in boundary])

    # Test that lambda outside [0, N1'] is rejected
    def test_ic2_lambda_range(self):
        with self.assertRaises(ConfigurationError):
            allocation.ic2_optimal(ic(2, 4, 1, 3), quality(0.4, 0.3), 1.5)
        with self.assertRaises(ConfigurationError):
            allocation.ic2_optimal(ic(2, 4, 1, 3), quality(0.4, 0.3), -0.5)

    # Test that the Case II program refuses a Case I configuration
    def test_ic2_requires_small_tx1(self):
        with self.assertRaises(RegimeError):
            allocation.ic2_optimal(ic(4, 3, 2, 3), quality(0.5, 0.5), 0.5)

    # Test the allocation summary for each family
    def test_allocate(self):
        result = allocation.allocate(self.config, quality(0.9, 0.6))
        self.assertIs(result.regime, RegimeTag.BC_PHI_NONPOS)
        self.assert_within(result.dof.sum_dof, 3.6, 1e-9)
        self.assertEqual(result.boundary, ())

        result = allocation.allocate(ic(2, 4, 1, 3), quality(0.4, 0.3), samples=5)
        self.assertIs(result.regime, RegimeTag.IC_II2B_LOW)
        self.assertIsNone(result.policy)
        self.assertEqual([s.lam for s in result.boundary], [0.0, 0.25, 0.5, 0.75, 1.0])


if __name__ == "__main__":
    unittest.main()
