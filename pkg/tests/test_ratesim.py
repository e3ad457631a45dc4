import unittest # Import Python's built-in unittest framework for testing
from dataclasses import replace # Import replace to drop a stream group from a bundle
import numpy as np # Import numpy to build covariance matrices
from application.dof.allocation import optimal_policy # Import the recommended policy for the sweeps
from application.dof.channels import build_precoders, csit_rng, draw_channels, make_csit # Import the channel lab used to build covariances
from application.dof.errors import ConfigurationError, RegimeError # Import engine errors checked by the tests
from application.dof.ratesim import (build_covariances, logdet2, predicted_slopes, rate_point, st_fraction_approximation, st_sweep, sweep_and_fit, transmit_covariances) # Import the rate simulator under test
from application.models import CovarianceStack, PowerPolicy # Import value types for hand-built inputs
from application.utils.export import to_csv # Import the CSV writer used to compare sweeps byte for byte
from application.utils.numeric import parse_snr_range # Import the SNR range parser
from tests.helpers import DofTestCase, bc, ic, quality # Import shared builders and assertions

SNR_DB = parse_snr_range("30:60:5")


# Tests for log-det rates, covariance construction and Monte Carlo slope fits
class RateSimTestCase(DofTestCase):

    # Test log-det on identity-like and singular matrices
    def test_logdet2(self):
        self.assert_within(logdet2(4.0 * np.eye(2)), 4.0, 1e-12)
        self.assert_within(logdet2(np.zeros((2, 2))), 2.0 * np.log2(1e-12), 1e-6)

    # Test the four MAC rates on a single-antenna receiver
    def test_rate_point(self):
        one = np.eye(1, dtype=complex)
        stack = CovarianceStack(1, 100.0, 15.0 * one, 0.0 * one, 0.0 * one, one)
        point = rate_point(stack)
        self.assert_allclose((point.r_ck, point.r_cj, point.r_sum, point.r_pk), (4.0, 0.0, 4.0, 0.0))

        stack = CovarianceStack(1, 100.0, one, one, 3.0 * one, one)
        point = rate_point(stack)
        self.assert_within(point.r_pk, 2.0, 1e-12)
        self.assert_within(point.r_sum, np.log2(6.0 / 4.0), 1e-12)

    # Test that non-finite covariances are rejected
    def test_rate_point_rejects_nan(self):
        one = np.eye(1, dtype=complex)
        with self.assertRaises(ConfigurationError):
            rate_point(CovarianceStack(1, 10.0, np.nan * one, one, one, one))

    # Test that each transmitter spends exactly P
    def test_transmit_power(self):
        config, alpha = ic(4, 3, 2, 3), quality(0.5, 0.5)
        channels = draw_channels(config, seed=3)
        csit = make_csit(channels, alpha, 1e3, rng=csit_rng(3, 0, 0))
        bundle = build_precoders(config, csit, PowerPolicy(A1=0.0, A2=1.0), alpha)
        for common, private in transmit_covariances(config, bundle, 1e3).values():
            total = np.trace(common).real + sum(np.trace(B).real for B in private.values())
            self.assert_within(total, 1e3, 1e-6)
        stack = build_covariances(config, channels, bundle, 1e3, 2)
        self.assertEqual(stack.Q_eta.shape, (3, 3))

    # Test the predicted slopes of a BC and a Case I IC policy
    def test_predicted_slopes(self):
        predicted = predicted_slopes(bc(4, 2, 3), quality(0.9, 0.6), PowerPolicy(A1=0.6, A2=0.8))
        self.assert_allclose([predicted[k] for k in ("dc", "dp1", "dp2", "sum")], [1.4, 0.6, 1.6, 3.6])
        predicted = predicted_slopes(ic(4, 3, 2, 3), quality(0.5, 0.5), PowerPolicy(A1=0.0, A2=1.0))
        self.assert_allclose([predicted[k] for k in ("d1_c1", "d2_c1", "d1_c2", "d2_c2")], [1, 2, 0, 3])
        predicted = predicted_slopes(ic(2, 4, 1, 3), quality(0.4, 0.3), PowerPolicy(A2=0.7, A2p=0.8))
        self.assert_allclose([predicted[k] for k in ("dc1", "dc2", "dp1", "dp2", "sum")], [0.6, 0.6, 0.0, 2.2, 2.8])

    # Test the BC slopes at the recommended policy
    def test_bc_slopes(self):
        config, alpha = bc(4, 2, 3), quality(0.9, 0.6)
        estimate = sweep_and_fit(config, alpha, optimal_policy(config, alpha), SNR_DB, trials=200, seed=7)
        for message, expected in (("dc", 1.4), ("dp1", 0.6), ("dp2", 1.6)):
            self.assert_within(estimate.slope(message), expected, 0.15)
        self.assertEqual(list(estimate.rates.columns), ["P_db", "message_id", "mean_rate_bits", "stderr"])

    # Test the no-CSIT corner where all DoF go to the stronger user
    def test_bc_no_csit_corner(self):
        estimate = sweep_and_fit(bc(4, 2, 3), quality(0.0, 0.0), PowerPolicy(A1=0.0, A2=1.0), SNR_DB,
                                 trials=200, seed=7)
        self.assert_within(estimate.slope("dp2"), 3.0, 0.15)
        self.assert_within(estimate.slope("dc"), 0.0, 0.15)

    # Test the extreme splits of the Case I.1 IC
    def test_ic_case_one_splits(self):
        estimate = sweep_and_fit(ic(4, 3, 2, 3), quality(0.5, 0.5), PowerPolicy(A1=0.0, A2=1.0), SNR_DB,
                                 trials=200, seed=7)
        for message, expected in (("d1_c1", 1.0), ("d2_c1", 2.0), ("d1_c2", 0.0), ("d2_c2", 3.0)):
            self.assert_within(estimate.slope(message), expected, 0.15)

    # Test the space-time sweep sum slope
    def test_space_time_sweep(self):
        estimate = st_sweep(bc(4, 2, 3), quality(0.3, 0.2), 2.0 / 3.0, SNR_DB, trials=200, seed=7)
        self.assert_within(estimate.slope("sum"), 3.0 + 0.06 / 0.9, 0.15)
        with self.assertRaises(RegimeError):
            st_sweep(bc(4, 2, 3), quality(0.9, 0.6), 0.5, SNR_DB, trials=100)
        self.assertEqual(str(st_fraction_approximation(2.0 / 3.0)), "2/3")

    # Test that sweeps need enough trials
    def test_sweep_requires_trials(self):
        with self.assertRaises(ConfigurationError):
            sweep_and_fit(bc(4, 2, 3), quality(0.5, 0.5), PowerPolicy(A1=0.5, A2=1.0), SNR_DB, trials=10)

    # Test that results are identical for one worker and several
    def test_sweep_is_deterministic_across_workers(self):
        config, alpha = bc(4, 2, 3), quality(0.9, 0.6)
        policy = optimal_policy(config, alpha)
        snr_db = parse_snr_range("30:60:10")
        single = sweep_and_fit(config, alpha, policy, snr_db, trials=100, seed=11, workers=1)
        pooled = sweep_and_fit(config, alpha, policy, snr_db, trials=100, seed=11, workers=4)
        self.assertEqual(to_csv(single.rates), to_csv(pooled.rates))
        self.assertEqual(single.slopes, pooled.slopes)
    # Helper method to build the covariance stack of one receiver for one seeded trial
    def stack(self, config, alpha, policy, P, receiver, trial=0, seed=9):
        channels = draw_channels(config, seed=seed, trial=trial)
        csit = make_csit(channels, alpha, P, rng=csit_rng(seed, trial, 0))
        bundle = build_precoders(config, csit, policy, alpha)
        return build_covariances(config, channels, bundle, P, receiver)

    # Test that the sum cap is never below either individual common cap
    def test_rate_point_sum_cap_dominates(self):
        cases = [
            (bc(4, 2, 3), quality(0.9, 0.6), PowerPolicy(A1=0.6, A2=0.8)),
            (bc(4, 2, 3), quality(0.0, 0.0), PowerPolicy(A1=0.0, A2=1.0)),
            (ic(4, 3, 2, 3), quality(0.5, 0.5), PowerPolicy(A1=0.0, A2=1.0)),
            (ic(2, 4, 1, 3), quality(0.4, 0.3), PowerPolicy(A2=0.7, A2p=0.8)),
        ]
        for config, alpha, policy in cases:
            for P in (1e3, 1e6):
                for trial in range(5):
                    for receiver in (1, 2):
                        point = rate_point(self.stack(config, alpha, policy, P, receiver, trial))
                        self.assertGreaterEqual(point.r_sum, point.r_ck - 1e-9)
                        self.assertGreaterEqual(point.r_sum, point.r_cj - 1e-9)

    # Test that a unit-power stream is sent while a switched-off marker stream changes nothing
    def test_off_stream_leaves_rates_unchanged(self):
        config, alpha = bc(4, 2, 3), quality(0.9, 0.6)
        channels = draw_channels(config, seed=9)
        csit = make_csit(channels, alpha, 1e4, rng=csit_rng(9, 0, 0))
        bundle = build_precoders(config, csit, PowerPolicy(A1=0.0, A2=0.8), alpha)
        self.assertFalse(bundle.group("V22").enabled)
        self.assertTrue(bundle.group("V1").enabled)
        trimmed = replace(bundle, groups=tuple(g for g in bundle.groups if g.name != "V22"))
        for receiver in (1, 2):
            full = rate_point(build_covariances(config, channels, bundle, 1e4, receiver))
            reduced = rate_point(build_covariances(config, channels, trimmed, 1e4, receiver))
            self.assert_allclose([full.r_ck, full.r_cj, full.r_sum, full.r_pk],
                                 [reduced.r_ck, reduced.r_cj, reduced.r_sum, reduced.r_pk])
        # V1 at exponent 0 still reaches Rx1
        stack = build_covariances(config, channels, bundle, 1e4, 1)
        self.assertGreater(np.linalg.norm(stack.Q_k), 0.0)
        self.assertGreater(rate_point(stack).r_pk, 0.0)

    # Test the eigenvalue exponents of the interference-plus-noise covariance at P = 2^50
    def test_interference_spectrum_exponents(self):
        P, trials = 2.0 ** 50, 20

        # Case II, Rx1: one direction at P and one at P^(A2' - alpha1)
        config, alpha, policy = ic(1, 4, 2, 3), quality(0.5, 0.5), PowerPolicy(A2=0.8, A2p=0.9)
        exponents = [np.sort(np.log2(np.linalg.eigvalsh(self.stack(config, alpha, policy, P, 1, t).Q_eta)) / 50.0)
                     for t in range(trials)]
        self.assert_allclose(np.mean(exponents, axis=0), [0.4, 1.0], atol=0.1)

        # Case I, Rx2: leakage from Tx1 stays at P^(A1 - alpha2) = P^0
        config, alpha, policy = ic(4, 3, 2, 3), quality(0.5, 0.5), PowerPolicy(A1=0.5, A2=1.0)
        exponents = [np.log2(np.linalg.eigvalsh(self.stack(config, alpha, policy, P, 2, t).Q_eta)) / 50.0
                     for t in range(trials)]
        self.assert_allclose(np.mean(exponents, axis=0), np.zeros(3), atol=0.1)

    # Test the Case II slopes against the caps of the boundary program
    def test_ic_case_two_slopes(self):
        config, alpha, policy = ic(2, 4, 1, 3), quality(0.4, 0.3), PowerPolicy(A2=0.7, A2p=0.8)
        estimate = sweep_and_fit(config, alpha, policy, SNR_DB, trials=200, seed=7)
        predicted = predicted_slopes(config, alpha, policy)
        # Tx1 carries no private message
        self.assert_within(estimate.slope("dp1"), 0.0, 1e-9)
        # Slopes over 30-60 dB still carry the drift of the power rescaling
        for message in ("dc1", "dp2", "sum"):
            self.assert_within(estimate.slope(message), predicted[message], 0.25)

    # Test that moving the SNR window up brings the fitted slope closer to its limit
    def test_slope_convergence(self):
        config, alpha, policy = ic(2, 4, 1, 3), quality(0.4, 0.3), PowerPolicy(A2=0.7, A2p=0.8)
        target = predicted_slopes(config, alpha, policy)["dp2"]
        errors = []
        for window in ("30:50:5", "40:60:5"):
            estimate = sweep_and_fit(config, alpha, policy, parse_snr_range(window), trials=300, seed=7)
            errors.append(abs(estimate.slope("dp2") - target))
        self.assertLess(errors[1], errors[0])

    # Test that per-transmitter power rescaling leaves the slopes of full-power policies unchanged
    def test_power_normalization_keeps_slopes(self):
        config, alpha, policy = bc(4, 2, 3), quality(0.0, 0.0), PowerPolicy(A1=0.0, A2=1.0)
        scaled = sweep_and_fit(config, alpha, policy, SNR_DB, trials=100, seed=5)
        raw = sweep_and_fit(config, alpha, policy, SNR_DB, trials=100, seed=5, normalize=False)
        for fitted in scaled.slopes:
            self.assert_within(fitted.slope, raw.slope(fitted.message), 0.02)


if __name__ == "__main__":
    unittest.main()
