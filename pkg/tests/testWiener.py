#!/usr/bin/env python3
import math
import unittest

import numpy as np
from numpy.testing import assert_allclose

from quatlink.util.faults import DimensionError, InsufficientData, SingularMatrix
from quatlink.algebra.quaternion import qconj, qnorm_sq
from quatlink.algebra.linalg import (
    is_hermitian, sum_outer_h, complex_adjoint_solve, identity)
from quatlink.comms.modem import modulate_indices
from quatlink.comms.channel import (
    SeededRng, convolve, gen_random_channel, noise_variance_for_snr)
from quatlink.equalizer.adaptive import build_regressors, equalize, run_qlms
from quatlink.equalizer.wiener import (
    MSE_DB_FLOOR, WienerProblem, MseResult, to_db, estimate_statistics,
    solve_wiener, evaluate_mse, wiener_equalizer)


def noisy_link(seed, count=2000, taps=4, snr_db=20.0):
    sent = modulate_indices(SeededRng(seed, 0).integers(16, count))
    channel = gen_random_channel(SeededRng(seed, 1), taps)
    clean = convolve(sent, channel.taps)
    variance = noise_variance_for_snr(float(qnorm_sq(clean).mean()), snr_db)
    return sent, clean + SeededRng(seed, 2).gaussian(count, variance)


class TestStatistics(unittest.TestCase):

    def test_shapes_and_hermitian(self):
        sent, received = noisy_link(1)
        problem = estimate_statistics(received, sent, 6, delay=3)
        self.assertEqual(problem.R.shape, (6, 6, 4))
        self.assertEqual(problem.p.shape, (6, 4))
        self.assertEqual(problem.sample_count, 1997)
        self.assertTrue(is_hermitian(problem.R, tol=0))

    def test_cross_correlation(self):
        sent, received = noisy_link(2)
        x = build_regressors(received, 3)[1:]
        r = sent[:1999]
        problem = estimate_statistics(received, sent, 3, delay=1)
        expected = sum_outer_h(x, r) / 1999
        assert_allclose(problem.p, expected)

    def test_not_hermitian(self):
        R = SeededRng(3).gaussian((3, 3), 1.0)
        with self.assertRaises(DimensionError):
            WienerProblem(R, np.zeros((3, 4)), 10)

    def test_insufficient(self):
        signal = SeededRng(4).gaussian(5, 1.0)
        with self.assertRaises(InsufficientData):
            estimate_statistics(signal, signal, 3, delay=5)
        with self.assertRaises(DimensionError):
            estimate_statistics(signal, signal, 3, delay=-1)


class TestSolution(unittest.TestCase):

    def test_identity_channel_gives_unit_impulse(self):
        sent = modulate_indices(SeededRng(5).integers(16, 2000))
        problem = estimate_statistics(sent, sent, 7, delay=3)
        w = solve_wiener(problem, ridge=0.0)
        expected = np.zeros((7, 4))
        expected[3, 0] = 1.0
        assert_allclose(w, expected, atol=1e-9)

    def test_default_ridge_stays_close(self):
        sent = modulate_indices(SeededRng(5).integers(16, 2000))
        w, mse = wiener_equalizer(sent, sent, 7, delay=3)
        self.assertAlmostEqual(w[3, 0], 1.0, delta=1e-6)
        self.assertLess(mse.db, -60)

    def test_orthogonality(self):
        """the error is uncorrelated with every regressor entry"""
        for seed in range(5):
            sent, received = noisy_link(10 + seed)
            regressors = build_regressors(received, 8)
            problem = estimate_statistics(None, sent, 8, delay=4,
                                          regressors=regressors)
            w = solve_wiener(problem, ridge=0.0)
            x = regressors[4:]
            e = sent[:x.shape[0]] - equalize(w, regressors=x)
            residual = sum_outer_h(x, e) / x.shape[0]
            power = float(qnorm_sq(received).mean())
            self.assertLess(np.sqrt(qnorm_sq(residual).sum()), 1e-8 * power)

    def test_matches_complex_adjoint(self):
        sent, received = noisy_link(20)
        problem = estimate_statistics(received, sent, 5, delay=2)
        w = solve_wiener(problem, ridge=0.0)
        oracle = qconj(complex_adjoint_solve(problem.R, problem.p))
        assert_allclose(w, oracle, atol=1e-10)

    def test_beats_qlms_on_the_same_block(self):
        sent, received = noisy_link(21)
        regressors = build_regressors(received, 10)
        state, _ = run_qlms(None, sent, 10, 0.01, delay=5,
                            regressors=regressors)
        _, wiener = wiener_equalizer(None, sent, 10, delay=5, ridge=0.0,
                                     regressors=regressors)
        qlms = evaluate_mse(state.weights, None, sent, 10, delay=5,
                            regressors=regressors)
        self.assertLessEqual(wiener.linear, qlms.linear)

    def test_perturbations_never_help(self):
        sent, received = noisy_link(22)
        regressors = build_regressors(received, 8)
        problem = estimate_statistics(None, sent, 8, delay=4,
                                      regressors=regressors)
        w = solve_wiener(problem, ridge=0.0)
        best = evaluate_mse(w, None, sent, 8, delay=4, regressors=regressors)
        rng = np.random.default_rng(23)
        for _ in range(100):
            delta = rng.standard_normal(w.shape)
            delta *= 1e-3 / np.linalg.norm(delta)
            moved = evaluate_mse(w + delta, None, sent, 8, delay=4,
                                 regressors=regressors)
            self.assertGreaterEqual(moved.linear, best.linear)

    def test_more_samples_agree(self):
        """doubling the block barely moves the solution"""
        sent, received = noisy_link(24, count=20000)
        w = solve_wiener(estimate_statistics(received, sent, 8, delay=4))
        sent, received = noisy_link(24, count=40000)
        w2 = solve_wiener(estimate_statistics(received, sent, 8, delay=4))
        self.assertLess(np.linalg.norm(w2 - w), 0.05 * np.linalg.norm(w2))

    def test_singular_needs_ridge(self):
        silent = np.zeros((100, 4))
        problem = estimate_statistics(silent, silent, 4)
        with self.assertRaises(SingularMatrix) as context:
            solve_wiener(problem, ridge=0.0)
        self.assertIn("ridge", str(context.exception))
        with self.assertRaises(DimensionError):
            solve_wiener(problem, ridge=-1.0)

    def test_ridge_solves_singular(self):
        silent = np.zeros((100, 4))
        problem = WienerProblem(np.zeros((2, 2, 4)), np.zeros((2, 4)), 100)
        w = solve_wiener(problem, ridge=1e-3)
        assert_allclose(w, 0.0)
        self.assertEqual(estimate_statistics(silent, silent, 2).length, 2)
        assert_allclose(problem.default_ridge(), 0.0)
        assert_allclose(WienerProblem(identity(2), np.zeros((2, 4)), 1)
                        .default_ridge(), 1e-8)


class TestMse(unittest.TestCase):

    def test_normalized(self):
        mse = MseResult(0.4, 4.0)
        self.assertAlmostEqual(mse.normalized, 0.1)
        self.assertAlmostEqual(mse.db, -10.0)

    def test_floor(self):
        self.assertEqual(to_db(0.0), MSE_DB_FLOOR)
        self.assertEqual(to_db(1e-30), MSE_DB_FLOOR)
        self.assertEqual(to_db(math.inf), math.inf)
        self.assertEqual(MseResult(0.0, 0.0).db, MSE_DB_FLOOR)

    def test_evaluate(self):
        sent, received = noisy_link(30)
        w, mse = wiener_equalizer(received, sent, 6, delay=3)
        x = build_regressors(received, 6)[3:]
        e = sent[:x.shape[0]] - equalize(w, regressors=x)
        self.assertAlmostEqual(mse.linear, float(qnorm_sq(e).mean()))
        self.assertAlmostEqual(mse.reference_power, 4.0)


if __name__ == "__main__":
    unittest.main()
