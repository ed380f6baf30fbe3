#!/usr/bin/env python3
import math
import os
import shutil
import tempfile
import unittest

import numpy as np
from numpy.testing import assert_allclose, assert_array_equal

from quatlink.util.faults import InvalidConfig, ExperimentFailed, InsufficientData
from quatlink.util.config import Config
from quatlink.experiment.expconfig import ExperimentConfig, FIELD_NAMES
from quatlink.comms.channel import (
    SeededRng, MimoChannelModel, gen_random_mimo_channel)
from quatlink.experiment import harness
from quatlink.experiment.harness import (
    LearningCurve, curve_to_db, steady_state_db, convergence_iteration,
    run_experiment, run_siso_experiment, run_mimo_experiment, summarize,
    mimo_outcomes, SUMMARY_KEYS)

SMALL = ExperimentConfig(num_runs=3, symbols_per_run=1500, equalizer_length=7,
                         master_seed=42)


class TestExperimentConfig(unittest.TestCase):

    def test_defaults(self):
        config = ExperimentConfig()
        self.assertEqual(config.mode, 'siso')
        self.assertEqual(config.num_channel_taps, 4)
        self.assertEqual(config.equalizer_length, 15)
        self.assertEqual(config.delay, 7)
        self.assertEqual(config.snr_db, 20.0)
        self.assertEqual(config.num_runs, 200)
        self.assertEqual(config.symbols_per_run, 5000)
        self.assertEqual(config.step_size, 0.01)
        self.assertTrue(config.normalize_channel)
        self.assertEqual((config.mimo_tx, config.mimo_rx), (2, 2))

    def test_delay_follows_length(self):
        self.assertEqual(ExperimentConfig(equalizer_length=9).delay, 4)
        self.assertEqual(ExperimentConfig(equalizer_length=9, delay=0).delay, 0)

    def test_invalid(self):
        for changes in ({'equalizer_length': 0}, {'num_runs': 0},
                        {'step_size': 0.0}, {'step_size': -1.0},
                        {'mode': 'simo'}, {'snr_reference_point': 'middle'},
                        {'delay': 100, 'symbols_per_run': 100},
                        {'snr_db': float('nan')}, {'master_seed': -1},
                        {'channel_kind': 'rayleigh'}):
            with self.assertRaises(InvalidConfig):
                ExperimentConfig(**changes)

    def test_invalid_names_the_field(self):
        with self.assertRaises(InvalidConfig) as context:
            ExperimentConfig(equalizer_length=0)
        self.assertEqual(context.exception.name, 'equalizer_length')

    def test_echo_round_trip(self):
        config = ExperimentConfig(mode='mimo', snr_db=math.inf, step_size=0.1,
                                  master_seed=(1 << 64) - 1,
                                  normalize_channel=False)
        items = config.items()
        self.assertEqual([name for (name, _) in items], list(FIELD_NAMES))
        self.assertIn(('snr_db', 'inf'), items)
        self.assertIn(('normalize_channel', 'off'), items)
        self.assertEqual(ExperimentConfig.from_items(items), config)

    def test_from_items_errors(self):
        with self.assertRaises(InvalidConfig):
            ExperimentConfig.from_items([('num_runs', 'many')])
        with self.assertRaises(InvalidConfig):
            ExperimentConfig.from_items([('colour', 'blue')])
        with self.assertRaises(InvalidConfig):
            ExperimentConfig.from_items([('normalize_channel', 'maybe')])

    def test_load(self):
        directory = tempfile.mkdtemp()
        try:
            path = os.path.join(directory, "exp.txt")
            with open(path, 'w') as f:
                f.write(ExperimentConfig(num_runs=7).output_shell())
                f.write("colour=blue\n")
            self.assertEqual(ExperimentConfig.load(path),
                             ExperimentConfig(num_runs=7))
            config = Config()
            config.set('mu_typo', 3)
            config.set('num_runs', 5)
            self.assertEqual(ExperimentConfig.from_config(config).num_runs, 5)
        finally:
            shutil.rmtree(directory)


class TestCurves(unittest.TestCase):

    def test_to_db(self):
        assert_allclose(curve_to_db([1.0, 0.1, 0.0]), [0.0, -10.0, -100.0])

    def test_steady_state(self):
        linear = np.concatenate((np.ones(90), np.full(10, 0.1)))
        self.assertAlmostEqual(steady_state_db(linear), -10.0)
        with self.assertRaises(InsufficientData):
            steady_state_db([])

    def test_flat_curve_converges_at_once(self):
        self.assertEqual(convergence_iteration(np.full(50, -12.0), -12.0), 0)

    def test_decreasing_curve(self):
        curve = np.linspace(0.0, -20.0, 101)
        steady = -20.5
        expected = next(k for k, value in enumerate(curve)
                        if abs(value - steady) <= 1.0)
        self.assertEqual(convergence_iteration(curve, steady, window=1),
                         expected)
        self.assertGreater(convergence_iteration(curve, steady), expected)

    def test_never_converges(self):
        self.assertEqual(convergence_iteration(np.zeros(10), -30.0), 9)

    def test_learning_curve(self):
        curve = LearningCurve(np.full(20, 0.01), runs_averaged=4)
        self.assertEqual(len(curve), 20)
        self.assertAlmostEqual(curve.steady_state_db, -20.0)
        self.assertEqual(curve.convergence_iteration, 0)
        self.assertEqual(curve.runs_diverged, 0)


class TestHarness(unittest.TestCase):

    def test_deterministic_whatever_the_workers(self):
        first = run_experiment(SMALL, workers=1)
        second = run_experiment(SMALL, workers=3)
        assert_array_equal(first.learning_curve.mse_per_iteration,
                           second.learning_curve.mse_per_iteration)
        self.assertEqual(summarize(first), summarize(second))

    def test_seed_matters(self):
        first = run_experiment(SMALL)
        second = run_experiment(SMALL.replace(master_seed=43))
        self.assertFalse(np.array_equal(first.learning_curve.linear,
                                        second.learning_curve.linear))

    def test_curve_length_skips_warm_up(self):
        result = run_experiment(SMALL)
        self.assertEqual(len(result.learning_curve), 1500 - SMALL.delay)
        self.assertEqual(len(result.outcomes), 3)

    def test_noiseless_identity_channel(self):
        config = SMALL.replace(channel_kind='identity', snr_db=math.inf,
                               equalizer_length=5, delay=2)
        result = run_siso_experiment(config)
        stream = result.streams[0]
        self.assertLess(stream.curve.steady_state_db, -60)
        self.assertLess(stream.wiener_mse_db, -60)
        self.assertEqual(stream.ser, 0.0)
        self.assertEqual(stream.ber, 0.0)

    def test_random_channel_learns(self):
        config = SMALL.replace(num_runs=4, symbols_per_run=3000,
                               equalizer_length=15, delay=7)
        result = run_experiment(config, workers=2)
        curve = result.learning_curve
        self.assertLess(curve.steady_state_db, -6.0)
        self.assertLess(curve.steady_state_db, curve.mse_per_iteration[0])
        self.assertLess(result.streams[0].wiener_mse_db,
                        curve.steady_state_db + 0.5)
        for outcome in result.stream_outcomes(0):
            self.assertFalse(outcome.diverged)
            self.assertLessEqual(outcome.wiener_mse.db,
                                 outcome.tail_db() + 0.5, outcome)

    def test_less_noise_settles_lower(self):
        quiet = run_experiment(SMALL.replace(snr_db=30.0))
        noisy = run_experiment(SMALL.replace(snr_db=10.0))
        self.assertLess(quiet.learning_curve.steady_state_db,
                        noisy.learning_curve.steady_state_db)

    def test_transmitter_reference(self):
        config = SMALL.replace(snr_reference_point='transmitter')
        result = run_experiment(config)
        self.assertEqual(result.config.snr_reference_point, 'transmitter')
        self.assertLess(result.learning_curve.steady_state_db, 0.0)

    def test_every_run_diverges(self):
        config = SMALL.replace(step_size=5.0, num_runs=2)
        with self.assertRaises(ExperimentFailed) as context:
            run_experiment(config)
        self.assertEqual(context.exception.runs_diverged, 2)

    def test_mimo_identity(self):
        config = SMALL.replace(channel_kind='identity', snr_db=math.inf,
                               equalizer_length=3, delay=1, num_runs=2,
                               symbols_per_run=2000, step_size=0.05)
        result = run_mimo_experiment(config)
        self.assertEqual(result.config.mode, 'mimo')
        self.assertEqual(len(result.streams), 2)
        for stream in result.streams:
            self.assertEqual(stream.ser, 0.0)
            self.assertLess(stream.curve.steady_state_db, -60)

    def test_mimo_stream_swap(self):
        """relabelling the transmit streams relabels the outcomes"""
        config = SMALL.replace(mode='mimo')
        model = gen_random_mimo_channel(SeededRng(5), 2, 2, 4)
        drawn = [harness._draw_symbols(config, 0, t) for t in range(2)]
        straight = mimo_outcomes(config, 0, model, drawn)
        swapped = mimo_outcomes(config, 0, MimoChannelModel(model.grid[:, ::-1]),
                                drawn[::-1])
        for (a, b) in ((straight[0], swapped[1]), (straight[1], swapped[0])):
            assert_allclose(a.trace, b.trace, rtol=1e-12)
            self.assertAlmostEqual(a.wiener_mse.db, b.wiener_mse.db, places=9)
            self.assertEqual(a.symbol_errors, b.symbol_errors)

    def test_mimo_streams_beat_noise(self):
        config = SMALL.replace(mode='mimo', num_runs=2, symbols_per_run=3000,
                               equalizer_length=15, delay=7)
        result = run_experiment(config)
        for stream in range(2):
            for outcome in result.stream_outcomes(stream):
                self.assertFalse(outcome.diverged)
                self.assertLessEqual(outcome.wiener_mse.db,
                                     outcome.tail_db() + 0.5, outcome)


class TestSummary(unittest.TestCase):

    def test_siso_keys(self):
        summary = summarize(run_experiment(SMALL.replace(num_runs=2)))
        self.assertEqual([key for (key, _) in summary], list(SUMMARY_KEYS))
        self.assertEqual(dict(summary)['runs_diverged'], 0)

    def test_mimo_keys(self):
        config = SMALL.replace(mode='mimo', num_runs=2,
                               channel_kind='identity', equalizer_length=3,
                               delay=1)
        summary = dict(summarize(run_experiment(config)))
        for key in SUMMARY_KEYS:
            self.assertEqual(summary[key],
                             max(summary[key + '_stream0'],
                                 summary[key + '_stream1']))

    def test_nothing_to_summarize(self):
        with self.assertRaises(InsufficientData):
            summarize(None)


if __name__ == "__main__":
    unittest.main()
