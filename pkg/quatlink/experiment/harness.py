"""
Monte Carlo experiments

Every run draws its own symbols, channel and noise from generators keyed
by (master_seed, run, stream, purpose), so a run gives the same numbers
whichever worker thread executes it and in whatever order. Runs are
aggregated in run order once all of them are back.

Per run and per equalized stream:
  * the QLMS error trace |e[n]|^2, one entry per iteration that has a
    reference symbol (the first `delay` iterations have none)
  * the Wiener MSE of the block solution on the same received block
  * symbol and bit decisions made with the final QLMS weights over the
    second half of the run

A diverged run is left out of the averages and counted.
"""

import math

import numpy as np

from quatlink.util.faults import DivergenceError, ExperimentFailed, InsufficientData
from quatlink.util.qlogging import logger
from quatlink.util.qtime import utcnow
from quatlink.algebra.quaternion import qnorm_sq
from quatlink.comms.modem import (
    BITS_PER_SYMBOL, CONSTELLATION_SIZE, SYMBOL_ENERGY,
    modulate_indices, symbol_indices, count_errors)
from quatlink.comms.channel import (
    SeededRng, convolve, superpose,
    apply_siso, apply_mimo, gen_random_channel, gen_random_mimo_channel,
    identity_channel, identity_mimo_channel, noise_variance_for_snr)
from quatlink.equalizer.adaptive import build_regressors, run_qlms, equalize
from quatlink.equalizer.wiener import MSE_DB_FLOOR, to_db, wiener_equalizer
from quatlink.experiment.runner import run_all

# every transmit stream is sent at this mean power per symbol
STREAM_POWER = 1.0

# last element of the generator key
PURPOSE_SYMBOLS = 0
PURPOSE_CHANNEL = 1
PURPOSE_NOISE = 2

# steady state is read over this trailing fraction of the curve
STEADY_STATE_FRACTION = 0.1
# convergence: first index whose trailing moving average is this close
# to the steady state
CONVERGENCE_WINDOW = 20
CONVERGENCE_TOLERANCE_DB = 1.0


def curve_to_db(linear):
    linear = np.asarray(linear, dtype=float)
    db = np.full(linear.shape, MSE_DB_FLOOR)
    positive = linear > 0
    db[positive] = np.maximum(MSE_DB_FLOOR, 10.0 * np.log10(linear[positive]))
    return db


def steady_state_db(linear, fraction=STEADY_STATE_FRACTION):
    linear = np.asarray(linear, dtype=float)
    if linear.size == 0:
        raise InsufficientData("empty learning curve")
    count = max(1, int(math.ceil(fraction * linear.size)))
    return to_db(float(linear[-count:].mean()))


def convergence_iteration(curve_db, steady_db, window=CONVERGENCE_WINDOW,
                          tolerance_db=CONVERGENCE_TOLERANCE_DB):
    """
    first index where the mean of curve_db over the trailing window
    (shorter at the start) lies within tolerance_db of steady_db;
    the last index when that never happens
    """
    curve_db = np.asarray(curve_db, dtype=float)
    if curve_db.size == 0:
        raise InsufficientData("empty learning curve")
    window = max(1, int(window))
    sums = np.concatenate(([0.0], np.cumsum(curve_db)))
    index = np.arange(curve_db.size)
    low = np.maximum(0, index - window + 1)
    smoothed = (sums[index + 1] - sums[low]) / (index + 1 - low)
    hits = np.flatnonzero(np.abs(smoothed - steady_db) <= tolerance_db)
    return int(hits[0]) if hits.size else int(curve_db.size - 1)


class LearningCurve:
    """
    Mean normalized squared error per iteration over the runs that did
    not diverge; index 0 is the first iteration with a reference symbol
    """

    def __init__(self, linear, runs_averaged, runs_diverged=0):
        self.linear = np.asarray(linear, dtype=float)
        self.runs_averaged = runs_averaged
        self.runs_diverged = runs_diverged
        self.mse_per_iteration = curve_to_db(self.linear)
        self.steady_state_db = steady_state_db(self.linear)
        self.convergence_iteration = convergence_iteration(
            self.mse_per_iteration, self.steady_state_db)

    def __len__(self):
        return self.linear.size

    def __repr__(self):
        return "LearningCurve(%d iterations, %d runs, steady %.2f dB)" % (
            len(self), self.runs_averaged, self.steady_state_db)


class RunOutcome:
    """One equalized stream of one run"""

    def __init__(self, run, stream, trace=None, wiener_mse=None,
                 symbols=0, symbol_errors=0, bit_errors=0):
        self.run = run
        self.stream = stream
        self.trace = trace
        self.wiener_mse = wiener_mse
        self.symbols = symbols
        self.symbol_errors = symbol_errors
        self.bit_errors = bit_errors

    @property
    def diverged(self):
        return self.trace is None

    def tail_db(self, fraction=0.25):
        """normalized QLMS MSE over the last part of this run, in dB"""
        count = max(1, int(math.ceil(fraction * self.trace.size)))
        return to_db(float(self.trace[-count:].mean()) / STREAM_POWER)

    def __repr__(self):
        if self.diverged:
            return "RunOutcome(run %d, stream %d, diverged)" % (
                self.run, self.stream)
        return "RunOutcome(run %d, stream %d, wiener %.2f dB)" % (
            self.run, self.stream, self.wiener_mse.db)


class StreamResult:

    def __init__(self, stream, curve, wiener_mse_db, symbols,
                 symbol_errors, bit_errors):
        self.stream = stream
        self.curve = curve
        self.wiener_mse_db = wiener_mse_db
        self.symbols = symbols
        self.symbol_errors = symbol_errors
        self.bit_errors = bit_errors

    @property
    def ser(self):
        return self.symbol_errors / self.symbols if self.symbols else 0.0

    @property
    def ber(self):
        bits = BITS_PER_SYMBOL * self.symbols
        return self.bit_errors / bits if bits else 0.0


class ExperimentResult:

    def __init__(self, config, streams, outcomes, started=None, finished=None):
        self.config = config
        self.streams = streams
        # outcomes[run][stream]
        self.outcomes = outcomes
        self.started = started
        self.finished = finished

    @property
    def curves(self):
        return [stream.curve for stream in self.streams]

    @property
    def learning_curve(self):
        return self.streams[0].curve

    def stream_outcomes(self, stream=0):
        return [outcomes[stream] for outcomes in self.outcomes]

    def __repr__(self):
        return "ExperimentResult(%s, %d streams, %d runs)" % (
            self.config.mode, len(self.streams), len(self.outcomes))


####################
def _draw_symbols(config, run, stream):
    rng = SeededRng.derive(config.master_seed, run, stream, PURPOSE_SYMBOLS)
    indices = rng.integers(CONSTELLATION_SIZE, config.symbols_per_run)
    scale = math.sqrt(STREAM_POWER / SYMBOL_ENERGY)
    return indices, scale * modulate_indices(indices)


def _noise_variance(config, transmitted, clean):
    if config.snr_reference_point == 'transmitter':
        power = float(qnorm_sq(transmitted).mean())
    else:
        power = float(qnorm_sq(clean).mean())
    return noise_variance_for_snr(power, config.snr_db)


def _equalize_stream(config, run, stream, regressors, indices, transmitted):
    length, delay = config.equalizer_length, config.delay
    # step_size is per receive stream; a regressor stacking S streams
    # carries S times the power
    step_size = config.step_size / (regressors.shape[1] // length)
    try:
        state, trace = run_qlms(None, transmitted, length, step_size,
                                delay=delay, regressors=regressors)
    except DivergenceError as e:
        logger.warning("run %d stream %d: %s" % (run, stream, e))
        return RunOutcome(run, stream)
    _, wiener_mse = wiener_equalizer(None, transmitted, length, delay,
                                     regressors=regressors)
    total = regressors.shape[0]
    start = max(delay, total // 2)
    decided = symbol_indices(equalize(state.weights,
                                      regressors=regressors[start:]))
    symbol_errors, bit_errors = count_errors(
        indices[start - delay:total - delay], decided)
    logger.debug("run %d stream %d: final error %.3g, wiener %.2f dB"
                 % (run, stream, trace[-1], wiener_mse.db))
    return RunOutcome(run, stream, trace, wiener_mse, decided.size,
                      symbol_errors, bit_errors)


def siso_run(config, run):
    indices, transmitted = _draw_symbols(config, run, 0)
    if config.channel_kind == 'identity':
        model = identity_channel(config.num_channel_taps)
    else:
        model = gen_random_channel(
            SeededRng.derive(config.master_seed, run, 0, PURPOSE_CHANNEL),
            config.num_channel_taps, config.normalize_channel)
    variance = _noise_variance(config, transmitted,
                               convolve(transmitted, model.taps))
    received = apply_siso(
        model.with_noise(variance), transmitted,
        SeededRng.derive(config.master_seed, run, 0, PURPOSE_NOISE))
    regressors = build_regressors(received, config.equalizer_length)
    return [_equalize_stream(config, run, 0, regressors, indices, transmitted)]


def mimo_run(config, run):
    drawn = [_draw_symbols(config, run, t) for t in range(config.mimo_tx)]
    if config.channel_kind == 'identity':
        model = identity_mimo_channel(config.mimo_rx, config.mimo_tx,
                                      config.num_channel_taps)
    else:
        model = gen_random_mimo_channel(
            SeededRng.derive(config.master_seed, run, 0, PURPOSE_CHANNEL),
            config.mimo_rx, config.mimo_tx, config.num_channel_taps,
            config.normalize_channel)
    return mimo_outcomes(config, run, model, drawn)


def mimo_outcomes(config, run, model, drawn):
    """
    noise, receive and equalize one run over a given MIMO channel;
    drawn holds (indices, symbols) per transmit stream
    """
    transmitted = np.stack([symbols for (_, symbols) in drawn])
    variance = _noise_variance(config, transmitted,
                               superpose(model, transmitted))
    received = apply_mimo(
        model.with_noise(variance), transmitted,
        SeededRng.derive(config.master_seed, run, 0, PURPOSE_NOISE))
    # one regressor stacks all receive streams, shared by every equalizer
    regressors = build_regressors(received, config.equalizer_length)
    return [_equalize_stream(config, run, t, regressors, indices, symbols)
            for t, (indices, symbols) in enumerate(drawn)]


def _aggregate(outcomes, stream):
    survivors = [per_run[stream] for per_run in outcomes
                 if not per_run[stream].diverged]
    diverged = len(outcomes) - len(survivors)
    if not survivors:
        raise ExperimentFailed(diverged, "every run diverged on stream %d"
                               % stream)
    if diverged:
        logger.warning("stream %d: %d of %d runs diverged"
                       % (stream, diverged, len(outcomes)))
    linear = np.mean([o.trace for o in survivors], axis=0) / STREAM_POWER
    curve = LearningCurve(linear, len(survivors), diverged)
    wiener_db = to_db(float(np.mean([o.wiener_mse.normalized
                                     for o in survivors])))
    return StreamResult(stream, curve, wiener_db,
                        sum(o.symbols for o in survivors),
                        sum(o.symbol_errors for o in survivors),
                        sum(o.bit_errors for o in survivors))


def run_experiment(config, workers=1):
    """run every Monte Carlo run of config, dispatching on config.mode"""
    if config.mode == 'mimo':
        method, streams = mimo_run, config.mimo_tx
    else:
        method, streams = siso_run, 1
    logger.info("%s experiment: %d runs of %d symbols, L=%d mu=%g delay=%d "
                "snr=%s dB (%s), seed %d"
                % (config.mode, config.num_runs, config.symbols_per_run,
                   config.equalizer_length, config.step_size, config.delay,
                   config.snr_db, config.snr_reference_point,
                   config.master_seed))
    started = utcnow()
    outcomes = run_all(lambda run: method(config, run),
                       range(config.num_runs), workers)
    result = ExperimentResult(
        config, [_aggregate(outcomes, s) for s in range(streams)],
        outcomes, started, utcnow())
    for stream in result.streams:
        logger.info("stream %d: steady state %.2f dB, wiener %.2f dB, "
                    "ser %g" % (stream.stream, stream.curve.steady_state_db,
                                stream.wiener_mse_db, stream.ser))
    return result


def run_siso_experiment(config, workers=1):
    return run_experiment(config.replace(mode='siso'), workers)


def run_mimo_experiment(config, workers=1):
    return run_experiment(config.replace(mode='mimo'), workers)


SUMMARY_KEYS = ('steady_state_db', 'convergence_iteration', 'ser', 'ber',
                'wiener_mse_db', 'runs_diverged')


def _stream_summary(stream):
    return {
        'steady_state_db': stream.curve.steady_state_db,
        'convergence_iteration': stream.curve.convergence_iteration,
        'ser': stream.ser,
        'ber': stream.ber,
        'wiener_mse_db': stream.wiener_mse_db,
        'runs_diverged': stream.curve.runs_diverged,
    }


def summarize(result):
    """
    [(key, value)] in SUMMARY_KEYS order; with several streams the plain
    keys hold the worst stream and every stream follows with a
    _streamK suffix
    """
    if result is None or not result.streams:
        raise InsufficientData("no experiment result to summarize")
    per_stream = [_stream_summary(stream) for stream in result.streams]
    summary = [(key, max(values[key] for values in per_stream))
               for key in SUMMARY_KEYS]
    if len(per_stream) > 1:
        for k, values in enumerate(per_stream):
            summary += [("%s_stream%d" % (key, k), values[key])
                        for key in SUMMARY_KEYS]
    return summary
