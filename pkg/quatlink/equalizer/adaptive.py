"""
Reference-based QLMS equalizer

    e[n]   = r[n - d] - w^T x[n]
    w[n+1] = w[n] + mu e[n] x*[n]

with x[n] = [s_r[n], s_r[n-1], ..., s_r[n-L+1]] (zero before the start
of the signal). The error multiplies the conjugated regressor from the
left, in that order. Several receive streams are handled by stacking
their regressors: [stream 0 lags, stream 1 lags, ...].
"""


import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from quatlink.util.faults import DimensionError, DivergenceError
from quatlink.util.qlogging import logger
from quatlink.algebra.quaternion import (
    Quaternion, as_qarray, hamilton, qconj, qnorm_sq, HAMILTON_TABLE,
    mul, conj, norm_sq, real_part)
from quatlink.algebra.linalg import dot_left, qvector

# a run is declared diverged when |e|^2 exceeds this many times
# the mean reference energy
DIVERGENCE_FACTOR = 1e6

# (p*4 + q, c) and (p, q*4 + c) views of the Hamilton table
_TABLE_PQ_C = HAMILTON_TABLE.reshape(16, 4)
_TABLE_P_QC = HAMILTON_TABLE.reshape(4, 16)


class EqualizerState:

    def __init__(self, weights, step_size):
        weights = qvector(weights)
        if not step_size >= 0:
            raise DimensionError("step size must be >= 0, got %r"
                                 % step_size)
        self.weights = weights
        self.step_size = float(step_size)

    @staticmethod
    def zeros(length, step_size):
        return EqualizerState(np.zeros((length, 4)), step_size)

    @property
    def length(self):
        return self.weights.shape[0]

    def __repr__(self):
        return "EqualizerState(L=%d, mu=%g)" % (self.length, self.step_size)


def build_regressors(signal, length):
    """
    every regressor of a received signal, shape (N, S*length, 4)

    signal is one stream (N, 4) or S stacked streams (S, N, 4)
    """
    signal = as_qarray(signal)
    if length < 1:
        raise DimensionError("equalizer length must be >= 1")
    if signal.ndim == 2:
        signal = signal[None]
    if signal.ndim != 3 or signal.shape[1] == 0:
        raise DimensionError("cannot build regressors from shape %s"
                             % (signal.shape,))
    blocks = []
    for stream in signal:
        padded = np.concatenate((np.zeros((length - 1, 4)), stream))
        # windows come out as (N, 4, length), oldest sample first
        windows = sliding_window_view(padded, length, axis=0)
        blocks.append(windows[:, :, ::-1].transpose(0, 2, 1))
    return np.ascontiguousarray(np.concatenate(blocks, axis=1))


def _check(state, x):
    if x.shape != state.weights.shape:
        raise DimensionError("regressor %s vs weights %s"
                             % (x.shape, state.weights.shape))


def predict(state, x):
    x = as_qarray(x)
    _check(state, x)
    return dot_left(state.weights, x)


def error(state, x, r):
    return _as_quaternion(r) - predict(state, x)


def cost(e):
    """J = e e*, a real number"""
    return real_part(mul(e, conj(e)))


def qlms_step(state, x, r, iteration=0):
    """
    one QLMS update; returns (new state, error before the update).
    iteration only labels a DivergenceError
    """
    x = as_qarray(x)
    e = error(state, x, r)
    weights = state.weights + state.step_size * hamilton(e.as_array(), qconj(x))
    if not np.all(np.isfinite(weights)):
        raise DivergenceError(iteration, norm_sq(e), extra="non-finite weight")
    return EqualizerState(weights, state.step_size), e


def run_qlms(signal, reference, length, step_size, delay=0,
             weights=None, regressors=None):
    """
    Adapt over the whole signal; returns (final state, trace) where
    trace[k] = |e|^2 at iteration n = k + delay. The first `delay`
    iterations have no reference yet and are skipped.

    On divergence a DivergenceError is raised, its trace holding the
    iterations done so far.
    """
    reference = as_qarray(reference)
    if regressors is None:
        regressors = build_regressors(signal, length)
    total = regressors.shape[0]
    if delay < 0:
        raise DimensionError("delay must be >= 0, got %r" % delay)
    if total - delay < 1:
        raise DimensionError("%d samples leave no iteration after a delay "
                             "of %d" % (total, delay))
    if reference.shape[0] < total - delay:
        raise DimensionError("reference has %d samples, %d needed"
                             % (reference.shape[0], total - delay))

    if weights is None:
        w = np.zeros((regressors.shape[1], 4))
    else:
        w = np.array(qvector(weights), dtype=float)
        if w.shape[0] != regressors.shape[1]:
            raise DimensionError("initial weights %s vs regressors of %d"
                                 % (w.shape, regressors.shape[1]))
    mu = float(step_size)
    if not mu >= 0:
        raise DimensionError("step size must be >= 0, got %r" % step_size)

    limit = DIVERGENCE_FACTOR * max(float(qnorm_sq(reference).mean()), 1e-300)
    conj_regressors = qconj(regressors)
    trace = np.empty(total - delay)
    if delay:
        logger.debug("qlms: %d warm-up iterations without reference" % delay)

    for k in range(total - delay):
        n = k + delay
        x = regressors[n]
        y = (w.T @ x).reshape(16) @ _TABLE_PQ_C
        e = reference[k] - y
        nsq = float(e @ e)
        if not nsq <= limit:
            raise DivergenceError(n, nsq, trace=trace[:k].copy())
        trace[k] = nsq
        if mu:
            w += mu * (conj_regressors[n] @ (e @ _TABLE_P_QC).reshape(4, 4))
            if not np.isfinite(w).all():
                raise DivergenceError(n, nsq, trace=trace[:k + 1].copy(),
                                      extra="non-finite weight")

    return EqualizerState(w, mu), trace


def equalize(weights, signal=None, regressors=None, length=None):
    """equalizer output w^T x[n] for every n, shape (N, 4)"""
    weights = qvector(weights)
    if regressors is None:
        if length is None:
            length = weights.shape[0]
        regressors = build_regressors(signal, length)
    if regressors.shape[1] != weights.shape[0]:
        raise DimensionError("weights %s vs regressors %s"
                             % (weights.shape, regressors.shape))
    return hamilton(weights[None], regressors).sum(axis=1)


class QlmsEqualizer:
    """
    Owns one EqualizerState; `length` counts lags per receive stream,
    the weight vector holds streams * length taps
    """

    def __init__(self, length, step_size, delay=0, streams=1):
        self.length = length
        self.delay = delay
        self.streams = streams
        self.state = EqualizerState.zeros(streams * length, step_size)
        self.iterations = 0

    def step(self, x, r):
        self.state, e = qlms_step(self.state, x, r, self.iterations)
        self.iterations += 1
        return e

    def run(self, signal, reference, regressors=None):
        self.state, trace = run_qlms(
            signal, reference, self.length, self.state.step_size,
            delay=self.delay, weights=self.state.weights,
            regressors=regressors)
        self.iterations += len(trace) + self.delay
        return trace

    def equalize(self, signal=None, regressors=None):
        return equalize(self.state.weights, signal=signal,
                        regressors=regressors, length=self.length)


def _as_quaternion(r):
    if isinstance(r, Quaternion):
        return r
    return Quaternion.from_array(r)

