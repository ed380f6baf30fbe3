"""
Block quaternion Wiener equalizer

Sample statistics over one block

    R = 1/N sum_n x[n] x[n]^H        p = 1/N sum_n x[n] r*[n - d]

and the normal equations R w* = p, so that the weights applied from the
left are w = conj(R^-1 p). The conjugation is done here; callers always
get weights they can use directly.
"""

import math

import numpy as np

from quatlink.util.faults import DimensionError, InsufficientData, SingularMatrix
from quatlink.util.qlogging import logger
from quatlink.algebra.quaternion import as_qarray, qconj, qnorm_sq
from quatlink.algebra.linalg import (
    identity, is_hermitian, solve, sum_outer_h, qvector)
from quatlink.equalizer.adaptive import build_regressors, equalize

# 10 log10 of a zero error is reported as this
MSE_DB_FLOOR = -100.0

# ridge used when the caller gives none, relative to trace(R) / L
DEFAULT_RIDGE_FACTOR = 1e-8


class WienerProblem:

    def __init__(self, R, p, sample_count):
        if R.ndim != 3 or R.shape[0] != R.shape[1] or p.shape != (R.shape[0], 4):
            raise DimensionError("R %s and p %s do not fit" % (R.shape, p.shape))
        if not is_hermitian(R):
            raise DimensionError("R is not Hermitian")
        self.R = R
        self.p = p
        self.sample_count = sample_count

    @property
    def length(self):
        return self.R.shape[0]

    def default_ridge(self):
        return DEFAULT_RIDGE_FACTOR * float(np.trace(self.R[..., 0])) / self.length

    def __repr__(self):
        return "WienerProblem(L=%d, N=%d)" % (self.length, self.sample_count)


class MseResult:

    def __init__(self, linear, reference_power):
        self.linear = float(linear)
        self.reference_power = float(reference_power)
        if self.reference_power > 0:
            self.normalized = self.linear / self.reference_power
        else:
            self.normalized = 0.0 if self.linear == 0 else math.inf
        self.db = to_db(self.normalized)

    def __repr__(self):
        return "MseResult(%g, %.2f dB)" % (self.linear, self.db)


def to_db(value):
    if value <= 0:
        return MSE_DB_FLOOR
    if math.isinf(value):
        return math.inf
    return max(MSE_DB_FLOOR, 10.0 * math.log10(value))


def _aligned(signal, reference, length, delay, regressors):
    if delay < 0:
        raise DimensionError("delay must be >= 0, got %r" % delay)
    reference = as_qarray(reference)
    if regressors is None:
        regressors = build_regressors(signal, length)
    usable = min(regressors.shape[0] - delay, reference.shape[0])
    if usable < 1:
        raise InsufficientData("%d samples with delay %d"
                               % (regressors.shape[0], delay))
    return regressors[delay:delay + usable], reference[:usable]


def estimate_statistics(signal, reference, length, delay=0, regressors=None):
    x, r = _aligned(signal, reference, length, delay, regressors)
    count = x.shape[0]
    R = sum_outer_h(x, x) / count
    # averaging x x^H leaves round-off asymmetry, fold it away
    R = 0.5 * (R + qconj(np.swapaxes(R, 0, 1)))
    p = sum_outer_h(x, r) / count
    return WienerProblem(R, p, count)


def solve_wiener(problem, ridge=None):
    if ridge is None:
        ridge = problem.default_ridge()
    if ridge < 0:
        raise DimensionError("ridge must be >= 0, got %r" % ridge)
    system = problem.R + ridge * identity(problem.length)
    try:
        y = solve(system, problem.p)
    except SingularMatrix as e:
        if ridge == 0:
            raise SingularMatrix(e.pivot, "use a positive ridge")
        raise
    return qconj(y)


def evaluate_mse(w, signal, reference, length, delay=0, regressors=None):
    w = qvector(w)
    x, r = _aligned(signal, reference, length, delay, regressors)
    e = r - equalize(w, regressors=x)
    return MseResult(qnorm_sq(e).mean(), qnorm_sq(r).mean())


def wiener_equalizer(signal, reference, length, delay=0, ridge=None,
                     regressors=None):
    """estimate, solve and score on the same block: (weights, MseResult)"""
    if regressors is None:
        regressors = build_regressors(signal, length)
    problem = estimate_statistics(None, reference, length, delay,
                                  regressors=regressors)
    w = solve_wiener(problem, ridge)
    mse = evaluate_mse(w, None, reference, length, delay,
                       regressors=regressors)
    logger.debug("wiener L=%d over %d samples: %.2f dB"
                 % (w.shape[0], problem.sample_count, mse.db))
    return w, mse
