"""
Quaternion FIR channels with additive quaternion Gaussian noise

    s_r[n] = sum_m f[m] s_t[n - m] + q_a[n]

Taps multiply the signal from the left, the same convention the
equalizer weights follow. Noise is isotropic: four independent real
Gaussian components of equal variance.
"""

import math

import numpy as np

from quatlink.util.faults import DimensionError, QuaternionDomainError
from quatlink.util.qlogging import logger
from quatlink.algebra.quaternion import Quaternion, as_qarray, hamilton, qnorm_sq

SEED_MAX = (1 << 64) - 1


class SeededRng:
    """
    A numpy Generator tied to a 64-bit seed; derive() builds independent
    generators from (master seed, run, stream, ...) keys that do not
    depend on the platform or on the order runs are scheduled in
    """

    def __init__(self, seed, *keys):
        self.seed = int(seed)
        self.keys = tuple(int(k) for k in keys)
        if not 0 <= self.seed <= SEED_MAX:
            raise QuaternionDomainError("seed %d outside [0, 2**64)" % self.seed)
        if any(k < 0 for k in self.keys):
            raise QuaternionDomainError("negative rng key in %r" % (self.keys,))
        sequence = np.random.SeedSequence([self.seed, *self.keys])
        self.generator = np.random.Generator(np.random.PCG64(sequence))

    @staticmethod
    def derive(master_seed, *keys):
        return SeededRng(master_seed, *keys)

    def gaussian(self, shape, variance_per_component):
        """(shape..., 4) array of Gaussian quaternions"""
        if variance_per_component < 0:
            raise QuaternionDomainError("negative variance %g"
                                        % variance_per_component)
        if np.isscalar(shape):
            shape = (shape,)
        draws = self.generator.standard_normal(tuple(shape) + (4,))
        return draws * math.sqrt(variance_per_component)

    def integers(self, high, size):
        return self.generator.integers(0, high, size=size)

    def __repr__(self):
        return "SeededRng(%d%s)" % (
            self.seed, "".join(", %d" % k for k in self.keys))


class ChannelModel:

    def __init__(self, taps, noise_variance_per_component=0.0):
        taps = as_qarray(taps)
        if taps.ndim != 2 or taps.shape[0] < 1:
            raise DimensionError("channel taps need shape (n>=1, 4), got %s"
                                 % (taps.shape,))
        if not np.any(qnorm_sq(taps) > 0):
            raise DimensionError("channel has no nonzero tap")
        if noise_variance_per_component < 0:
            raise QuaternionDomainError("negative noise variance %g"
                                        % noise_variance_per_component)
        self.taps = taps
        self.noise_variance_per_component = float(noise_variance_per_component)

    def energy(self):
        return float(qnorm_sq(self.taps).sum())

    def with_noise(self, variance_per_component):
        return ChannelModel(self.taps, variance_per_component)

    def __repr__(self):
        return "ChannelModel(%d taps, energy=%g, noise var=%g)" % (
            len(self.taps), self.energy(), self.noise_variance_per_component)


class MimoChannelModel:
    """
    grid[r][t] holds the taps from transmit stream t to receive stream r
    as an array (n_rx, n_tx, num_taps, 4)
    """

    def __init__(self, grid, noise_variance_per_component=0.0):
        grid = np.asarray(grid, dtype=float)
        if grid.ndim != 4 or grid.shape[-1] != 4 or \
                min(grid.shape[:3]) < 1:
            raise DimensionError("MIMO grid needs shape (n_rx, n_tx, taps, 4),"
                                 " got %s" % (grid.shape,))
        if noise_variance_per_component < 0:
            raise QuaternionDomainError("negative noise variance %g"
                                        % noise_variance_per_component)
        self.grid = grid
        self.noise_variance_per_component = float(noise_variance_per_component)

    @property
    def n_rx(self):
        return self.grid.shape[0]

    @property
    def n_tx(self):
        return self.grid.shape[1]

    def with_noise(self, variance_per_component):
        return MimoChannelModel(self.grid, variance_per_component)

    def __repr__(self):
        return "MimoChannelModel(%dx%d, %d taps, noise var=%g)" % (
            self.n_rx, self.n_tx, self.grid.shape[2],
            self.noise_variance_per_component)


def convolve(signal, taps):
    """
    causal convolution truncated to len(signal), taps on the left
    """
    signal = as_qarray(signal)
    taps = as_qarray(taps)
    if signal.ndim != 2 or signal.shape[0] == 0:
        raise DimensionError("convolve needs a nonempty signal")
    if taps.ndim != 2 or taps.shape[0] == 0:
        raise DimensionError("convolve needs nonempty taps")
    n = signal.shape[0]
    out = np.zeros_like(signal)
    for m in range(min(len(taps), n)):
        out[m:] += hamilton(taps[m], signal[:n - m])
    return out


def gen_gaussian_quaternion(rng, variance_per_component):
    return Quaternion.from_array(rng.gaussian((), variance_per_component))


def gen_random_channel(rng, num_taps, normalize=True):
    if num_taps < 1:
        raise DimensionError("channel needs at least one tap")
    taps = rng.gaussian(num_taps, 1.0 / (4 * num_taps))
    if normalize:
        taps = taps / math.sqrt(qnorm_sq(taps).sum())
    return ChannelModel(taps)


def gen_random_mimo_channel(rng, n_rx, n_tx, num_taps, normalize=True):
    """
    every link drawn like gen_random_channel, then scaled by 1/n_tx
    in energy so each receive stream sees unit total channel energy
    """
    grid = np.empty((n_rx, n_tx, num_taps, 4))
    for r in range(n_rx):
        for t in range(n_tx):
            grid[r, t] = gen_random_channel(rng, num_taps, normalize).taps
    return MimoChannelModel(grid / math.sqrt(n_tx))


def identity_channel(num_taps=1):
    taps = np.zeros((num_taps, 4))
    taps[0, 0] = 1.0
    return ChannelModel(taps)


def identity_mimo_channel(n_rx, n_tx, num_taps=1):
    grid = np.zeros((n_rx, n_tx, num_taps, 4))
    for r in range(min(n_rx, n_tx)):
        grid[r, r, 0, 0] = 1.0
    return MimoChannelModel(grid)


def apply_siso(model, signal, rng):
    out = convolve(signal, model.taps)
    out += rng.gaussian(out.shape[0], model.noise_variance_per_component)
    return out


def superpose(model, signals):
    """
    noiseless MIMO output: receive stream r is the sum over t of
    grid[r, t] convolved with signals[t]; signals (n_tx, N, 4) or a
    list of n_tx streams, result (n_rx, N, 4)
    """
    signals = np.asarray(signals, dtype=float)
    if signals.ndim != 3 or signals.shape[0] != model.n_tx:
        raise DimensionError("%d transmit streams expected, got shape %s"
                             % (model.n_tx, signals.shape))
    out = np.zeros((model.n_rx,) + signals.shape[1:])
    for r in range(model.n_rx):
        for t in range(model.n_tx):
            out[r] += convolve(signals[t], model.grid[r, t])
    return out


def apply_mimo(model, signals, rng):
    out = superpose(model, signals)
    for r in range(model.n_rx):
        out[r] += rng.gaussian(out.shape[1], model.noise_variance_per_component)
    return out


def noise_variance_for_snr(signal_power, snr_db):
    if not signal_power > 0:
        raise QuaternionDomainError("signal power must be positive, got %r"
                                    % signal_power)
    if math.isinf(snr_db) and snr_db > 0:
        return 0.0
    total = signal_power / 10.0 ** (snr_db / 10.0)
    logger.debug("snr %g dB on power %g: noise var %g per component"
                 % (snr_db, signal_power, total / 4))
    return total / 4.0


def measure_snr_db(clean, noisy):
    """sampled signal power over sampled noise power, in dB"""
    clean = as_qarray(clean)
    noise = as_qarray(noisy) - clean
    return 10.0 * math.log10(float(qnorm_sq(clean).mean())
                             / float(qnorm_sq(noise).mean()))
