"""
Experiment parameters

ExperimentConfig carries every knob of a Monte Carlo experiment. Its
text form is one key=value per line in FIELDS order, which is what
config files, the summary echo and the manifest all use; parsing that
text gives back an identical ExperimentConfig.
"""

import math
import dataclasses
from dataclasses import dataclass

from quatlink.util.config import Config
from quatlink.util.faults import InvalidConfig
from quatlink.util.qlogging import logger
from quatlink.comms.channel import SEED_MAX

MODES = ('siso', 'mimo')
SNR_REFERENCE_POINTS = ('receiver', 'transmitter')
CHANNEL_KINDS = ('random', 'identity')


def _parse_bool(value):
    lowered = str(value).strip().lower()
    if lowered in ('on', 'true', '1', 'yes'):
        return True
    if lowered in ('off', 'false', '0', 'no'):
        return False
    raise ValueError("expected on or off, got %r" % value)


def _format_bool(value):
    return 'on' if value else 'off'


def _parse_float(value):
    result = float(value)
    if math.isnan(result):
        raise ValueError("nan is not a number here")
    return result


def _format_float(value):
    return repr(float(value))


def _parse_int(value):
    return int(str(value).strip())


# (name, parser, formatter)
FIELDS = (
    ('mode', str, str),
    ('num_channel_taps', _parse_int, str),
    ('equalizer_length', _parse_int, str),
    ('snr_db', _parse_float, _format_float),
    ('snr_reference_point', str, str),
    ('num_runs', _parse_int, str),
    ('symbols_per_run', _parse_int, str),
    ('step_size', _parse_float, _format_float),
    ('delay', _parse_int, str),
    ('master_seed', _parse_int, str),
    ('normalize_channel', _parse_bool, _format_bool),
    ('mimo_tx', _parse_int, str),
    ('mimo_rx', _parse_int, str),
    ('channel_kind', str, str),
)

FIELD_NAMES = tuple(name for (name, _, __) in FIELDS)
_PARSERS = dict((name, parser) for (name, parser, _) in FIELDS)
_FORMATTERS = dict((name, formatter) for (name, _, formatter) in FIELDS)


@dataclass(frozen=True)
class ExperimentConfig:
    mode: str = 'siso'
    num_channel_taps: int = 4
    equalizer_length: int = 15
    snr_db: float = 20.0
    snr_reference_point: str = 'receiver'
    num_runs: int = 200
    symbols_per_run: int = 5000
    step_size: float = 0.01
    # None means floor(equalizer_length / 2)
    delay: int = None
    master_seed: int = 0
    normalize_channel: bool = True
    mimo_tx: int = 2
    mimo_rx: int = 2
    channel_kind: str = 'random'

    def __post_init__(self):
        if self.delay is None:
            object.__setattr__(self, 'delay', self.equalizer_length // 2)
        self.validate()

    def validate(self):
        if self.mode not in MODES:
            raise InvalidConfig('mode', "%r not in %s" % (self.mode, MODES))
        if self.snr_reference_point not in SNR_REFERENCE_POINTS:
            raise InvalidConfig('snr_reference_point', "%r not in %s"
                                % (self.snr_reference_point,
                                   SNR_REFERENCE_POINTS))
        if self.channel_kind not in CHANNEL_KINDS:
            raise InvalidConfig('channel_kind', "%r not in %s"
                                % (self.channel_kind, CHANNEL_KINDS))
        for name in ('num_channel_taps', 'equalizer_length', 'num_runs',
                     'symbols_per_run', 'mimo_tx', 'mimo_rx'):
            if getattr(self, name) < 1:
                raise InvalidConfig(name, "must be >= 1, got %r"
                                    % getattr(self, name))
        if not self.step_size > 0 or math.isinf(self.step_size):
            raise InvalidConfig('step_size', "must be positive, got %r"
                                % self.step_size)
        if not 0 <= self.master_seed <= SEED_MAX:
            raise InvalidConfig('master_seed', "must fit in 64 unsigned bits, "
                                "got %r" % self.master_seed)
        if math.isnan(self.snr_db) or self.snr_db == -math.inf:
            raise InvalidConfig('snr_db', repr(self.snr_db))
        if not 0 <= self.delay < self.symbols_per_run:
            raise InvalidConfig('delay', "must be in [0, %d), got %r"
                                % (self.symbols_per_run, self.delay))

    @property
    def noiseless(self):
        return math.isinf(self.snr_db) and self.snr_db > 0

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def items(self):
        return [(name, _FORMATTERS[name](getattr(self, name)))
                for name in FIELD_NAMES]

    def output_shell(self):
        return "".join("%s=%s\n" % item for item in self.items())

    @staticmethod
    def from_items(items):
        """
        build from (name, string) pairs; unknown names are rejected
        """
        values = {}
        for (name, text) in items:
            if name not in _PARSERS:
                raise InvalidConfig(name, "unknown key")
            try:
                values[name] = _PARSERS[name](text)
            except ValueError as e:
                raise InvalidConfig(name, e)
        return ExperimentConfig(**values)

    @staticmethod
    def from_config(config):
        items = []
        for (name, value) in config.items():
            if name in _PARSERS:
                items.append((name, value))
            else:
                logger.warning("ignoring unknown experiment key %s" % name)
        return ExperimentConfig.from_items(items)

    @staticmethod
    def load(filename):
        return ExperimentConfig.from_config(Config(filename, known=FIELD_NAMES))
