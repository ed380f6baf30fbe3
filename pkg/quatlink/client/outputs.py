# pylint: disable=c0111, c0103

"""
Files the quatlink cli leaves in its output directory

* learning_curve.csv, or learning_curve_streamK.csv per transmit stream
  in mimo mode: header `iteration,mse_db`, one row per iteration
* summary.txt: key=value result lines, then a `# config` line and the
  config echo
* manifest.txt: version, timestamp and output paths, then the same
  `# config` echo

Numbers are written with repr(), so equal results give equal bytes.
"""

import os
import csv

from quatlink.util.config import Config
from quatlink.util.faults import ConfigFileError
from quatlink.util.qtime import utcnow, utcparse, datetime_to_string
from quatlink.util.version import version_tag
from quatlink.experiment.expconfig import ExperimentConfig, FIELD_NAMES

CSV_HEADER = ('iteration', 'mse_db')
SUMMARY_FILENAME = 'summary.txt'
MANIFEST_FILENAME = 'manifest.txt'
CONFIG_MARKER = '# config'


def format_value(value):
    if isinstance(value, bool):
        return 'on' if value else 'off'
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(float(value))
    return str(value)


def learning_curve_filename(stream=None):
    if stream is None:
        return 'learning_curve.csv'
    return 'learning_curve_stream%d.csv' % stream


def emit_learning_curve_csv(curve, path):
    """curve is a LearningCurve or a plain sequence of dB values"""
    values = getattr(curve, 'mse_per_iteration', curve)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(CSV_HEADER)
        for iteration, value in enumerate(values):
            writer.writerow((iteration, repr(float(value))))
    return path


def read_learning_curve_csv(path):
    with open(path, 'r', encoding='utf-8', newline='') as f:
        reader = csv.reader(f)
        header = next(reader)
        if tuple(header) != CSV_HEADER:
            raise ConfigFileError(path, "unexpected header %r" % (header,))
        return [float(value) for (_, value) in reader]


def _write_config_echo(f, config):
    f.write(CONFIG_MARKER + "\n")
    f.write(config.output_shell())


def emit_summary(summary, path, config):
    """summary is a [(key, value)] list as returned by summarize()"""
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        for (key, value) in summary:
            f.write("%s=%s\n" % (key, format_value(value)))
        _write_config_echo(f, config)
    return path


def _split(path):
    """(result items, ExperimentConfig) out of a summary or manifest"""
    items = Config(path).items()
    others = [(key, value) for (key, value) in items if key not in FIELD_NAMES]
    config = ExperimentConfig.from_items(
        (key, value) for (key, value) in items if key in FIELD_NAMES)
    return others, config


def read_summary(path):
    """returns (dict of result strings, ExperimentConfig)"""
    others, config = _split(path)
    return dict(others), config


class RunManifest:

    def __init__(self, config, outputs, version=None, timestamp=None):
        self.config = config
        # name -> path, in insertion order
        self.outputs = dict(outputs)
        self.version = version or version_tag
        self.timestamp = timestamp or utcnow()

    def output_shell(self):
        lines = ["version=%s\n" % self.version,
                 "timestamp=%s\n" % datetime_to_string(self.timestamp)]
        lines += ["output.%s=%s\n" % (name, path)
                  for (name, path) in self.outputs.items()]
        return "".join(lines)

    def write(self, path):
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            f.write(self.output_shell())
            _write_config_echo(f, self.config)
        return path

    def __repr__(self):
        return "RunManifest(%s, %s, %d outputs)" % (
            self.version, datetime_to_string(self.timestamp),
            len(self.outputs))


def load_manifest(path):
    others, config = _split(path)
    version = timestamp = None
    outputs = {}
    for (key, value) in others:
        if key == 'version':
            version = value
        elif key == 'timestamp':
            timestamp = utcparse(value)
        elif key.startswith('output.'):
            outputs[key[len('output.'):]] = value
        else:
            raise ConfigFileError(path, "unexpected key %s" % key)
    if version is None or timestamp is None:
        raise ConfigFileError(path, "not a manifest, version or timestamp "
                              "missing")
    return RunManifest(config, outputs, version, timestamp)


def write_outputs(result, directory, summary):
    """
    write every curve, the summary and finally the manifest;
    returns the RunManifest
    """
    os.makedirs(directory, exist_ok=True)
    outputs = {}
    for stream, curve in enumerate(result.curves):
        suffix = stream if result.config.mode == 'mimo' else None
        filename = learning_curve_filename(suffix)
        outputs[os.path.splitext(filename)[0]] = emit_learning_curve_csv(
            curve, os.path.join(directory, filename))
    outputs['summary'] = emit_summary(
        summary, os.path.join(directory, SUMMARY_FILENAME), result.config)
    manifest = RunManifest(result.config, outputs)
    manifest.write(os.path.join(directory, MANIFEST_FILENAME))
    return manifest
