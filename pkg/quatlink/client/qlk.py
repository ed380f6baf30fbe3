#!/usr/bin/env python3

# pylint: disable=c0111, c0103, w0622

"""
quatlink -- command line front end

    quatlink [-v] run [options]       run an experiment, write its outputs
    quatlink [-v] config [options]    print the effective configuration

Experiment values come from, in decreasing priority: command line
options, the --config file, the QUATLINK_SEED environment variable (for
the master seed only) and the built-in defaults.
"""

import os
import sys
from functools import wraps
from optparse import OptionParser

from quatlink.util.qlogging import logger, init_logger
from quatlink.util.faults import QuatlinkFault, InvalidConfig, ConfigFileError
from quatlink.util.config import Config
from quatlink.util.version import version_tag
from quatlink.experiment.expconfig import (
    ExperimentConfig, FIELD_NAMES, MODES, SNR_REFERENCE_POINTS, CHANNEL_KINDS)
from quatlink.experiment.harness import run_experiment, summarize
from quatlink.client.outputs import write_outputs

SEED_VARIABLE = 'QUATLINK_SEED'
DEFAULT_OUT = 'quatlink-out'
LOG_FILENAME = 'quatlink.log'

# (flag, field, metavar, choices, help)
EXPERIMENT_OPTIONS = (
    ('--mode', 'mode', None, MODES, "experiment kind"),
    ('--taps', 'num_channel_taps', 'N', None, "channel taps"),
    ('--eq-len', 'equalizer_length', 'L', None,
     "equalizer taps per receive stream"),
    ('--snr-db', 'snr_db', 'X', None,
     "signal to noise ratio in dB, inf for a noiseless channel"),
    ('--snr-ref', 'snr_reference_point', None, SNR_REFERENCE_POINTS,
     "where the signal power is measured"),
    ('--runs', 'num_runs', 'N', None, "Monte Carlo runs"),
    ('--symbols', 'symbols_per_run', 'N', None, "symbols per run"),
    ('--mu', 'step_size', 'X', None, "QLMS step size"),
    ('--delay', 'delay', 'D', None,
     "equalization delay, floor(L/2) unless given"),
    ('--seed', 'master_seed', 'S', None,
     "master seed, $%s when not given" % SEED_VARIABLE),
    ('--normalize-channel', 'normalize_channel', None, ('on', 'off'),
     "scale every channel to unit energy"),
    ('--channel', 'channel_kind', None, CHANNEL_KINDS,
     "Gaussian random taps or a unit impulse"),
    ('--mimo-tx', 'mimo_tx', 'N', None, "transmit streams in mimo mode"),
    ('--mimo-rx', 'mimo_rx', 'N', None, "receive streams in mimo mode"),
)

DEFAULTS = dict(ExperimentConfig().items())


# we use a list as well as a dict so we can keep track of the order
commands_list = []
commands_dict = {}


def declare_command(example):
    def wrap(m):
        name = m.__name__
        doc = (m.__doc__ or "-- missing doc --").strip(" \t\n")
        commands_list.append(name)
        commands_dict[name] = (doc, example)

        @wraps(m)
        def new_method(*args, **kwds):
            return m(*args, **kwds)
        return new_method
    return wrap


def only_match(input, names):
    """the one name input is a prefix of, or None"""
    if input in names:
        return input
    matches = [name for name in names if name.startswith(input)]
    return matches[0] if len(matches) == 1 else None


class QuatLink:

    def __init__(self, environ=None):
        self.environ = os.environ if environ is None else environ
        self.command = None

    # suitable if no reasonable command has been provided
    def print_commands_help(self):
        self.create_parser_global().print_help()
        for command in commands_list:
            (doc, example) = commands_dict[command]
            print("\n==================== %s: %s" % (command, doc))
            self.create_parser_command(command).print_help()
            if example:
                print("example: %s" % example)

    def create_parser_global(self):
        parser = OptionParser(
            add_help_option=False,
            usage="quatlink [options] command [cmd_options]",
            description="Commands: %s" % " ".join(commands_list),
            version="quatlink %s" % version_tag)
        parser.add_option("-v", "--verbose", action="count", dest="verbose",
                          default=0, help="verbose mode - cumulative")
        parser.add_option("-h", "--help", action="store_true", dest="help",
                          default=False,
                          help="summary of every command and option & exit")
        parser.disable_interspersed_args()
        return parser

    def create_parser_command(self, command):
        parser = OptionParser(usage="quatlink [options] %s [cmd_options]"
                              % command)
        for (flag, field, metavar, choices, help) in EXPERIMENT_OPTIONS:
            help = "%s (default: %s)" % (help, DEFAULTS[field])
            if choices:
                parser.add_option(flag, dest=field, type="choice",
                                  choices=list(choices),
                                  help="%s, one of %s" % (help,
                                                          "|".join(choices)))
            else:
                parser.add_option(flag, dest=field, metavar=metavar,
                                  help=help)
        parser.add_option("--config", dest="config", metavar="PATH",
                          default=None,
                          help="flat key=value or ini experiment file")
        parser.add_option("-v", "--verbose", action="count", dest="verbose",
                          default=0, help="verbose mode - cumulative")
        if command == 'run':
            parser.add_option("--out", dest="out", metavar="DIR",
                              default=DEFAULT_OUT,
                              help="output directory (default: %default)")
            parser.add_option("--workers", dest="workers", metavar="N",
                              type="int", default=os.cpu_count() or 1,
                              help="worker threads (default: %default)")
            parser.add_option("--log-file", dest="log_file",
                              action="store_true", default=False,
                              help="log into %s in the output directory "
                              "instead of stderr" % LOG_FILENAME)
        return parser

    def resolve_config(self, parser, command_options):
        """
        merge environment, config file and options, later ones winning;
        a bad value is a usage error naming where it came from
        """
        values = {}
        origins = {}
        seed = self.environ.get(SEED_VARIABLE, '').strip()
        if seed:
            values['master_seed'] = seed
            origins['master_seed'] = "environment variable %s" % SEED_VARIABLE
        if command_options.config:
            try:
                config = Config(command_options.config, known=FIELD_NAMES)
            except ConfigFileError as e:
                parser.error("option --config: %s" % e)
            for (name, value) in config.items():
                if name not in FIELD_NAMES:
                    logger.warning("%s: ignoring unknown key %s"
                                   % (command_options.config, name))
                    continue
                values[name] = value
                origins[name] = "%s in %s" % (name, command_options.config)
        for (flag, field, _, __, ___) in EXPERIMENT_OPTIONS:
            value = getattr(command_options, field)
            if value is not None:
                values[field] = value
                origins[field] = "option %s" % flag
        try:
            return ExperimentConfig.from_items(values.items())
        except InvalidConfig as e:
            parser.error("%s: %s" % (origins.get(e.name, e.name), e))

    def parse(self, argv):
        """
        returns (command, global options, command options, ExperimentConfig);
        usage errors exit with status 2 the optparse way
        """
        global_parser = self.create_parser_global()
        (options, args) = global_parser.parse_args(argv)
        if options.help:
            self.print_commands_help()
            sys.exit(0)
        if not args:
            global_parser.error("no command given, use -h for help")
        command = only_match(args[0], commands_list)
        if not command:
            global_parser.error("unknown command %s, one of %s"
                                % (args[0], ", ".join(commands_list)))
        parser = self.create_parser_command(command)
        (command_options, command_args) = parser.parse_args(args[1:])
        if command_args:
            parser.error("unexpected arguments %s" % " ".join(command_args))
        if command == 'run' and command_options.workers < 1:
            parser.error("option --workers: must be >= 1")
        config = self.resolve_config(parser, command_options)
        return (command, options, command_options, config)

    #
    # Main: parse arguments and dispatch to command
    #
    def dispatch(self, command, command_options, config):
        method = getattr(self, command)
        return method(command_options, config)

    def main(self, argv=None):
        init_logger('cli')
        if argv is None:
            argv = sys.argv[1:]
        try:
            (command, options, command_options, config) = self.parse(argv)
        except SystemExit as e:
            return e.code
        self.command = command
        logger.setLevelFromOptVerbose(options.verbose + command_options.verbose)
        logger.debug("command=%s" % command)
        try:
            return self.dispatch(command, command_options, config)
        except (QuatlinkFault, OSError):
            logger.log_exc("quatlink %s failed" % command)
            return 1

    ####################
    @declare_command("quatlink run --mode siso --seed 42 --out results")
    def run(self, command_options, config):
        """Run a Monte Carlo experiment and write curves, summary and manifest"""
        out = command_options.out
        if command_options.log_file:
            os.makedirs(out, exist_ok=True)
            init_logger('file', os.path.join(out, LOG_FILENAME))
        result = run_experiment(config, command_options.workers)
        manifest = write_outputs(result, out, summarize(result))
        for path in manifest.outputs.values():
            print(path)
        return 0

    @declare_command("quatlink config --config experiment.txt --mu 0.005")
    def config(self, command_options, config):
        """Print the configuration a run would use, as key=value lines"""
        sys.stdout.write(config.output_shell())
        return 0


def parse_args(argv, environ=None):
    """the ExperimentConfig a command line stands for"""
    return QuatLink(environ).parse(argv)[3]


def main():
    return QuatLink().main()
