#!/usr/bin/env python3

"""
A reroutable logger that can handle deep tracebacks

Requirements:

* all our code just does:

    from quatlink.util.qlogging import logger
    ...
    logger.info('blabla')

* depending on whether the code runs (a) from the quatlink CLI,
  (b) inside a library user's script or the test suite, or
  (c) as a batch run that keeps its own log next to its outputs,
  we want these messages to be directed in different places

* Monte Carlo runs happen in worker threads, and a failing run
  should leave a complete stack behind

Implementation:

* we use a single unique logger name 'quatlink' (wrt getLogger()),
  and provide `init_logger()` that accepts for its `context` parameter
  one of `console`, `cli` or `file`

* we install our own subclass of loggers with logging.setLoggerClass(),
  so we can add a customized `log_exc()` method

"""

# pylint: disable=c0111, c0103, w1201

import traceback
import logging
import logging.config

# so that users of this module don't need to import logging
from logging import (CRITICAL, ERROR, WARNING, INFO, DEBUG)


class QuatlinkLogger(logging.getLoggerClass()):

    def debugEnabled(self):
        return self.getEffectiveLevel() == logging.DEBUG

    # pair with an option like
    # parser.add_option("-v", "--verbose", action="count",
    #                   dest="verbose", default=0)
    def setLevelFromOptVerbose(self, verbose):
        if verbose == 0:
            self.setLevel(logging.WARNING)
        elif verbose == 1:
            self.setLevel(logging.INFO)
        elif verbose >= 2:
            self.setLevel(logging.DEBUG)

    def log_exc(self, message, limit=100):
        """
        standard logger has an exception() method but this will
        dump the stack only between the frames
        (1) that does `raise` and (2) the one that does `except`

        log_exc() has a limit argument that allows to see deeper than that
        """
        self.error("%s BEG TRACEBACK" % message + "\n" +
                   traceback.format_exc(limit=limit).strip("\n"))
        self.error("%s END TRACEBACK" % message)


logging.setLoggerClass(QuatlinkLogger)


# 'handlers' gets filled with the one entry the context needs
def logging_config(context, filename=None):
    if context == 'console':
        handlername = 'stderr'
        level = 'INFO'
    elif context == 'cli':
        # the cli lowers or raises this from -v
        handlername = 'stderr'
        level = 'DEBUG'
    elif context == 'file':
        if not filename:
            raise ValueError("logging context 'file' needs a filename")
        handlername = 'file'
        level = 'DEBUG'
    else:
        raise ValueError("Cannot configure logging for context %r" % context)

    config = {
        'version': 1,
        # IMPORTANT: we may be imported by something else, so:
        'disable_existing_loggers': False,
        'formatters': {
            'standard': {
                'datefmt': '%m-%d %H:%M:%S',
                'format': ('%(asctime)s %(levelname)s '
                           '%(filename)s:%(lineno)d %(message)s'),
            },
        },
        'handlers': {
        },
        'loggers': {
            'quatlink': {
                'handlers': [handlername],
                'level': level,
                'propagate': False,
            },
        },
    }
    if handlername == 'stderr':
        config['handlers']['stderr'] = {
            'level': level,
            'formatter': 'standard',
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
        }
    else:
        config['handlers']['file'] = {
            'filename': filename,
            'level': level,
            'formatter': 'standard',
            'class': 'logging.FileHandler',
            'mode': 'w',
            'encoding': 'utf-8',
        }
    return config


logger = logging.getLogger('quatlink')


def init_logger(context, filename=None):
    logging.config.dictConfig(logging_config(context, filename))


# library users and the test suite get console output
# unless they configure something else
init_logger('console')
