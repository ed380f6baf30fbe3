#!/usr/bin/env python3

# pylint: disable=c0111, c0103

"""
Plain-text configuration store

Two on-disk formats are accepted:

* an ini file with an [experiment] section, as written by ConfigParser

* a flat shell-like file, one key=value per line, which is also what
  the summary and manifest files echo; '#' lines are comments

Values are kept as strings; typing is the caller's business.
"""

import os
from io import StringIO
import configparser

from quatlink.util.faults import ConfigFileError
from quatlink.util.qlogging import logger

SECTION = 'experiment'


class Config:

    def __init__(self, config_file=None, known=None):
        self._files = []
        # when known is set, load_shell only accepts these names
        self.known = set(known) if known is not None else None
        self.config = configparser.ConfigParser(interpolation=None)
        self.config.optionxform = str
        self.config.add_section(SECTION)
        self.filename = config_file
        if config_file:
            self.load(config_file)

    def load(self, filename):
        if not os.path.isfile(filename):
            raise ConfigFileError(filename, "no such file")
        if Config.is_ini(filename):
            try:
                self.config.read(filename, encoding='utf-8')
            except configparser.Error as e:
                raise ConfigFileError(filename, e)
        else:
            self.load_shell(filename)
        self._files.append(filename)

    def load_shell(self, filename):
        try:
            with open(filename, 'r', encoding='utf-8') as f:
                lines = f.readlines()
        except OSError as e:
            raise ConfigFileError(filename, e)
        for lineno, line in enumerate(lines, 1):
            line = line.strip()
            if not line or line.startswith('#'):
                continue
            if '=' not in line:
                raise ConfigFileError(
                    filename, "line %d is not key=value: %r" % (lineno, line))
            option, value = line.split('=', 1)
            option = option.strip()
            value = value.strip().replace('"', '').replace("'", "")
            if self.known is not None and option not in self.known:
                logger.warning("%s:%d: ignoring unknown key %s"
                               % (filename, lineno, option))
                continue
            self.set(option, value)

    def set(self, name, value):
        self.config.set(SECTION, name, str(value))

    def get(self, name, default=None):
        return self.config.get(SECTION, name, fallback=default)

    def has(self, name):
        return self.config.has_option(SECTION, name)

    def items(self):
        return self.config.items(SECTION)

    @staticmethod
    def is_ini(config_file):
        try:
            c = configparser.ConfigParser(interpolation=None)
            c.read(config_file, encoding='utf-8')
            return c.has_section(SECTION)
        except configparser.MissingSectionHeaderError:
            return False

    def output_shell(self):
        """
        Return variables as flat key=value lines
        """
        buf = StringIO()
        for (name, value) in self.items():
            buf.write("%s=%s\n" % (name, value))
        return buf.getvalue()

    def write(self, filename=None):
        if not filename:
            filename = self.filename
        with open(filename, 'w', encoding='utf-8', newline='\n') as configfile:
            configfile.write(self.output_shell())
