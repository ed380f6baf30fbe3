#
# quatlink faults
#
# every error raised on purpose by the library is a QuatlinkFault,
# so callers (the cli mostly) can map faultCode onto an exit status
#

from quatlink.util.qlcode import QLCODE


class QuatlinkFault(Exception):

    def __init__(self, faultCode, faultString, extra=None):
        if extra:
            faultString += ": " + str(extra)
        self.faultCode = faultCode
        self.faultString = faultString
        Exception.__init__(self, faultString)

    def __str__(self):
        return self.faultString


class DimensionError(QuatlinkFault):

    def __init__(self, extra=None):
        faultString = "Dimension mismatch"
        QuatlinkFault.__init__(self, QLCODE.DIMENSION, faultString, extra)


class QuaternionDomainError(QuatlinkFault):

    def __init__(self, extra=None):
        faultString = "Argument outside of domain"
        QuatlinkFault.__init__(self, QLCODE.DOMAIN, faultString, extra)


class SingularMatrix(QuatlinkFault):

    def __init__(self, pivot=None, extra=None):
        faultString = "Singular matrix"
        if pivot is not None:
            faultString += " (pivot column %d)" % pivot
        self.pivot = pivot
        QuatlinkFault.__init__(self, QLCODE.SINGULAR, faultString, extra)


class DivergenceError(QuatlinkFault):
    """
    raised by the adaptive filters when a weight goes non-finite
    or the error blows up; the trace gathered so far is kept
    so that the harness can report on it
    """

    def __init__(self, iteration, error_norm_sq, trace=None, extra=None):
        self.iteration = iteration
        self.error_norm_sq = error_norm_sq
        self.trace = trace
        faultString = "Adaptation diverged at iteration %d (|e|^2=%g)" % (
            iteration, error_norm_sq)
        QuatlinkFault.__init__(self, QLCODE.DIVERGED, faultString, extra)


class InsufficientData(QuatlinkFault):

    def __init__(self, extra=None):
        faultString = "Not enough samples"
        QuatlinkFault.__init__(self, QLCODE.NODATA, faultString, extra)


class ExperimentFailed(QuatlinkFault):

    def __init__(self, runs_diverged, extra=None):
        self.runs_diverged = runs_diverged
        faultString = "Experiment failed, all %d runs diverged" % runs_diverged
        QuatlinkFault.__init__(self, QLCODE.FAILED, faultString, extra)


class InvalidConfig(QuatlinkFault):

    def __init__(self, name=None, extra=None):
        if name is not None:
            faultString = "Invalid %s value" % name
        else:
            faultString = "Invalid configuration"
        self.name = name
        QuatlinkFault.__init__(self, QLCODE.CONFIG, faultString, extra)


class ConfigFileError(QuatlinkFault):

    def __init__(self, filename, extra=None):
        self.filename = filename
        faultString = "Cannot read %s" % filename
        QuatlinkFault.__init__(self, QLCODE.IOERROR, faultString, extra)
