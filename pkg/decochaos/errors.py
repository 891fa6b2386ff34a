# -*- coding: utf-8 -*-
"""
"""
from __future__ import unicode_literals
from __future__ import print_function

from decochaos.constants import EXIT_CONFIG, EXIT_NUMERICAL, EXIT_FAILURE


class BaseError(Exception):
    pass


class ValidationError(BaseError):
    """ The caller failed to pass the restrictions imposed by callee. """
    pass


class ConfigurationError(ValidationError):
    """ A run configuration, grid or preset cannot be accepted. """
    def __init__(self, message, line=None, *args, **kwargs):
        if line is not None:
            message = 'line %d: %s' % (line, message)
        super(ConfigurationError, self).__init__(message, *args, **kwargs)
        self.line = line


class GridMismatchError(ValidationError):
    """ Two objects that must share a grid (or a time base) do not. """
    pass


class StateError(ValidationError):
    """ A state cannot be built or is not normalized. """
    pass


class SnapshotFormatError(ValidationError):
    """ A snapshot file is corrupted or its checksum does not match. """
    pass


class NumericalError(BaseError):
    """
    A run cannot continue.

    Attributes:
        step (int):
            The index of the step where the problem was detected.
        time (float):
            Simulation time at that step.
        partial:
            The output gathered before the failure (set by the runners).
    """
    def __init__(self, message, step=None, time=None, *args, **kwargs):
        super(NumericalError, self).__init__(message, *args, **kwargs)
        self.step = step
        self.time = time
        self.partial = None


class NonFiniteError(NumericalError):
    """ NaN or infinity showed up in the state. """
    pass


class BoundaryLeakError(NumericalError):
    """ Too much mass reached the edges of the periodic domain. """
    pass


class AnalysisError(BaseError):
    """ An observable cannot be formed from the given data. """
    pass


class OutputError(BaseError):
    """ An output file or directory cannot be written. """
    pass


class FarmError(BaseError):
    """ The job farm cannot deliver results. """
    pass


def exit_code_for(error):
    """ Process exit code that reports `error`. """
    if isinstance(error, NumericalError):
        return EXIT_NUMERICAL
    if isinstance(error, ValidationError):
        return EXIT_CONFIG
    return EXIT_FAILURE
