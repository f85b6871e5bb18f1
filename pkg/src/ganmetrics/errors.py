"""Exception hierarchy and the CLI exit-code mapping.

Every error raised by this package maps to exactly one exit code; the CLI
translates exceptions to process status via the ``exit_code`` attribute.
"""

from enum import IntEnum


class ExitStatus(IntEnum):
    OK = 0
    USAGE = 1
    INPUT = 2
    NUMERICAL = 3
    DISCREPANCY = 4


class GanMetricsError(Exception):
    """Base class for package errors."""

    exit_code = ExitStatus.USAGE


class InputError(GanMetricsError):
    """Malformed or invalid input data: files, shapes, non-finite values."""

    exit_code = ExitStatus.INPUT


class DegenerateInputError(InputError):
    """Input too small to carry the requested statistic (e.g. one-row covariance)."""


class InsufficientSamplesError(InputError):
    """More samples requested than are available; never silently reuse rows."""


class NpyFormatError(InputError):
    """Array file violates the NPY container contract."""


class NumericalError(GanMetricsError):
    """A numerical routine produced non-finite or impossible results."""

    exit_code = ExitStatus.NUMERICAL


class RegistryError(GanMetricsError):
    """Run-directory state is unusable (corrupt files, held lock, step regression)."""

    exit_code = ExitStatus.DISCREPANCY


class DiscrepancyError(RegistryError):
    """Offered hyperparameters disagree with the stored snapshot."""
