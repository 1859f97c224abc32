"""Exception hierarchy.

Everything raised on purpose derives from :class:`FatigueError`. Validation
problems (bad input data, bad configuration) are also ``ValueError``; file
problems are also ``OSError``. The CLI maps the two groups to exit codes 1 and 2.
"""

from __future__ import annotations


class FatigueError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(FatigueError, ValueError):
    """Input data or configuration violates a documented precondition."""


class IoFailure(FatigueError, OSError):
    """A file could not be read or written."""


class WindowTooLong(ValidationError):
    pass


class CountOutOfRange(ValidationError):
    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        if line is not None:
            message = f"{path or '<input>'}:{line}: {message}"
        super().__init__(message)


class RectifiedInputError(ValidationError):
    """Spectral or wavelet analysis was requested on full-wave rectified data."""


class EmptySpectrum(ValidationError):
    pass


class DegenerateSpectrum(ValidationError):
    pass


class MaxLevelExceeded(ValidationError):
    pass


class NonPositiveResistor(ValidationError):
    pass


class CutoffOutOfRange(ValidationError):
    pass


class InvalidProfile(ValidationError):
    pass


class InvalidConfig(ValidationError):
    pass


class SeriesTooShort(ValidationError):
    pass


class ZeroBaseline(ValidationError):
    pass


class IncomparableReports(ValidationError):
    pass


class TrialFormatError(ValidationError):
    """A trial CSV is malformed. Carries the offending path and 1-based line."""

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        where = path or "<input>"
        if line is not None:
            where = f"{where}:{line}"
        super().__init__(f"{where}: {message}")


class MalformedHeader(TrialFormatError):
    pass


class NonMonotoneTimestamps(TrialFormatError):
    pass


class TruncatedRow(TrialFormatError):
    pass
