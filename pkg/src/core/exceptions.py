"""
Domain Exceptions Module

All errors raised by the toolkit derive from ``SmoothTestError``. Each class
carries the process exit code the command-line surface reports for it, so the
exit-code contract lives next to the error definitions:

    0  success
    2  input errors (malformed CSV, bad config grammar, unknown keys)
    3  domain errors (invalid parameters, dimension mismatches)
    4  internal invariant violations

Example:
    >>> from core.exceptions import DomainError
    >>> raise DomainError("d must be ≥ 1")
"""


class SmoothTestError(Exception):
    """Base class for all toolkit errors."""

    exit_code: int = 4


class InputError(SmoothTestError):
    """Malformed external input: CSV files, config files, unknown keys."""

    exit_code = 2

    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        location = ""
        if source is not None:
            location = f"{source}"
            if line is not None:
                location += f":{line}"
            location += ": "
        elif line is not None:
            location = f"line {line}: "
        super().__init__(f"{location}{message}")


class DomainError(SmoothTestError, ValueError):
    """A parameter lies outside the domain of the requested operation."""

    exit_code = 3


class DimensionMismatchError(DomainError):
    """Samples, directions or multiplier vectors disagree in dimension."""


class InvariantViolation(SmoothTestError):
    """An internal contract was broken; indicates a bug or numerical failure."""

    exit_code = 4


class EnvelopeError(InvariantViolation):
    """A rejection sampler met a density value above its envelope."""


class OptimizationError(InvariantViolation):
    """The simplex search met a non-finite objective value."""
