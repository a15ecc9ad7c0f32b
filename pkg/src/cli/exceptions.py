"""
CLI Exception Handling Module

Maps exceptions to the process exit-code contract and formats the one-line
message written to stderr.

Exit codes:
    0  success
    2  input error (malformed CSV or config, unknown key, bad flag value)
    3  domain error (parameter outside its domain, dimension mismatch)
    4  internal invariant violation or unexpected failure

Example:
    >>> exit_code_for(InputError("bad row", 3, "x.csv"))
    2
"""

from pydantic import ValidationError

from core.exceptions import DomainError, InputError, SmoothTestError

EXIT_OK = 0
EXIT_INPUT = InputError.exit_code
EXIT_DOMAIN = DomainError.exit_code
EXIT_INTERNAL = SmoothTestError.exit_code


def exit_code_for(exc: BaseException) -> int:
    """Exit code reported for ``exc``."""
    if isinstance(exc, SmoothTestError):
        return exc.exit_code
    if isinstance(exc, ValidationError):
        return EXIT_INPUT
    return EXIT_INTERNAL


def error_message(exc: BaseException) -> str:
    """``error: <message>`` line for stderr."""
    if isinstance(exc, SmoothTestError):
        return f"error: {exc}"
    if isinstance(exc, ValidationError):
        first = exc.errors()[0]
        where = ".".join(str(part) for part in first["loc"])
        return f"error: {where}: {first['msg']}" if where else f"error: {first['msg']}"
    return f"internal error: {type(exc).__name__}: {exc}"
