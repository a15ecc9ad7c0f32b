"""
Argument validators shared by the numerical modules.

Each helper returns the validated value (converted to the canonical Python
type) or raises ``DomainError`` with a message naming the parameter.
"""

from core.exceptions import DomainError


def require_probability(value: float, name: str = "p") -> float:
    """Require 0 < value < 1."""
    value = float(value)
    if not (0.0 < value < 1.0):
        raise DomainError(f"{name} must lie in (0, 1), got {value}")
    return value


def require_alpha(alpha: float) -> float:
    return require_probability(alpha, "alpha")


def require_count(value: int, name: str, minimum: int = 1) -> int:
    """Require an integer ≥ minimum."""
    if isinstance(value, bool) or int(value) != value:
        raise DomainError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if value < minimum:
        raise DomainError(f"{name} must be ≥ {minimum}")
    return value


def require_truncation(d: int) -> int:
    return require_count(d, "d", 1)


def require_in_range(value: float, low: float, high: float, name: str) -> float:
    value = float(value)
    if not (low <= value <= high):
        raise DomainError(f"{name} must lie in [{low}, {high}], got {value}")
    return value
