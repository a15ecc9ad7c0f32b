"""
Basis System Domain Model

Identifies an orthonormal family {ψ_1, …, ψ_d} on [0, 1]: its kind and its
truncation count. Evaluation lives in ``core.basis``; this is pure data.

Example:
    >>> basis = BasisSystem(BasisKind.TRIGONOMETRIC, d=4)
    >>> basis.label
    'trig(d=4)'
"""

from dataclasses import dataclass
from enum import Enum

from core.exceptions import DomainError


class BasisKind(str, Enum):
    """Supported orthonormal systems."""

    TRIGONOMETRIC = "trig"
    LEGENDRE = "legendre"

    @classmethod
    def parse(cls, text: "str | BasisKind") -> "BasisKind":
        """Accept the canonical names and the common aliases."""
        if isinstance(text, BasisKind):
            return text
        aliases = {
            "trig": cls.TRIGONOMETRIC,
            "trigonometric": cls.TRIGONOMETRIC,
            "cosine": cls.TRIGONOMETRIC,
            "t": cls.TRIGONOMETRIC,
            "legendre": cls.LEGENDRE,
            "lp": cls.LEGENDRE,
        }
        try:
            return aliases[str(text).strip().lower()]
        except KeyError:
            raise DomainError(f"unknown basis {text!r}; expected 'trig' or 'legendre'") from None


@dataclass(frozen=True)
class BasisSystem:
    """
    Orthonormal system truncated at ``d`` functions.

    ψ_0 ≡ 1 is implicit and never part of an evaluated vector.

    Attributes:
        kind: Trigonometric (√2·cos(πkz)) or normalized Legendre
        d: Truncation count, ≥ 1
    """

    kind: BasisKind
    d: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", BasisKind.parse(self.kind))
        if isinstance(self.d, bool) or int(self.d) != self.d:
            raise DomainError(f"d must be an integer, got {self.d!r}")
        if self.d < 1:
            raise DomainError("d must be ≥ 1")
        object.__setattr__(self, "d", int(self.d))

    def truncated(self, d: int) -> "BasisSystem":
        """Same kind with a different truncation."""
        return BasisSystem(self.kind, d)

    @property
    def label(self) -> str:
        return f"{self.kind.value}(d={self.d})"
