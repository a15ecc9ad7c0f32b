"""
Result Domain Models

Plain result records returned by the test procedures and the sphere search.
Invariants are checked on construction; a violation is a bug, reported as
``InvariantViolation``.
"""

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from core.exceptions import InvariantViolation
from core.models.samples import Direction


@dataclass
class TestReport:
    """
    Outcome of one two-sample test.

    Attributes:
        method: Procedure label (``smooth``, ``ks``, ``cvm``, ``bgx``, ``ms``, ...)
        statistic: Observed statistic
        reject: Decision at level ``alpha``
        alpha: Nominal level
        n, m: Sample sizes as passed by the caller
        critical_value: Present for critical-value calibrated tests
        p_value: Present for p-value calibrated tests
        d: Truncation, when a basis is involved
        basis: Basis kind label, when a basis is involved
        seed, stream_id: Random stream used for calibration, if any
        swapped: True when the samples were exchanged so that m ≤ n
        warnings: Non-fatal diagnostics (ties, d > min(n, m), ...)
        details: Method-specific extras (best direction, selected d, ...)
    """

    __test__ = False

    method: str
    statistic: float
    reject: bool
    alpha: float
    n: int
    m: int
    critical_value: float | None = None
    p_value: float | None = None
    d: int | None = None
    basis: str | None = None
    seed: int | None = None
    stream_id: int | None = None
    swapped: bool = False
    warnings: list[str] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.statistic = float(self.statistic)
        self.reject = bool(self.reject)
        if self.critical_value is not None:
            self.critical_value = float(self.critical_value)
            if self.reject != (self.statistic >= self.critical_value):
                raise InvariantViolation("reject must equal statistic ≥ critical_value")
        if self.p_value is not None:
            self.p_value = float(self.p_value)
            if not 0.0 <= self.p_value <= 1.0:
                raise InvariantViolation(f"p_value {self.p_value} outside [0, 1]")
            if self.reject != (self.p_value <= self.alpha):
                raise InvariantViolation("reject must equal p_value ≤ alpha")


@dataclass(frozen=True)
class SphereSearchResult:
    """
    Outcome of a multi-start maximisation over S^{p−1}.

    Attributes:
        best_direction: Maximising direction
        best_value: Objective at ``best_direction`` (max of ``restart_values``)
        restart_values: Best value reached from each start
        evaluations: Total objective evaluations
    """

    best_direction: Direction
    best_value: float
    restart_values: tuple[float, ...]
    evaluations: int

    def __post_init__(self) -> None:
        if self.restart_values and self.best_value != max(self.restart_values):
            raise InvariantViolation("best_value must equal max(restart_values)")


@dataclass(frozen=True)
class BootstrapResult:
    """
    Multiplier-bootstrap calibration.

    ``critical_value`` is the ⌈(1−alpha)·B⌉-th smallest replicate value.
    """

    critical_value: float
    replicate_values: tuple[float, ...]
    B: int
    alpha: float

    def __post_init__(self) -> None:
        if len(self.replicate_values) != self.B:
            raise InvariantViolation("replicate_values must hold B values")
        if any(v < 0 for v in self.replicate_values):
            raise InvariantViolation("multiplier statistics must be nonnegative")

    @property
    def values(self) -> np.ndarray:
        return np.asarray(self.replicate_values, dtype=float)
