"""
Procedure Interfaces Module

Abstract contract every two-sample test procedure implements, so the
experiment runner and the command-line surface can drive any method the
same way.

Key Principle:
    Core defines the contract, ``core.services.procedures`` implements it,
    and ``config.dependencies`` is the only place choosing an implementation
    for a method name.

Example:
    >>> class AlwaysAccept(TwoSampleProcedure):
    ...     method = "accept"
    ...     def run(self, x, y, stream):
    ...         return TestReport("accept", 0.0, False, 0.05, x.n, y.n)
"""

from abc import ABC, abstractmethod
from typing import Any

from core.models.reports import TestReport
from core.models.samples import MultiSample, UniSample
from utils.random import RngStream


class TwoSampleProcedure(ABC):
    """
    A calibrated two-sample test at a fixed level.

    Attributes:
        method: Label written into reports
        multivariate: True when the procedure accepts p > 1 samples
        alpha: Nominal level
    """

    method: str = ""
    multivariate: bool = False
    alpha: float = 0.05

    @abstractmethod
    def run(
        self, x: UniSample | MultiSample, y: UniSample | MultiSample, stream: RngStream
    ) -> TestReport:
        """
        Test H0: F = G on the samples.

        Args:
            x: Sample from F
            y: Sample from G
            stream: Random stream for calibration (ignored by exact procedures)

        Returns:
            TestReport: Statistic, calibration and decision
        """

    def describe(self) -> dict[str, Any]:
        """Resolved parameters, echoed into reports and manifests."""
        return {"method": self.method, "alpha": self.alpha}
