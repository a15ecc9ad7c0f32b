"""
Test Procedures Service Module

Concrete ``TwoSampleProcedure`` implementations. Each holds the resolved
parameters of one method and delegates the computation to ``core.unitest``
or ``core.multitest``.

Responsibilities:
    - Coerce samples to the shape a method needs (p = 1 matrices become
      univariate samples and vice versa)
    - Apply method defaults from ``settings``
    - Describe the resolved parameters for report echoes

Example:
    >>> procedure = SmoothProcedure(BasisSystem(BasisKind.TRIGONOMETRIC, 4), alpha=0.05)
    >>> report = procedure.run(x, y, RngStream(1))
"""

from typing import Any

from config.settings import settings
from core.exceptions import DimensionMismatchError
from core.interfaces.procedures import TwoSampleProcedure
from core.models.basis import BasisKind, BasisSystem
from core.models.reports import TestReport
from core.models.samples import MultiSample, UniSample
from core.multitest import bf_test, mks_test, ms_test
from core.unitest import bgx_test, cvm_test, ks_test, schwarz_smooth_test, smooth_test
from core.validators import require_alpha, require_count
from utils.optimize import OptimConfig
from utils.random import RngStream


def as_univariate(sample: UniSample | MultiSample) -> UniSample:
    """
    View a sample as univariate.

    Raises:
        DimensionMismatchError: If the sample has more than one column
    """
    if isinstance(sample, UniSample):
        return sample
    if sample.p != 1:
        raise DimensionMismatchError(f"univariate method given a {sample.p}-dimensional sample")
    return sample.column(0)


def as_multivariate(sample: UniSample | MultiSample) -> MultiSample:
    if isinstance(sample, MultiSample):
        return sample
    return MultiSample(sample.values)


class SmoothProcedure(TwoSampleProcedure):
    """Data-driven smooth test with the exact Gaussian-maximum critical value."""

    method = "smooth"

    def __init__(self, basis: BasisSystem, alpha: float = 0.05):
        self.basis = basis
        self.alpha = require_alpha(alpha)

    def run(self, x, y, stream: RngStream) -> TestReport:
        return smooth_test(as_univariate(x), as_univariate(y), self.basis, self.alpha)

    def describe(self) -> dict[str, Any]:
        return {**super().describe(), "basis": self.basis.kind.value, "d": self.basis.d}


class BGXProcedure(SmoothProcedure):
    """Quadratic smooth test with chi-square calibration."""

    method = "bgx"

    def run(self, x, y, stream: RngStream) -> TestReport:
        return bgx_test(as_univariate(x), as_univariate(y), self.basis, self.alpha)


class SchwarzProcedure(TwoSampleProcedure):
    """Smooth test at the truncation chosen by the penalised (Schwarz) rule."""

    method = "schwarz"

    def __init__(self, kind: BasisKind, alpha: float = 0.05, d_max: int | None = None):
        self.kind = BasisKind.parse(kind)
        self.alpha = require_alpha(alpha)
        self.d_max = require_count(settings.SCHWARZ_D_MAX if d_max is None else d_max, "D_max")

    def run(self, x, y, stream: RngStream) -> TestReport:
        return schwarz_smooth_test(
            as_univariate(x), as_univariate(y), self.kind, self.alpha, self.d_max
        )

    def describe(self) -> dict[str, Any]:
        return {**super().describe(), "basis": self.kind.value, "d_max": self.d_max}


class PermutationProcedure(TwoSampleProcedure):
    """KS or CVM statistic calibrated by random permutations."""

    def __init__(self, method: str, alpha: float = 0.05, B: int | None = None):
        self.method = method
        self.alpha = require_alpha(alpha)
        self.B = require_count(settings.PERMUTATIONS if B is None else B, "B")
        self._test = {"ks": ks_test, "cvm": cvm_test}[method]

    def run(self, x, y, stream: RngStream) -> TestReport:
        return self._test(as_univariate(x), as_univariate(y), self.alpha, stream, self.B)

    def describe(self) -> dict[str, Any]:
        return {**super().describe(), "permutations": self.B}


class MultivariateSmoothProcedure(TwoSampleProcedure):
    """Projection-pursuit smooth test with multiplier-bootstrap calibration."""

    method = "ms"
    multivariate = True

    def __init__(
        self,
        basis: BasisSystem,
        alpha: float = 0.05,
        B: int | None = None,
        cfg: OptimConfig | None = None,
        bootstrap_cfg: OptimConfig | None = None,
    ):
        self.basis = basis
        self.alpha = require_alpha(alpha)
        self.B = require_count(settings.BOOTSTRAP_B if B is None else B, "B", 20)
        self.cfg = cfg or OptimConfig.from_settings()
        self.bootstrap_cfg = bootstrap_cfg or self.cfg.with_restarts(settings.BOOTSTRAP_RESTARTS)

    def run(self, x, y, stream: RngStream) -> TestReport:
        return ms_test(
            as_multivariate(x),
            as_multivariate(y),
            self.basis,
            self.alpha,
            self.B,
            self.cfg,
            stream,
            self.bootstrap_cfg,
        )

    def describe(self) -> dict[str, Any]:
        return {
            **super().describe(),
            "basis": self.basis.kind.value,
            "d": self.basis.d,
            "B": self.B,
            "restarts": self.cfg.restarts,
            "bootstrap_restarts": self.bootstrap_cfg.restarts,
        }


class BFProcedure(TwoSampleProcedure):
    """Baringhaus-Franz statistic calibrated by permutations."""

    method = "bf"
    multivariate = True

    def __init__(self, alpha: float = 0.05, directions: int | None = None, B: int | None = None):
        self.alpha = require_alpha(alpha)
        self.directions = require_count(
            settings.BF_DIRECTIONS if directions is None else directions, "M"
        )
        self.B = require_count(settings.PERMUTATIONS if B is None else B, "B")

    def run(self, x, y, stream: RngStream) -> TestReport:
        return bf_test(
            as_multivariate(x), as_multivariate(y), self.alpha, stream, self.directions, self.B
        )

    def describe(self) -> dict[str, Any]:
        return {**super().describe(), "directions": self.directions, "permutations": self.B}


class MKSProcedure(TwoSampleProcedure):
    """Multivariate Kolmogorov-Smirnov statistic calibrated by permutations."""

    method = "mks"
    multivariate = True

    def __init__(
        self, alpha: float = 0.05, cfg: OptimConfig | None = None, B: int | None = None
    ):
        self.alpha = require_alpha(alpha)
        self.cfg = cfg or OptimConfig.from_settings()
        self.B = require_count(settings.PERMUTATIONS if B is None else B, "B")

    def run(self, x, y, stream: RngStream) -> TestReport:
        return mks_test(as_multivariate(x), as_multivariate(y), self.alpha, self.cfg, stream, self.B)

    def describe(self) -> dict[str, Any]:
        return {**super().describe(), "permutations": self.B, "restarts": self.cfg.restarts}
