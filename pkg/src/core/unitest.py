"""
Univariate Two-Sample Tests Module

The data-driven smooth test and its classical baselines.

Responsibilities:
    - Smooth statistic Ψ̂(d) = √(nm/(n+m))·max_k |m⁻¹Σ_j ψ_k(V̂_j)|, V̂_j = F_n(Y_j)
    - Exact calibration by the Gaussian maximum: P(|G|_∞ ≤ t) = (2Φ(t) − 1)^d
    - Kolmogorov-Smirnov and Cramér-von Mises statistics with permutation p-values
    - The quadratic (BGX) statistic m·Σ_k ψ̂_k² with chi-square calibration
    - Data-driven truncation by the penalised (Schwarz) rule

Conventions:
    The X sample is the larger one. When m > n the samples are exchanged
    (the statistic built on G_m instead of F_n) and reports set ``swapped``.

Example:
    >>> basis = BasisSystem(BasisKind.TRIGONOMETRIC, d=1)
    >>> round(smooth_statistic(UniSample([0.0]), UniSample([1.0]), basis), 12)
    1.0
"""

import itertools
import math
from typing import Callable, TypeVar

import numpy as np
from numpy.typing import ArrayLike, NDArray

from config.logging import logger
from config.settings import settings
from core.basis import basis_table
from core.empirical import pit_values, tie_warning
from core.exceptions import DomainError
from core.models.basis import BasisKind, BasisSystem
from core.models.reports import TestReport
from core.models.samples import MultiSample, UniSample
from core.validators import require_alpha, require_count, require_truncation
from utils.random import RngStream
from utils.special import chi2_quantile, normal_cdf, normal_quantile

Sample = TypeVar("Sample", UniSample, MultiSample)

# Relative slack when comparing permuted statistics with the observed one.
TIE_TOLERANCE = 1e-12


def scale_factor(n: int, m: int) -> float:
    """√(nm/(n+m))."""
    return math.sqrt(n * m / (n + m))


def ordered(x: UniSample, y: UniSample) -> tuple[UniSample, UniSample, bool]:
    """Return (larger, smaller, swapped) so that the second sample has m ≤ n."""
    if y.n > x.n:
        logger.debug("m=%d > n=%d: exchanging sample roles", y.n, x.n)
        return y, x, True
    return x, y, False


def truncation_warning(d: int, n: int, m: int) -> str | None:
    if d > min(n, m):
        message = f"d={d} exceeds min(n, m)={min(n, m)}"
        logger.warning(message)
        return message
    return None


def smooth_components(x: UniSample, y: UniSample, basis: BasisSystem) -> NDArray[np.float64]:
    """
    ψ̂_k = m⁻¹Σ_j ψ_k(V̂_j) for k = 1..d, after ordering the samples.
    """
    x, y, _ = ordered(x, y)
    return basis_table(basis.kind, basis.d, pit_values(x, y)).mean(axis=0)


def smooth_statistic(x: UniSample, y: UniSample, basis: BasisSystem) -> float:
    """
    Data-driven smooth statistic Ψ̂(d).

    Args:
        x, y: Samples; exchanged internally when y is the larger one
        basis: Orthonormal system and truncation d

    Returns:
        float: Nonnegative statistic
    """
    components = smooth_components(x, y, basis)
    truncation_warning(basis.d, x.n, y.n)
    return scale_factor(x.n, y.n) * float(np.max(np.abs(components)))


def oracle_statistic(
    y: UniSample, cdf: Callable[[NDArray[np.float64]], NDArray[np.float64]], basis: BasisSystem
) -> float:
    """
    Oracle statistic Ψ(d) = max_k |m^{−1/2}Σ_j ψ_k(F(Y_j))| for a known F.

    Raises:
        DomainError: If ``cdf`` returns values outside [0, 1]
    """
    v = np.asarray(cdf(y.values), dtype=float)
    if not np.all((v >= 0.0) & (v <= 1.0)):
        raise DomainError("cdf must map into [0, 1]")
    sums = basis_table(basis.kind, basis.d, v).sum(axis=0)
    return float(np.max(np.abs(sums)) / math.sqrt(y.n))


def max_abs_gaussian_cdf(t: ArrayLike, d: int) -> float | NDArray[np.float64]:
    """
    P(|G|_∞ ≤ t) = (2Φ(t) − 1)^d for G ~ N(0, I_d).

    Raises:
        DomainError: If t < 0
    """
    d = require_truncation(d)
    values = np.asarray(t, dtype=float)
    if np.any(values < 0):
        raise DomainError("t must be ≥ 0")
    result = (2.0 * np.asarray(normal_cdf(values)) - 1.0) ** d
    return float(result) if result.ndim == 0 else result


def smooth_critical_value(alpha: float, d: int) -> float:
    """
    c_α(d) = Φ⁻¹(1/2 + (1 − α)^{1/d}/2), the (1 − α)-quantile of |G|_∞.

    Evaluated as −Φ⁻¹(q/2) with q = 1 − (1 − α)^{1/d} formed in log space,
    which keeps full relative precision for tiny α.

    Example:
        >>> round(smooth_critical_value(0.05, 1), 6)
        1.959964
    """
    alpha = require_alpha(alpha)
    d = require_truncation(d)
    tail = -math.expm1(math.log1p(-alpha) / d)
    return -float(normal_quantile(tail / 2.0))


def _common_warnings(x: UniSample, y: UniSample, d: int | None = None) -> list[str]:
    found = [tie_warning(x, y)]
    if d is not None:
        found.append(truncation_warning(d, x.n, y.n))
    return [w for w in found if w]


def smooth_test(x: UniSample, y: UniSample, basis: BasisSystem, alpha: float) -> TestReport:
    """
    Smooth test: reject iff Ψ̂(d) ≥ c_α(d).

    Returns:
        TestReport: statistic, critical value and decision
    """
    alpha = require_alpha(alpha)
    statistic = scale_factor(x.n, y.n) * float(np.max(np.abs(smooth_components(x, y, basis))))
    critical = smooth_critical_value(alpha, basis.d)
    return TestReport(
        method="smooth",
        statistic=statistic,
        critical_value=critical,
        reject=statistic >= critical,
        alpha=alpha,
        n=x.n,
        m=y.n,
        d=basis.d,
        basis=basis.kind.value,
        swapped=y.n > x.n,
        warnings=_common_warnings(x, y, basis.d),
    )


def ks_statistic(x: UniSample, y: UniSample) -> float:
    """
    √(nm/(n+m))·sup_t |F_n(t) − G_m(t)|, the supremum taken over pooled points.

    Example:
        >>> ks_statistic(UniSample([1, 2]), UniSample([3, 4]))
        1.0
    """
    pooled = np.concatenate([x.sorted_values, y.sorted_values])
    f = np.searchsorted(x.sorted_values, pooled, side="right") / x.n
    g = np.searchsorted(y.sorted_values, pooled, side="right") / y.n
    return scale_factor(x.n, y.n) * float(np.max(np.abs(f - g)))


def cvm_statistic(x: UniSample, y: UniSample) -> float:
    """
    (nm/(n+m))·Σ_t {F_n(t) − G_m(t)}²·ΔH_{n,m}(t) over distinct pooled points t.

    ΔH_{n,m}(t) is the jump of the pooled EDF at t (multiplicity / (n + m)).
    """
    points, multiplicity = np.unique(
        np.concatenate([x.values, y.values]), return_counts=True
    )
    f = np.searchsorted(x.sorted_values, points, side="right") / x.n
    g = np.searchsorted(y.sorted_values, points, side="right") / y.n
    jumps = multiplicity / (x.n + y.n)
    return x.n * y.n / (x.n + y.n) * float(np.sum((f - g) ** 2 * jumps))


def _pooled(x: Sample, y: Sample) -> NDArray[np.float64]:
    if isinstance(x, MultiSample):
        return np.concatenate([x.rows, y.rows], axis=0)
    return np.concatenate([x.values, y.values])


def permutation_pvalue(
    statistic: Callable[[Sample, Sample], float],
    x: Sample,
    y: Sample,
    B: int,
    stream: RngStream | None = None,
    exhaustive: bool = False,
) -> float:
    """
    Permutation p-value (1 + #{T* ≥ T}) / (B + 1).

    Each replicate assigns ``m`` of the pooled observations (drawn without
    replacement) to the Y role and the rest to X. With ``exhaustive=True``
    every one of the C(n+m, m) splits is used once and ``B`` is ignored.

    Args:
        statistic: Two-sample statistic, large values against the null
        x, y: Samples (univariate or multivariate, same type)
        B: Number of random permutations (≥ 1)
        stream: Random stream, required unless ``exhaustive``
        exhaustive: Enumerate all splits instead of sampling

    Returns:
        float: p-value in (0, 1]
    """
    observed = statistic(x, y)
    threshold = observed - TIE_TOLERANCE * max(1.0, abs(observed))
    pooled = _pooled(x, y)
    total, m = len(pooled), y.n
    kind = type(x)

    def permuted(y_index: NDArray[np.int64]) -> float:
        mask = np.zeros(total, dtype=bool)
        mask[y_index] = True
        return statistic(kind(pooled[~mask]), kind(pooled[mask]))

    if exhaustive:
        splits = itertools.combinations(range(total), m)
        values = [permuted(np.fromiter(s, dtype=np.int64, count=m)) for s in splits]
    else:
        B = require_count(B, "B")
        if stream is None:
            raise DomainError("a random stream is required for sampled permutations")
        generator = stream.generator
        values = [permuted(generator.permutation(total)[:m]) for _ in range(B)]
    exceed = sum(1 for v in values if v >= threshold)
    return (1 + exceed) / (len(values) + 1)


def _permutation_test(
    method: str,
    statistic: Callable[[UniSample, UniSample], float],
    x: UniSample,
    y: UniSample,
    alpha: float,
    B: int | None,
    stream: RngStream,
) -> TestReport:
    alpha = require_alpha(alpha)
    B = settings.PERMUTATIONS if B is None else require_count(B, "B")
    value = statistic(x, y)
    p_value = permutation_pvalue(statistic, x, y, B, stream)
    return TestReport(
        method=method,
        statistic=value,
        p_value=p_value,
        reject=p_value <= alpha,
        alpha=alpha,
        n=x.n,
        m=y.n,
        seed=stream.seed,
        stream_id=stream.stream_id,
        warnings=_common_warnings(x, y),
        details={"permutations": B},
    )


def ks_test(
    x: UniSample, y: UniSample, alpha: float, stream: RngStream, B: int | None = None
) -> TestReport:
    """Kolmogorov-Smirnov test calibrated by ``B`` permutations."""
    return _permutation_test("ks", ks_statistic, x, y, alpha, B, stream)


def cvm_test(
    x: UniSample, y: UniSample, alpha: float, stream: RngStream, B: int | None = None
) -> TestReport:
    """Cramér-von Mises test calibrated by ``B`` permutations."""
    return _permutation_test("cvm", cvm_statistic, x, y, alpha, B, stream)


def bgx_statistic(x: UniSample, y: UniSample, basis: BasisSystem) -> float:
    """Quadratic statistic m·Σ_k ψ̂_k² (m the smaller sample size)."""
    components = smooth_components(x, y, basis)
    return min(x.n, y.n) * float(np.sum(components**2))


def bgx_test(
    x: UniSample, y: UniSample, basis: BasisSystem | None = None, alpha: float = 0.05
) -> TestReport:
    """
    Quadratic smooth test: reject iff m·ψ̂ᵀψ̂ ≥ χ²_d(1 − α).

    The default basis is the trigonometric system with d = 4.
    """
    alpha = require_alpha(alpha)
    basis = basis or BasisSystem(BasisKind.TRIGONOMETRIC, 4)
    statistic = bgx_statistic(x, y, basis)
    critical = chi2_quantile(1.0 - alpha, basis.d)
    return TestReport(
        method="bgx",
        statistic=statistic,
        critical_value=critical,
        reject=statistic >= critical,
        alpha=alpha,
        n=x.n,
        m=y.n,
        d=basis.d,
        basis=basis.kind.value,
        swapped=y.n > x.n,
        warnings=_common_warnings(x, y, basis.d),
    )


def schwarz_criterion(x: UniSample, y: UniSample, kind: BasisKind, d_max: int) -> NDArray[np.float64]:
    """Penalised values T(d) − d·log(n + m) for d = 1..d_max."""
    d_max = require_count(d_max, "D_max")
    components = smooth_components(x, y, BasisSystem(kind, d_max))
    quadratic = min(x.n, y.n) * np.cumsum(components**2)
    penalty = np.arange(1, d_max + 1) * math.log(x.n + y.n)
    return quadratic - penalty


def select_d_schwarz(
    x: UniSample, y: UniSample, kind: BasisKind | str, d_max: int | None = None
) -> int:
    """
    d̂ = argmax_{1 ≤ d ≤ D_max} {T(d) − d·log(n + m)}, T the quadratic statistic.

    Ties go to the smaller d.
    """
    d_max = settings.SCHWARZ_D_MAX if d_max is None else d_max
    criterion = schwarz_criterion(x, y, BasisKind.parse(kind), d_max)
    return int(np.argmax(criterion)) + 1


def schwarz_smooth_test(
    x: UniSample,
    y: UniSample,
    kind: BasisKind | str,
    alpha: float,
    d_max: int | None = None,
) -> TestReport:
    """Smooth test at the Schwarz-selected truncation."""
    d_hat = select_d_schwarz(x, y, kind, d_max)
    report = smooth_test(x, y, BasisSystem(BasisKind.parse(kind), d_hat), alpha)
    report.method = "schwarz"
    report.details["selected_d"] = d_hat
    report.details["d_max"] = settings.SCHWARZ_D_MAX if d_max is None else d_max
    return report
