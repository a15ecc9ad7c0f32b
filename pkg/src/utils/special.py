"""
Special functions for calibration.

Thin, validated wrappers over ``scipy.special``: the standard normal CDF and
quantile used by the exact Gaussian-maximum calibration, and the chi-square
quantile used by the quadratic (BGX) test. Scalars come back as ``float``,
arrays as ``numpy.ndarray``.

Example:
    >>> from utils.special import normal_quantile, chi2_quantile
    >>> round(normal_quantile(0.975), 6)
    1.959964
    >>> round(chi2_quantile(0.95, 2), 5)
    5.99146
"""

from typing import overload

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import special

from core.exceptions import DomainError
from core.validators import require_count


def _as_output(values: NDArray[np.float64]) -> float | NDArray[np.float64]:
    return float(values) if values.ndim == 0 else values


@overload
def normal_cdf(x: float) -> float: ...
@overload
def normal_cdf(x: NDArray[np.float64]) -> NDArray[np.float64]: ...


def normal_cdf(x: ArrayLike) -> float | NDArray[np.float64]:
    """
    Standard normal distribution function Φ(x).

    Args:
        x: Finite real value(s)

    Returns:
        Probability in [0, 1], same shape as ``x``

    Raises:
        DomainError: If any value is not finite
    """
    values = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(values)):
        raise DomainError("normal_cdf requires finite arguments")
    return _as_output(special.ndtr(values))


@overload
def normal_quantile(p: float) -> float: ...
@overload
def normal_quantile(p: NDArray[np.float64]) -> NDArray[np.float64]: ...


def normal_quantile(p: ArrayLike) -> float | NDArray[np.float64]:
    """
    Inverse of the standard normal distribution function.

    Args:
        p: Probability (or array of probabilities) strictly inside (0, 1)

    Returns:
        Quantile(s) z with Φ(z) = p

    Raises:
        DomainError: If any p lies outside (0, 1)

    Example:
        >>> normal_quantile(0.5)
        0.0
    """
    values = np.asarray(p, dtype=float)
    if not np.all((values > 0.0) & (values < 1.0)):
        raise DomainError("p must lie in (0, 1)")
    return _as_output(special.ndtri(values))


def chi2_cdf(x: float, k: int) -> float:
    """Regularized lower incomplete gamma P(k/2, x/2)."""
    k = require_count(k, "k")
    if x <= 0:
        return 0.0
    return float(special.gammainc(k / 2.0, x / 2.0))


def chi2_quantile(p: float, k: int) -> float:
    """
    Quantile of the chi-square distribution with ``k`` degrees of freedom.

    Args:
        p: Probability in (0, 1)
        k: Degrees of freedom, integer ≥ 1

    Returns:
        float: x with P(k/2, x/2) = p

    Raises:
        DomainError: If p ∉ (0, 1) or k < 1

    Example:
        >>> round(chi2_quantile(0.95, 4), 4)
        9.4877
    """
    p = float(p)
    if not (0.0 < p < 1.0):
        raise DomainError(f"p must lie in (0, 1), got {p}")
    k = require_count(k, "k")
    return float(2.0 * special.gammaincinv(k / 2.0, p))
