"""
Empirical Distribution Module

Empirical distribution functions, probability-integral-transform (PIT)
values, pooled EDFs and directional projections of multivariate samples.

All EDFs are right-continuous step functions evaluated by binary search on
the sample's sorted cache: F_n(t) = #{X_i ≤ t} / n. Ties follow the same
``≤`` convention without randomisation; ``tie_warning`` reports them.

Example:
    >>> x, y = UniSample([1, 3, 5]), UniSample([2, 4])
    >>> pit_values(x, y)
    array([0.33333333, 0.66666667])
"""

import numpy as np
from numpy.typing import ArrayLike, NDArray

from core.exceptions import DimensionMismatchError, DomainError
from core.models.samples import Direction, MultiSample, UniSample
from utils.random import RngStream


def edf_eval(sample: UniSample, t: ArrayLike) -> float | NDArray[np.float64]:
    """
    F_n(t) = (1/n)·#{values ≤ t}.

    Accepts a scalar or an array of evaluation points.
    """
    counts = np.searchsorted(sample.sorted_values, t, side="right")
    result = counts / sample.n
    return float(result) if np.ndim(result) == 0 else result


def pit_values(x: UniSample, y: UniSample) -> NDArray[np.float64]:
    """
    V̂_j = F_n(Y_j), the Y-sample transformed by the X-sample EDF.

    Values lie in [0, 1] and may equal either endpoint.
    """
    return np.searchsorted(x.sorted_values, y.values, side="right") / x.n


def pooled_edf(x: UniSample, y: UniSample, t: ArrayLike) -> float | NDArray[np.float64]:
    """H_{n,m}(t) = {n·F_n(t) + m·G_m(t)} / (n + m)."""
    counts = np.searchsorted(x.sorted_values, t, side="right") + np.searchsorted(
        y.sorted_values, t, side="right"
    )
    result = counts / (x.n + y.n)
    return float(result) if np.ndim(result) == 0 else result


def project(sample: MultiSample, direction: Direction) -> UniSample:
    """
    Projected sample u·X_i.

    Raises:
        DimensionMismatchError: If the direction and sample dimensions differ
    """
    if direction.p != sample.p:
        raise DimensionMismatchError(
            f"direction has dimension {direction.p}, sample has dimension {sample.p}"
        )
    return UniSample(sample.rows @ direction.vector)


def direction_from_angles(angles: ArrayLike) -> Direction:
    """
    Direction with spherical coordinates ``angles`` (p − 1 values, p ≥ 2).

    Example:
        >>> direction_from_angles([np.pi / 2, 0.0]).vector.round(12)
        array([0., 1., 0.])
    """
    return Direction.from_angles(angles)


def random_direction(p: int, stream: RngStream) -> Direction:
    """Uniformly distributed direction on S^{p−1} (normalised Gaussian vector)."""
    if p < 1:
        raise DomainError("p must be ≥ 1")
    while True:
        v = stream.gaussian(p)
        if np.any(v != 0.0):
            return Direction.from_vector(v)


def tie_warning(*samples: UniSample) -> str | None:
    """Diagnostic message when the pooled observations contain ties."""
    pooled = np.concatenate([s.values for s in samples])
    unique = np.unique(pooled).size
    if unique < pooled.size:
        return (
            f"{pooled.size - unique} tied observation(s) in the pooled sample; "
            "ties are resolved by the ≤ convention"
        )
    return None
