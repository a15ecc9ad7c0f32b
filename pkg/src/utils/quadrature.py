"""
Quadrature helpers.

Gauss-Legendre rules mapped to [0, 1] for Gram-matrix diagnostics, and an
adaptive integrator for density normalisers.
"""

from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from numpy.typing import NDArray
from scipy import integrate

from core.exceptions import InvariantViolation
from core.validators import require_count


@lru_cache(maxsize=32)
def _unit_interval_rule(order: int) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    nodes, weights = leggauss(order)
    nodes = 0.5 * (nodes + 1.0)
    weights = 0.5 * weights
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_legendre(order: int) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """
    Gauss-Legendre nodes and weights on [0, 1].

    An ``order``-point rule integrates polynomials of degree ≤ 2·order − 1 exactly.
    """
    return _unit_interval_rule(require_count(order, "quadrature_order"))


def integrate_adaptive(
    func: Callable[[float], float],
    lower: float,
    upper: float,
    tolerance: float = 1e-10,
    breakpoints: Sequence[float] | None = None,
) -> float:
    """
    Adaptive integral of ``func`` over [lower, upper].

    Raises:
        InvariantViolation: If the error estimate exceeds 1000 × tolerance
    """
    inner = None
    if breakpoints is not None:
        inner = [b for b in breakpoints if lower < b < upper] or None
    value, error = integrate.quad(
        func, lower, upper, epsabs=tolerance, epsrel=tolerance, limit=500, points=inner
    )
    if error > 1e3 * tolerance:
        raise InvariantViolation(
            f"adaptive quadrature did not converge on [{lower}, {upper}] (error {error:.2e})"
        )
    return float(value)
