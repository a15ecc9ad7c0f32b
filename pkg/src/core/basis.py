"""
Orthonormal Basis Module

Evaluates the orthonormal systems {ψ_k} on [0, 1], their first and second
derivatives, the closed-form sup-norm bounds B_{ℓd}, and a Gram-matrix
diagnostic.

Systems:
    - Trigonometric: ψ_k(z) = √2·cos(πkz)
    - Legendre: ψ_k(z) = √(2k+1)·P_k(2z − 1), P_k the classical Legendre
      polynomial, evaluated with the three-term recurrence
      (k+1)P_{k+1} = (2k+1)xP_k − kP_{k−1}

Legendre derivatives use P′_{k+1} = P′_{k−1} + (2k+1)P_k and the same
identity one order up, which holds on the closed interval including the
endpoints.

Example:
    >>> basis = BasisSystem(BasisKind.LEGENDRE, d=2)
    >>> evaluate_vector(basis, 0.5)
    array([ 0.        , -1.11803399])
"""

import math

import numpy as np
from numpy.typing import ArrayLike, NDArray

from core.exceptions import DomainError
from core.models.basis import BasisKind, BasisSystem
from core.validators import require_count
from utils.quadrature import gauss_legendre


def _legendre_table(
    d: int, z: NDArray[np.float64], order: int
) -> NDArray[np.float64]:
    """(len(z), d) table of the ``order``-th derivative of ψ_1..ψ_d, Legendre."""
    x = 2.0 * z - 1.0
    p = np.zeros((d + 1, z.size))
    dp = np.zeros_like(p)
    ddp = np.zeros_like(p)
    p[0] = 1.0
    if d >= 1:
        p[1] = x
        dp[1] = 1.0
    for k in range(1, d):
        p[k + 1] = ((2 * k + 1) * x * p[k] - k * p[k - 1]) / (k + 1)
        dp[k + 1] = dp[k - 1] + (2 * k + 1) * p[k]
        ddp[k + 1] = ddp[k - 1] + (2 * k + 1) * dp[k]
    table = (p, dp, ddp)[order]
    k = np.arange(1, d + 1)
    scale = np.sqrt(2.0 * k + 1.0) * 2.0**order
    return (table[1:] * scale[:, None]).T


def _trig_table(d: int, z: NDArray[np.float64], order: int) -> NDArray[np.float64]:
    """(len(z), d) table of the ``order``-th derivative of ψ_1..ψ_d, trigonometric."""
    freq = math.pi * np.arange(1, d + 1)
    arg = np.outer(z, freq)
    if order == 0:
        return math.sqrt(2.0) * np.cos(arg)
    if order == 1:
        return -math.sqrt(2.0) * freq * np.sin(arg)
    return -math.sqrt(2.0) * freq**2 * np.cos(arg)


def basis_table(
    kind: BasisKind, d: int, z: NDArray[np.float64], order: int = 0
) -> NDArray[np.float64]:
    """
    Unchecked evaluation used on hot paths (PIT values are in [0, 1] by construction).

    Returns:
        Array of shape (len(z), d); column k−1 holds ψ_k^{(order)}(z)
    """
    z = np.asarray(z, dtype=float).reshape(-1)
    if kind is BasisKind.LEGENDRE:
        return _legendre_table(d, z, order)
    return _trig_table(d, z, order)


def _checked_points(z: ArrayLike) -> NDArray[np.float64]:
    points = np.asarray(z, dtype=float)
    if not np.all((points >= 0.0) & (points <= 1.0)):
        raise DomainError("z must lie in [0, 1]")
    return points


def evaluate(basis: BasisSystem, k: int, z: float) -> float:
    """
    ψ_k(z) for 1 ≤ k ≤ d and 0 ≤ z ≤ 1.

    Raises:
        DomainError: If z ∉ [0, 1] or k ∉ [1, d]

    Example:
        >>> evaluate(BasisSystem(BasisKind.TRIGONOMETRIC, 5), 3, 0.0)
        1.4142135623730951
    """
    if isinstance(k, bool) or int(k) != k or not 1 <= k <= basis.d:
        raise DomainError(f"k must be an integer in [1, {basis.d}], got {k!r}")
    point = float(_checked_points(z))
    return float(basis_table(basis.kind, int(k), np.array([point]))[0, int(k) - 1])


def evaluate_vector(basis: BasisSystem, z: ArrayLike) -> NDArray[np.float64]:
    """
    (ψ_1(z), …, ψ_d(z)).

    A scalar ``z`` gives a vector of length d; an array of points gives a
    (len(z), d) matrix.
    """
    points = _checked_points(z)
    table = basis_table(basis.kind, basis.d, points.reshape(-1))
    return table[0] if points.ndim == 0 else table


def derivative_vector(basis: BasisSystem, z: ArrayLike, order: int) -> NDArray[np.float64]:
    """Analytic ``order``-th derivatives (order ∈ {0, 1, 2}) of ψ_1..ψ_d at ``z``."""
    if order not in (0, 1, 2):
        raise DomainError("derivative order must be 0, 1 or 2")
    points = _checked_points(z)
    table = basis_table(basis.kind, basis.d, points.reshape(-1), order)
    return table[0] if points.ndim == 0 else table


def bound(kind: BasisKind | str, order: int, d: int) -> float:
    """
    Closed-form bound on max_{k ≤ d} sup_{[0,1]} |ψ_k^{(order)}|.

    Trigonometric: (√2, √2·πd, √2·π²d²).
    Legendre: (√(2d+1), 2√3·d^{5/2}, (4/√3)·d^{9/2}), the Markov inequalities
    rescaled from [−1, 1] to [0, 1].
    """
    kind = BasisKind.parse(kind)
    d = require_count(d, "d")
    if order not in (0, 1, 2):
        raise DomainError("derivative order must be 0, 1 or 2")
    if kind is BasisKind.TRIGONOMETRIC:
        return math.sqrt(2.0) * (math.pi * d) ** order
    if order == 0:
        return math.sqrt(2.0 * d + 1.0)
    if order == 1:
        return 2.0 * math.sqrt(3.0) * d**2.5
    return 4.0 / math.sqrt(3.0) * d**4.5


def printed_bound(kind: BasisKind | str, order: int, d: int) -> float:
    """
    The bounds as usually quoted for Legendre series (without the [0, 1]
    rescaling factors 2 and 4). Kept for comparison; ``bound`` is the one
    that holds pointwise.
    """
    kind = BasisKind.parse(kind)
    if kind is BasisKind.LEGENDRE and order == 1:
        return math.sqrt(3.0) * d**2.5
    if kind is BasisKind.LEGENDRE and order == 2:
        return d**4.5 / math.sqrt(3.0)
    return bound(kind, order, d)


def gram_matrix(basis: BasisSystem, quadrature_order: int) -> NDArray[np.float64]:
    """
    Quadrature approximation of [∫ψ_kψ_ℓ]_{k,ℓ ≤ d}.

    Args:
        basis: System to check
        quadrature_order: Gauss-Legendre nodes, at least d + 1

    Returns:
        d×d matrix, ≈ identity for an orthonormal system
    """
    quadrature_order = require_count(quadrature_order, "quadrature_order")
    if quadrature_order < basis.d + 1:
        raise DomainError(f"quadrature_order must be ≥ d + 1 = {basis.d + 1}")
    nodes, weights = gauss_legendre(quadrature_order)
    table = basis_table(basis.kind, basis.d, nodes)
    return table.T @ (weights[:, None] * table)
