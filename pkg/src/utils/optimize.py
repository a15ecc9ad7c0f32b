"""
Derivative-free maximisation.

``nelder_mead`` maximises an objective with the downhill simplex method of
``scipy.optimize.minimize`` (standard coefficients: reflection 1, expansion 2,
contraction 0.5, shrink 0.5) by minimising the negated objective. Termination
is on the spread of simplex values only (``fatol``); ``xatol`` is disabled so
the value criterion alone decides, or the iteration cap is reached.

Every evaluated point is tracked, so the returned value is the best value
ever seen and is never below the start or any initial vertex.

Example:
    >>> cfg = OptimConfig(restarts=1, max_iterations=500, simplex_tolerance=1e-10)
    >>> x, value = nelder_mead(lambda v: -(v @ v), [1.0, 1.0], cfg)
"""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.optimize import minimize

from config.settings import settings
from core.exceptions import DomainError, OptimizationError


@dataclass(frozen=True)
class OptimConfig:
    """
    Search budget for simplex maximisation.

    Attributes:
        restarts: Number of independent starts (≥ 1)
        max_iterations: Iteration cap per start
        simplex_tolerance: Stop when simplex values spread less than this (> 0)
        initial_step: Edge length of the initial simplex (radians on the sphere)
    """

    restarts: int = 10
    max_iterations: int = 400
    simplex_tolerance: float = 1e-6
    initial_step: float = 0.5

    def __post_init__(self) -> None:
        if self.restarts < 1:
            raise DomainError("restarts must be ≥ 1")
        if self.max_iterations < 1:
            raise DomainError("max_iterations must be ≥ 1")
        if not self.simplex_tolerance > 0:
            raise DomainError("simplex_tolerance must be > 0")
        if not self.initial_step > 0:
            raise DomainError("initial_step must be > 0")

    @classmethod
    def from_settings(cls, restarts: int | None = None) -> "OptimConfig":
        """Budget from ``settings`` (RESTARTS, MAX_ITERATIONS, SIMPLEX_TOLERANCE, INITIAL_STEP)."""
        return cls(
            settings.RESTARTS if restarts is None else restarts,
            settings.MAX_ITERATIONS,
            settings.SIMPLEX_TOLERANCE,
            settings.INITIAL_STEP,
        )

    def with_restarts(self, restarts: int) -> "OptimConfig":
        return OptimConfig(restarts, self.max_iterations, self.simplex_tolerance, self.initial_step)


class _BestTracker:
    """Wraps the objective, rejects non-finite values and remembers the best point."""

    def __init__(self, objective: Callable[[NDArray[np.float64]], float]):
        self.objective = objective
        self.best_x: NDArray[np.float64] | None = None
        self.best_value = -math.inf
        self.evaluations = 0

    def __call__(self, x: NDArray[np.float64]) -> float:
        value = float(self.objective(x))
        self.evaluations += 1
        if not math.isfinite(value):
            raise OptimizationError(f"objective returned non-finite value {value} at {x.tolist()}")
        if value > self.best_value:
            self.best_value = value
            self.best_x = np.array(x, dtype=float, copy=True)
        return -value


def initial_simplex(start: NDArray[np.float64], step: float) -> NDArray[np.float64]:
    """Right-angled simplex: ``start`` plus ``step`` along each coordinate axis."""
    dim = start.size
    simplex = np.tile(start, (dim + 1, 1))
    simplex[1:] += step * np.eye(dim)
    return simplex


def simplex_search(
    objective: Callable[[NDArray[np.float64]], float],
    start: ArrayLike,
    cfg: OptimConfig,
) -> tuple[NDArray[np.float64], float, int]:
    """``nelder_mead`` that also returns the number of objective evaluations."""
    x0 = np.atleast_1d(np.asarray(start, dtype=float))
    if x0.ndim != 1 or x0.size < 1:
        raise DomainError("start must be a vector of dimension ≥ 1")
    if not np.all(np.isfinite(x0)):
        raise DomainError("start must be finite")

    tracker = _BestTracker(objective)
    minimize(
        tracker,
        x0,
        method="Nelder-Mead",
        options={
            "maxiter": cfg.max_iterations,
            "maxfev": cfg.max_iterations * (x0.size + 2),
            "fatol": cfg.simplex_tolerance,
            "xatol": np.inf,
            "initial_simplex": initial_simplex(x0, cfg.initial_step),
            "adaptive": False,
        },
    )
    return tracker.best_x, tracker.best_value, tracker.evaluations


def nelder_mead(
    objective: Callable[[NDArray[np.float64]], float],
    start: ArrayLike,
    cfg: OptimConfig,
) -> tuple[NDArray[np.float64], float]:
    """
    Maximise ``objective`` from ``start``.

    Args:
        objective: Function of a real vector, total on the search domain
        start: Starting point, dimension ≥ 1
        cfg: Search budget; ``restarts`` is ignored here (callers loop)

    Returns:
        (argmax, max value) over all evaluated points

    Raises:
        DomainError: If ``start`` is empty or not one-dimensional
        OptimizationError: If the objective returns a non-finite value
    """
    best_x, best_value, _ = simplex_search(objective, start, cfg)
    return best_x, best_value
