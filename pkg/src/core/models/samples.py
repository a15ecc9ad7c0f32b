"""
Sample Domain Models

Immutable containers for the observations a two-sample test consumes, and
for directions on the unit sphere used to project multivariate samples.

Responsibilities:
    - Validate observations once, at construction (finite, non-empty)
    - Cache the sorted copy of univariate samples for EDF lookups
    - Keep a direction's unit vector and spherical angles consistent

Does NOT:
    - Compute statistics (see ``core.empirical``, ``core.unitest``)
    - Read files (see ``adapters.csv_io``)

Example:
    >>> x = UniSample([1.0, 3.0, 5.0])
    >>> x.sorted_values
    array([1., 3., 5.])
    >>> u = Direction.from_angles([0.0])
    >>> u.vector
    array([1., 0.])
"""

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

from core.exceptions import DimensionMismatchError, DomainError


def _readonly(array: NDArray[np.float64]) -> NDArray[np.float64]:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class UniSample:
    """
    Univariate sample of ``n ≥ 1`` finite observations.

    Attributes:
        values: Observations in the order given
        sorted_values: Sorted copy used for binary-search EDF evaluation
    """

    values: NDArray[np.float64]
    sorted_values: NDArray[np.float64] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=float, copy=True).reshape(-1)
        if values.size < 1:
            raise DomainError("sample must contain at least one observation")
        if not np.all(np.isfinite(values)):
            raise DomainError("sample values must be finite")
        object.__setattr__(self, "values", _readonly(values))
        object.__setattr__(self, "sorted_values", _readonly(np.sort(values, kind="stable")))

    @property
    def n(self) -> int:
        return int(self.values.size)

    def __len__(self) -> int:
        return self.n

    def transformed(self, func) -> "UniSample":
        """Sample with ``func`` applied elementwise."""
        return UniSample(func(self.values))


@dataclass(frozen=True, eq=False)
class MultiSample:
    """
    ``n`` observations in ``p`` dimensions, stored as an (n, p) array.

    A one-dimensional input is read as ``n`` observations with ``p = 1``.
    """

    rows: NDArray[np.float64]

    def __post_init__(self) -> None:
        rows = np.array(self.rows, dtype=float, copy=True)
        if rows.ndim == 1:
            rows = rows.reshape(-1, 1)
        if rows.ndim != 2:
            raise DimensionMismatchError("rows must form an (n, p) matrix")
        if rows.shape[0] < 1 or rows.shape[1] < 1:
            raise DomainError("sample must contain at least one observation of dimension ≥ 1")
        if not np.all(np.isfinite(rows)):
            raise DomainError("sample values must be finite")
        object.__setattr__(self, "rows", _readonly(rows))

    @property
    def n(self) -> int:
        return int(self.rows.shape[0])

    @property
    def p(self) -> int:
        return int(self.rows.shape[1])

    def __len__(self) -> int:
        return self.n

    def column(self, k: int) -> UniSample:
        return UniSample(self.rows[:, k])

    def transformed(self, matrix: ArrayLike) -> "MultiSample":
        """Sample with every row mapped by ``matrix`` (row ↦ matrix · row)."""
        matrix = np.asarray(matrix, dtype=float)
        if matrix.shape != (self.p, self.p):
            raise DimensionMismatchError(f"matrix must be {self.p}x{self.p}")
        return MultiSample(self.rows @ matrix.T)


def spherical_to_unit(angles: NDArray[np.float64]) -> NDArray[np.float64]:
    """u₁ = cos φ₁, u₂ = sin φ₁ cos φ₂, …, u_p = sin φ₁ ⋯ sin φ_{p−1}."""
    p = angles.size + 1
    u = np.empty(p)
    running = 1.0
    for i, phi in enumerate(angles):
        u[i] = running * np.cos(phi)
        running *= np.sin(phi)
    u[p - 1] = running
    return u


def unit_to_spherical(u: NDArray[np.float64]) -> NDArray[np.float64]:
    """Inverse of ``spherical_to_unit`` for a unit vector with p ≥ 2."""
    p = u.size
    angles = np.empty(p - 1)
    for i in range(p - 2):
        angles[i] = np.arctan2(np.linalg.norm(u[i + 1 :]), u[i])
    angles[p - 2] = np.arctan2(u[p - 1], u[p - 2])
    return angles


@dataclass(frozen=True, eq=False)
class Direction:
    """
    Unit vector on S^{p−1} together with the spherical angles generating it.

    Build with ``from_angles`` or ``from_vector``; both keep the invariant
    ``spherical_to_unit(angles) == vector`` (to rounding).
    """

    vector: NDArray[np.float64]
    angles: NDArray[np.float64]

    @property
    def p(self) -> int:
        return int(self.vector.size)

    @classmethod
    def from_angles(cls, angles: ArrayLike) -> "Direction":
        angles = np.atleast_1d(np.asarray(angles, dtype=float)).reshape(-1)
        if angles.size < 1:
            raise DomainError("angles path requires p ≥ 2 (at least one angle)")
        if not np.all(np.isfinite(angles)):
            raise DomainError("angles must be finite")
        vector = spherical_to_unit(angles)
        return cls(_readonly(vector), _readonly(angles.copy()))

    @classmethod
    def from_vector(cls, vector: ArrayLike) -> "Direction":
        """
        Normalise ``vector`` and attach its angles.

        The stored vector is regenerated from the angles so both
        representations agree exactly.

        Raises:
            DomainError: If ``vector`` is zero or not finite
        """
        v = np.asarray(vector, dtype=float).reshape(-1)
        norm = float(np.linalg.norm(v))
        if v.size < 1 or not np.isfinite(norm) or norm == 0.0:
            raise DomainError("cannot normalise a zero or non-finite vector")
        v = v / norm
        if v.size == 1:
            return cls(_readonly(np.sign(v)), _readonly(np.empty(0)))
        return cls.from_angles(unit_to_spherical(v))

    def __neg__(self) -> "Direction":
        return Direction.from_vector(-self.vector)
