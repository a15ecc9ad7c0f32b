"""
Multivariate Two-Sample Tests Module

Projection-pursuit extension of the smooth test, its multiplier-bootstrap
calibration, and the Baringhaus-Franz and multivariate Kolmogorov-Smirnov
baselines.

Responsibilities:
    - Directional statistic Ψ̂_u(d) = max_k |m⁻¹Σ_j ψ_k(F^u_n(u·Y_j))|
    - Sphere maximisation: a bank of candidate directions (±axes, random
      directions, equispaced angles and exact cell midpoints when p = 2) seeds
      multi-start Nelder-Mead searches over the p − 1 spherical angles
    - Multiplier statistic sup_{u,k} |n^{−1/2}Σ_i e_i ψ_k(F^u_n(u·X_i))| and its
      conditional (1 − α)-quantile
    - Baringhaus-Franz statistic with exact inner integrals

The directional objective is piecewise constant in u (ranks change on finitely
many hyperplanes) and not symmetric under u ↦ −u.

Example:
    >>> cfg = OptimConfig(restarts=5)
    >>> value, search = max_statistic(x, y, basis, cfg, RngStream(7))
    >>> search.best_direction.vector
"""

import math
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.stats import rankdata

from config.logging import logger
from config.settings import settings
from core.basis import basis_table
from core.empirical import random_direction
from core.exceptions import DimensionMismatchError
from core.models.basis import BasisSystem
from core.models.reports import BootstrapResult, SphereSearchResult, TestReport
from core.models.samples import Direction, MultiSample, UniSample
from core.unitest import ks_statistic, permutation_pvalue, scale_factor, truncation_warning
from core.validators import require_alpha, require_count
from utils.optimize import OptimConfig, simplex_search
from utils.random import RngStream

BatchObjective = Callable[[NDArray[np.float64]], NDArray[np.float64]]

# Upper bound on the entries of one (rows x directions) work array.
_CHUNK_ENTRIES = 2_000_000


def _check_dimensions(x: MultiSample, y: MultiSample) -> None:
    if x.p != y.p:
        raise DimensionMismatchError(f"samples have dimensions {x.p} and {y.p}")


def _directional_values(
    x: MultiSample, y: MultiSample, directions: NDArray[np.float64], basis: BasisSystem
) -> NDArray[np.float64]:
    """Unscaled Ψ̂_u(d) for each row u of ``directions`` (K, p)."""
    n, m = x.n, y.n
    values = np.empty(directions.shape[0])
    step = max(1, _CHUNK_ENTRIES // (n + m))
    for start in range(0, directions.shape[0], step):
        block = directions[start : start + step]
        px = x.rows @ block.T
        py = y.rows @ block.T
        # #{i : u·X_i ≤ u·Y_j} = max-rank of Y_j in the pooled sample minus its max-rank in Y
        pooled_rank = rankdata(np.vstack([px, py]), method="max", axis=0)[n:]
        own_rank = rankdata(py, method="max", axis=0)
        pit = (pooled_rank - own_rank) / n
        table = basis_table(basis.kind, basis.d, pit.reshape(-1)).reshape(m, block.shape[0], basis.d)
        values[start : start + block.shape[0]] = np.max(np.abs(table.sum(axis=0) / m), axis=1)
    return values


def directional_statistic(
    x: MultiSample, y: MultiSample, direction: Direction, basis: BasisSystem
) -> float:
    """
    Unscaled Ψ̂_u(d) along ``direction``; callers apply √(nm/(n+m)).

    Raises:
        DimensionMismatchError: If dimensions of samples and direction disagree
    """
    _check_dimensions(x, y)
    if direction.p != x.p:
        raise DimensionMismatchError(
            f"direction has dimension {direction.p}, samples have dimension {x.p}"
        )
    return float(_directional_values(x, y, direction.vector[None, :], basis)[0])


def _multiplier_tables(
    x: MultiSample, directions: NDArray[np.float64], basis: BasisSystem
) -> NDArray[np.float64]:
    """ψ_k(F^u_n(u·X_i)) as an (n, K, d) array for the K rows of ``directions``."""
    ranks = rankdata(x.rows @ directions.T, method="max", axis=0) / x.n
    return basis_table(basis.kind, basis.d, ranks.reshape(-1)).reshape(
        x.n, directions.shape[0], basis.d
    )


def _multiplier_values(
    tables: NDArray[np.float64], e: NDArray[np.float64]
) -> NDArray[np.float64]:
    sums = np.tensordot(e, tables, axes=(0, 0)) / math.sqrt(e.size)
    return np.max(np.abs(sums), axis=1)


def circle_cell_angles(x: MultiSample, y: MultiSample) -> NDArray[np.float64]:
    """
    Midpoint angle of every cell on which the p = 2 objective is constant.

    Cell boundaries are the angles with u·(X_i − Y_j) = 0.
    """
    diff = (x.rows[:, None, :] - y.rows[None, :, :]).reshape(-1, 2)
    diff = diff[np.any(diff != 0.0, axis=1)]
    normal = np.arctan2(diff[:, 1], diff[:, 0])
    edges = np.unique(np.mod(np.concatenate([normal + np.pi / 2, normal - np.pi / 2]), 2 * np.pi))
    if edges.size == 0:
        return np.array([0.0])
    following = np.append(edges[1:], edges[0] + 2 * np.pi)
    return 0.5 * (edges + following)


def candidate_bank(
    p: int,
    count: int,
    stream: RngStream,
    extra_angles: NDArray[np.float64] | None = None,
) -> list[Direction]:
    """
    Seed directions: ±e_k for every axis, ``count`` random directions, and
    for p = 2 the equispaced circle grid plus any ``extra_angles``.
    """
    bank: list[Direction] = []
    for k in range(p):
        axis = np.zeros(p)
        axis[k] = 1.0
        bank.append(Direction.from_vector(axis))
        bank.append(Direction.from_vector(-axis))
    if p == 2:
        grid = 2 * np.pi * np.arange(settings.CIRCLE_GRID) / settings.CIRCLE_GRID
        bank.extend(Direction.from_angles([a]) for a in grid)
        if extra_angles is not None:
            bank.extend(Direction.from_angles([a]) for a in extra_angles)
    bank.extend(random_direction(p, stream) for _ in range(count))
    return bank


def sphere_search(
    evaluate: BatchObjective,
    bank: list[Direction],
    cfg: OptimConfig,
    bank_values: NDArray[np.float64] | None = None,
) -> SphereSearchResult:
    """
    Maximise a direction objective over S^{p−1}.

    The ``cfg.restarts`` best bank directions start Nelder-Mead searches over
    the spherical angles. The bank ranking does not depend on ``restarts``,
    so more restarts never lower the result.

    Args:
        evaluate: Objective on a (K, p) array of unit vectors, returning (K,)
        bank: Candidate directions (all of dimension p)
        cfg: Restart count and simplex budget
        bank_values: Precomputed objective on ``bank`` (optional)
    """
    vectors = np.vstack([d.vector for d in bank])
    if bank_values is None:
        bank_values = evaluate(vectors)
    order = np.argsort(-bank_values, kind="stable")
    evaluations = len(bank)
    p = bank[0].p

    if p == 1:
        best = int(order[0])
        value = float(evaluate(bank[best].vector[None, :])[0])
        return SphereSearchResult(bank[best], value, (value,), evaluations + 1)

    def objective(angles: NDArray[np.float64]) -> float:
        return float(evaluate(Direction.from_angles(angles).vector[None, :])[0])

    restart_values: list[float] = []
    best_angles: NDArray[np.float64] | None = None
    best_value = -math.inf
    for index in order[: cfg.restarts]:
        angles, value, used = simplex_search(objective, bank[index].angles, cfg)
        restart_values.append(value)
        evaluations += used
        if value > best_value:
            best_value, best_angles = value, angles
    best_direction = Direction.from_angles(best_angles)
    logger.debug(
        "sphere search p=%d: best %.6g over %d restarts (bank max %.6g)",
        p, best_value, len(restart_values), float(bank_values[order[0]]),
    )
    return SphereSearchResult(best_direction, best_value, tuple(restart_values), evaluations)


def _bank_for(
    x: MultiSample, y: MultiSample | None, stream: RngStream, count: int
) -> list[Direction]:
    extra = None
    if x.p == 2 and y is not None and x.n * y.n <= settings.CIRCLE_EXACT_LIMIT:
        extra = circle_cell_angles(x, y)
    return candidate_bank(x.p, count, stream, extra)


def max_statistic(
    x: MultiSample,
    y: MultiSample,
    basis: BasisSystem,
    cfg: OptimConfig,
    stream: RngStream,
    candidates: int | None = None,
) -> tuple[float, SphereSearchResult]:
    """
    Ψ̂_max = √(nm/(n+m))·sup_u Ψ̂_u(d).

    For p = 1 the univariate statistic (u = +1) is returned.

    Returns:
        (scaled statistic, search result with the unscaled best value)
    """
    _check_dimensions(x, y)
    scale = scale_factor(x.n, y.n)

    def evaluate(vectors: NDArray[np.float64]) -> NDArray[np.float64]:
        return _directional_values(x, y, vectors, basis)

    if x.p == 1:
        plus = Direction.from_vector([1.0])
        value = float(evaluate(plus.vector[None, :])[0])
        return scale * value, SphereSearchResult(plus, value, (value,), 1)

    count = settings.CANDIDATE_DIRECTIONS if candidates is None else candidates
    search = sphere_search(evaluate, _bank_for(x, y, stream, count), cfg)
    return scale * search.best_value, search


def multiplier_statistic(
    x: MultiSample,
    e: ArrayLike,
    basis: BasisSystem,
    cfg: OptimConfig,
    stream: RngStream,
    candidates: int | None = None,
) -> float:
    """
    sup_{u,k} |n^{−1/2}Σ_i e_i ψ_k(Û^u_i)|, Û^u_i = F^u_n(u·X_i) (always ≥ 1/n).

    Raises:
        DimensionMismatchError: If len(e) ≠ n
    """
    e = np.asarray(e, dtype=float).reshape(-1)
    if e.size != x.n:
        raise DimensionMismatchError(f"multiplier vector has length {e.size}, expected {x.n}")
    calibrator = MultiplierBootstrap(x, basis, cfg, stream, candidates)
    return calibrator.statistic(e)


class MultiplierBootstrap:
    """
    Multiplier-bootstrap calibration for a fixed X sample.

    The candidate bank and its basis tables are computed once and shared by
    every replicate; each replicate then refines from its best bank directions.
    """

    def __init__(
        self,
        x: MultiSample,
        basis: BasisSystem,
        cfg: OptimConfig,
        stream: RngStream,
        candidates: int | None = None,
    ):
        self.x = x
        self.basis = basis
        self.cfg = cfg
        if x.p == 1:
            self.bank = [Direction.from_vector([1.0])]
        else:
            count = settings.CANDIDATE_DIRECTIONS if candidates is None else candidates
            self.bank = candidate_bank(x.p, count, stream)
        self.tables = _multiplier_tables(x, np.vstack([d.vector for d in self.bank]), basis)

    def statistic(self, e: NDArray[np.float64]) -> float:
        bank_values = _multiplier_values(self.tables, e)
        if self.x.p == 1:
            return float(bank_values[0])

        def evaluate(vectors: NDArray[np.float64]) -> NDArray[np.float64]:
            return _multiplier_values(_multiplier_tables(self.x, vectors, self.basis), e)

        return sphere_search(evaluate, self.bank, self.cfg, bank_values).best_value


def bootstrap_quantile(values: ArrayLike, alpha: float) -> float:
    """⌈(1 − α)·B⌉-th smallest of the B values."""
    ordered_values = np.sort(np.asarray(values, dtype=float))
    rank = math.ceil((1.0 - alpha) * ordered_values.size - 1e-9)
    return float(ordered_values[max(rank, 1) - 1])


def bootstrap_critical_value(
    x: MultiSample,
    basis: BasisSystem,
    alpha: float,
    B: int,
    cfg: OptimConfig,
    stream: RngStream,
    candidates: int | None = None,
) -> BootstrapResult:
    """
    Conditional (1 − α)-quantile of the multiplier statistic given X.

    Replicate b draws its Gaussian multipliers from ``stream.derive(b + 1)``;
    ``stream.derive(0)`` seeds the shared candidate bank.
    """
    alpha = require_alpha(alpha)
    B = require_count(B, "B", 20)
    calibrator = MultiplierBootstrap(x, basis, cfg, stream.derive(0), candidates)
    values = tuple(
        calibrator.statistic(stream.derive(b + 1).gaussian(x.n)) for b in range(B)
    )
    return BootstrapResult(bootstrap_quantile(values, alpha), values, B, alpha)


def ms_test(
    x: MultiSample,
    y: MultiSample,
    basis: BasisSystem,
    alpha: float,
    B: int,
    cfg: OptimConfig,
    stream: RngStream,
    bootstrap_cfg: OptimConfig | None = None,
) -> TestReport:
    """
    Multivariate smooth test: reject iff Ψ̂_max(d) ≥ ĉ^MB_α(d).

    The larger sample plays the X role. p = 1 reduces to the univariate
    statistic, calibrated by the same multiplier bootstrap along u = +1.
    """
    alpha = require_alpha(alpha)
    _check_dimensions(x, y)
    n, m = x.n, y.n
    swapped = y.n > x.n
    if swapped:
        x, y = y, x
    bootstrap_cfg = bootstrap_cfg or cfg.with_restarts(settings.BOOTSTRAP_RESTARTS)
    statistic, search = max_statistic(x, y, basis, cfg, stream.derive(0))
    calibration = bootstrap_critical_value(x, basis, alpha, B, bootstrap_cfg, stream.derive(1))
    warnings = [w for w in [truncation_warning(basis.d, x.n, y.n)] if w]
    details = {
        "best_direction": search.best_direction.vector.tolist(),
        "restart_values": list(search.restart_values),
        "evaluations": search.evaluations,
        "bootstrap_B": calibration.B,
        "restarts": cfg.restarts,
        "bootstrap_restarts": bootstrap_cfg.restarts,
        "p": x.p,
    }
    if x.p == 1:
        details["delegated"] = "univariate smooth statistic"
    return TestReport(
        method="ms",
        statistic=statistic,
        critical_value=calibration.critical_value,
        reject=statistic >= calibration.critical_value,
        alpha=alpha,
        n=n,
        m=m,
        d=basis.d,
        basis=basis.kind.value,
        seed=stream.seed,
        stream_id=stream.stream_id,
        swapped=swapped,
        warnings=warnings,
        details=details,
    )


def _squared_edf_gap(px: NDArray[np.float64], py: NDArray[np.float64]) -> float:
    """∫{F_n(t) − G_m(t)}² dt, exact for the two step functions."""
    pooled = np.sort(np.concatenate([px, py]))
    f = np.searchsorted(np.sort(px), pooled[:-1], side="right") / px.size
    g = np.searchsorted(np.sort(py), pooled[:-1], side="right") / py.size
    return float(np.sum((f - g) ** 2 * np.diff(pooled)))


def bf_statistic_along(x: MultiSample, y: MultiSample, directions: NDArray[np.float64]) -> float:
    """(nm/(n+m))·mean_u ∫{F^u_n − G^u_m}² dt over the rows of ``directions``."""
    _check_dimensions(x, y)
    gaps = [_squared_edf_gap(x.rows @ u, y.rows @ u) for u in directions]
    return x.n * y.n / (x.n + y.n) * float(np.mean(gaps))


def bf_directions(p: int, M: int, stream: RngStream) -> NDArray[np.float64]:
    M = require_count(M, "M")
    return np.vstack([random_direction(p, stream).vector for _ in range(M)])


def bf_statistic(x: MultiSample, y: MultiSample, M: int, stream: RngStream) -> float:
    """
    Baringhaus-Franz statistic with the sphere integral replaced by an
    average over ``M`` uniform directions.
    """
    return bf_statistic_along(x, y, bf_directions(x.p, M, stream))


def bf_test(
    x: MultiSample,
    y: MultiSample,
    alpha: float,
    stream: RngStream,
    M: int | None = None,
    B: int | None = None,
) -> TestReport:
    """BF test calibrated by permutations; one direction set serves all permutations."""
    alpha = require_alpha(alpha)
    M = settings.BF_DIRECTIONS if M is None else M
    B = settings.PERMUTATIONS if B is None else B
    directions = bf_directions(x.p, M, stream.derive(0))

    def statistic(a: MultiSample, b: MultiSample) -> float:
        return bf_statistic_along(a, b, directions)

    value = statistic(x, y)
    p_value = permutation_pvalue(statistic, x, y, B, stream.derive(1))
    return TestReport(
        method="bf",
        statistic=value,
        p_value=p_value,
        reject=p_value <= alpha,
        alpha=alpha,
        n=x.n,
        m=y.n,
        seed=stream.seed,
        stream_id=stream.stream_id,
        details={"directions": M, "permutations": B, "p": x.p},
    )


def mks_statistic(
    x: MultiSample,
    y: MultiSample,
    cfg: OptimConfig,
    stream: RngStream,
    candidates: int | None = None,
) -> float:
    """Multivariate Kolmogorov-Smirnov statistic √(nm/(n+m))·sup_{u,t}|F^u_n − G^u_m|."""
    _check_dimensions(x, y)

    def evaluate(vectors: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.array(
            [ks_statistic(UniSample(x.rows @ u), UniSample(y.rows @ u)) for u in vectors]
        )

    if x.p == 1:
        return float(evaluate(np.array([[1.0]]))[0])
    count = settings.CANDIDATE_DIRECTIONS if candidates is None else candidates
    return sphere_search(evaluate, _bank_for(x, y, stream, count), cfg).best_value


def mks_test(
    x: MultiSample,
    y: MultiSample,
    alpha: float,
    cfg: OptimConfig,
    stream: RngStream,
    B: int | None = None,
    candidates: int = 64,
) -> TestReport:
    """Multivariate KS test calibrated by permutations (each permutation re-searches)."""
    alpha = require_alpha(alpha)
    B = settings.PERMUTATIONS if B is None else B
    search_stream = stream.derive(0)

    def statistic(a: MultiSample, b: MultiSample) -> float:
        fresh = RngStream(search_stream.seed, search_stream.stream_id)
        return mks_statistic(a, b, cfg, fresh, candidates)

    value = statistic(x, y)
    p_value = permutation_pvalue(statistic, x, y, B, stream.derive(1))
    return TestReport(
        method="mks",
        statistic=value,
        p_value=p_value,
        reject=p_value <= alpha,
        alpha=alpha,
        n=x.n,
        m=y.n,
        seed=stream.seed,
        stream_id=stream.stream_id,
        details={"permutations": B, "restarts": cfg.restarts, "p": x.p},
    )
