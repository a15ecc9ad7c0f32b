"""
Unit tests for the multivariate two-sample tests.

The directional statistic is checked against a counting oracle, the p = 2
sphere maximum against a dense angular grid, and the calibrations for
determinism and shape.
"""

import math

import numpy as np
import pytest

from config.settings import settings
from core.exceptions import DimensionMismatchError, DomainError
from core.models.basis import BasisKind, BasisSystem
from core.models.samples import Direction, MultiSample, UniSample
from core.multitest import (
    bf_statistic_along,
    bf_test,
    bootstrap_critical_value,
    bootstrap_quantile,
    candidate_bank,
    circle_cell_angles,
    directional_statistic,
    max_statistic,
    mks_statistic,
    mks_test,
    ms_test,
    multiplier_statistic,
)
from core.unitest import ks_statistic, smooth_statistic
from utils.optimize import OptimConfig
from utils.random import RngStream


def directional_oracle(x, y, u, basis):
    """Project, count, average the basis functions, take the max."""
    px, py = x @ u, y @ u
    n, m = len(px), len(py)
    v = np.array([np.sum(px <= b) / n for b in py])
    k = np.arange(1, basis.d + 1)
    if basis.kind is BasisKind.TRIGONOMETRIC:
        table = math.sqrt(2) * np.cos(math.pi * np.outer(v, k))
    else:
        table = np.column_stack(
            [np.sqrt(2 * j + 1) * np.polynomial.legendre.Legendre.basis(j)(2 * v - 1) for j in k]
        )
    return float(np.max(np.abs(table.mean(axis=0))))


def test_directional_statistic_matches_oracle():
    """200 random instances with n, m ≤ 8, p ≤ 3, d ≤ 3"""
    # Arrange
    rng = np.random.default_rng(17)

    for _ in range(200):
        p = int(rng.integers(1, 4))
        n, m = int(rng.integers(1, 9)), int(rng.integers(1, 9))
        basis = BasisSystem(list(BasisKind)[int(rng.integers(0, 2))], int(rng.integers(1, 4)))
        x, y = rng.normal(size=(n, p)), rng.normal(size=(m, p))
        direction = Direction.from_vector(rng.normal(size=p))

        # Act
        value = directional_statistic(MultiSample(x), MultiSample(y), direction, basis)

        # Assert
        assert value == pytest.approx(
            directional_oracle(x, y, direction.vector, basis), rel=1e-10, abs=1e-12
        )


def test_directional_objective_is_orthogonally_equivariant(trig4):
    """Ψ̂_u(X, Y) = Ψ̂_{Qu}(QX, QY) for orthogonal Q"""
    # Arrange
    rng = np.random.default_rng(5)

    for _ in range(100):
        p = int(rng.integers(2, 5))
        q, _ = np.linalg.qr(rng.normal(size=(p, p)))
        x, y = MultiSample(rng.normal(size=(8, p))), MultiSample(rng.normal(size=(6, p)))
        u = Direction.from_vector(rng.normal(size=p))

        # Act
        before = directional_statistic(x, y, u, trig4)
        after = directional_statistic(
            x.transformed(q), y.transformed(q), Direction.from_vector(q @ u.vector), trig4
        )

        # Assert
        assert before == after


def test_directional_statistic_checks_dimensions(trig4):
    # Arrange
    x, y = MultiSample(np.zeros((3, 2))), MultiSample(np.ones((3, 2)))

    # Act & Assert
    with pytest.raises(DimensionMismatchError):
        directional_statistic(x, y, Direction.from_vector([1.0, 0.0, 0.0]), trig4)
    with pytest.raises(DimensionMismatchError):
        directional_statistic(x, MultiSample(np.ones((3, 3))), Direction.from_vector([1.0, 0.0]), trig4)


def test_p1_max_statistic_equals_univariate(rng, trig4, quick_search, stream):
    """For p = 1 the maximum is the univariate statistic along u = +1"""
    # Arrange
    x, y = rng.normal(size=25), rng.normal(size=20)

    # Act
    value, search = max_statistic(MultiSample(x), MultiSample(y), trig4, quick_search, stream)

    # Assert
    assert value == pytest.approx(smooth_statistic(UniSample(x), UniSample(y), trig4), rel=1e-12)
    assert search.best_direction.vector.tolist() == [1.0]


def angular_grid_maximum(x, y, d, points=3600):
    """Unscaled trigonometric objective maximised over an equispaced grid of angles."""
    angles = 2 * np.pi * np.arange(points) / points
    u = np.column_stack([np.cos(angles), np.sin(angles)])
    px, py = x @ u.T, y @ u.T
    v = np.mean(px[:, None, :] <= py[None, :, :], axis=0)
    k = np.arange(1, d + 1)
    table = math.sqrt(2) * np.cos(math.pi * v[..., None] * k)
    return float(np.max(np.abs(table.mean(axis=0))))


@pytest.mark.parametrize("trials", [10, pytest.param(200, marks=pytest.mark.slow)])
def test_circle_search_never_below_angular_grid(trig4, quick_search, trials):
    """p = 2 sphere maximum ≥ the 3600-point grid maximum"""
    # Arrange
    rng = np.random.default_rng(23)

    for trial in range(trials):
        x = MultiSample(rng.normal(size=(8, 2)))
        y = MultiSample(rng.normal(size=(7, 2)) + [0.5, 0.0])
        grid_max = angular_grid_maximum(x.rows, y.rows, trig4.d)

        # Act
        _, search = max_statistic(x, y, trig4, quick_search, RngStream(trial))

        # Assert
        assert search.best_value >= grid_max - 1e-12
        attained = directional_statistic(x, y, search.best_direction, trig4)
        assert attained == pytest.approx(search.best_value, abs=1e-12)


def test_best_direction_finds_separating_axis(quick_search):
    """Samples separated only along e₂ give a best direction near ±e₂"""
    # Arrange
    rng = np.random.default_rng(31)
    x = np.column_stack([rng.uniform(-3, 3, 40), rng.uniform(-1, 1, 40)])
    y = np.column_stack([rng.uniform(-3, 3, 40), rng.uniform(1.05, 3.05, 40)])
    basis = BasisSystem(BasisKind.TRIGONOMETRIC, 4)

    # Act
    value, search = max_statistic(MultiSample(x), MultiSample(y), basis, quick_search, RngStream(2))

    # Assert
    assert value == pytest.approx(math.sqrt(40 * 40 / 80) * math.sqrt(2))
    assert abs(search.best_direction.vector[1]) > math.cos(0.2)


def test_more_restarts_never_lower_the_maximum(trig4):
    """The bank ranking is shared, so extra restarts can only add starts"""
    # Arrange
    rng = np.random.default_rng(3)
    x, y = MultiSample(rng.normal(size=(20, 3))), MultiSample(rng.normal(size=(15, 3)) + 0.3)
    few, many = OptimConfig(restarts=1, max_iterations=80), OptimConfig(restarts=4, max_iterations=80)

    # Act
    low, _ = max_statistic(x, y, trig4, few, RngStream(9), candidates=32)
    high, _ = max_statistic(x, y, trig4, many, RngStream(9), candidates=32)

    # Assert
    assert high >= low


def test_max_statistic_dominates_sampled_directions(rng, trig4, quick_search):
    """p = 2: the maximum is at least the scaled value at every axis and 50 random directions"""
    # Arrange
    x = MultiSample(rng.normal(size=(20, 2)))
    y = MultiSample(rng.normal(size=(18, 2)) + [0.4, -0.2])
    scale = math.sqrt(20 * 18 / 38)
    axes = [Direction.from_vector(s * row) for row in np.eye(2) for s in (1.0, -1.0)]
    sampled = [Direction.from_vector(v) for v in rng.normal(size=(50, 2))]

    # Act
    value, _ = max_statistic(x, y, trig4, quick_search, RngStream(12))

    # Assert
    for direction in axes + sampled:
        assert value >= scale * directional_statistic(x, y, direction, trig4) - 1e-12


def test_max_statistic_dominates_every_axis(rng, trig4, quick_search):
    """p = 3: the maximum is at least the scaled value at ±e_k for every k"""
    # Arrange
    x = MultiSample(rng.normal(size=(30, 3)))
    y = MultiSample(rng.standard_t(4, size=(25, 3)))
    scale = math.sqrt(30 * 25 / 55)

    # Act
    value, _ = max_statistic(x, y, trig4, quick_search, RngStream(13), candidates=32)

    # Assert
    for k in range(3):
        for sign in (1.0, -1.0):
            axis = Direction.from_vector(sign * np.eye(3)[k])
            assert value >= scale * directional_statistic(x, y, axis, trig4) - 1e-12


def test_candidate_bank_composition(stream):
    """±axes, circle grid for p = 2, then the random directions"""
    # Act
    bank3 = candidate_bank(3, 5, stream)
    bank2 = candidate_bank(2, 5, stream, extra_angles=np.array([0.1, 0.2]))

    # Assert
    assert len(bank3) == 6 + 5
    assert len(bank2) == 4 + settings.CIRCLE_GRID + 2 + 5
    assert all(abs(np.linalg.norm(d.vector) - 1) < 1e-12 for d in bank3 + bank2)


def test_circle_cell_angles_one_midpoint_per_cell():
    """A single difference vector cuts the circle into two cells"""
    # Arrange
    x, y = MultiSample([[1.0, 0.0]]), MultiSample([[0.0, 0.0]])

    # Act
    angles = circle_cell_angles(x, y)

    # Assert
    assert len(angles) == 2
    np.testing.assert_allclose(np.sort(np.cos(angles)), [-1.0, 1.0], atol=1e-12)
    np.testing.assert_allclose(np.sin(angles), [0.0, 0.0], atol=1e-12)


def test_multiplier_statistic_p1_matches_definition(trig4, quick_search, stream):
    """max_k |n^{−1/2}Σ e_i ψ_k(rank_i/n)|"""
    # Arrange
    values = np.array([0.3, -1.0, 2.2, 0.7, 1.5])
    e = np.array([0.5, -1.2, 0.3, 2.0, -0.4])
    u = np.array([np.sum(values <= v) / 5 for v in values])
    k = np.arange(1, 5)
    table = math.sqrt(2) * np.cos(math.pi * np.outer(u, k))
    expected = float(np.max(np.abs(e @ table)) / math.sqrt(5))

    # Act
    value = multiplier_statistic(MultiSample(values), e, trig4, quick_search, stream)

    # Assert
    assert value == pytest.approx(expected, rel=1e-12)


def test_multiplier_statistic_checks_length(trig4, quick_search, stream):
    with pytest.raises(DimensionMismatchError):
        multiplier_statistic(MultiSample(np.zeros((4, 2))), np.ones(3), trig4, quick_search, stream)


def test_multiplier_statistic_zero_multipliers(rng, trig4, quick_search, stream):
    """e ≡ 0 gives 0"""
    # Arrange
    x = MultiSample(rng.normal(size=(15, 3)))

    # Act
    value = multiplier_statistic(x, np.zeros(15), trig4, quick_search, stream, candidates=16)

    # Assert
    assert value == 0.0


@pytest.mark.parametrize("scale", [2.0, -0.5, 4.0])
@pytest.mark.parametrize("p", [1, 3])
def test_multiplier_statistic_is_absolutely_homogeneous(rng, trig4, p, scale):
    """Scaling e by λ scales the statistic by |λ|"""
    # Arrange
    x = MultiSample(rng.normal(size=(20, p)))
    e = rng.normal(size=20)
    exact_spread = OptimConfig(restarts=2, max_iterations=60, simplex_tolerance=1e-300)

    # Act
    base = multiplier_statistic(x, e, trig4, exact_spread, RngStream(6), candidates=16)
    scaled = multiplier_statistic(x, scale * e, trig4, exact_spread, RngStream(6), candidates=16)

    # Assert
    assert scaled == pytest.approx(abs(scale) * base, rel=1e-12)


@pytest.mark.parametrize("p", [1, 2, 3])
@pytest.mark.parametrize("e1", [0.7, -1.3])
def test_multiplier_statistic_single_observation(trig4, quick_search, stream, p, e1):
    """n = 1 puts the rank at 1, so the value is √2·|e₁|"""
    # Arrange
    x = MultiSample(np.full((1, p), 0.25))

    # Act
    value = multiplier_statistic(x, [e1], trig4, quick_search, stream, candidates=8)

    # Assert
    assert value == pytest.approx(math.sqrt(2) * abs(e1), rel=1e-12)


@pytest.mark.parametrize("B, alpha, expected", [(100, 0.05, 95.0), (20, 0.05, 19.0), (40, 0.1, 36.0)])
def test_bootstrap_quantile_rank(B, alpha, expected):
    """⌈(1 − α)B⌉-th order statistic of 1..B"""
    # Arrange
    values = np.arange(B, 0, -1, dtype=float)

    # Act & Assert
    assert bootstrap_quantile(values, alpha) == expected


def test_bootstrap_critical_value_deterministic(rng, trig4, quick_search):
    """Same stream → identical replicate values"""
    # Arrange
    x = MultiSample(rng.normal(size=(30, 2)))

    # Act
    first = bootstrap_critical_value(x, trig4, 0.05, 20, quick_search, RngStream(4), candidates=16)
    second = bootstrap_critical_value(x, trig4, 0.05, 20, quick_search, RngStream(4), candidates=16)

    # Assert
    assert first.replicate_values == second.replicate_values
    assert first.critical_value == bootstrap_quantile(first.replicate_values, 0.05)
    assert all(v >= 0 for v in first.replicate_values)


def test_bootstrap_requires_twenty_replicates(rng, trig4, quick_search, stream):
    with pytest.raises(DomainError):
        bootstrap_critical_value(MultiSample(rng.normal(size=(10, 2))), trig4, 0.05, 10, quick_search, stream)


def test_bootstrap_critical_value_monotone_in_alpha(rng, trig4, quick_search):
    """Smaller α never lowers the critical value on the same replicates"""
    # Arrange
    x = MultiSample(rng.normal(size=(25, 2)))
    alphas = [0.5, 0.2, 0.1, 0.05, 0.01]

    # Act
    values = [
        bootstrap_critical_value(x, trig4, a, 40, quick_search, RngStream(8), candidates=16).critical_value
        for a in alphas
    ]

    # Assert
    assert values == sorted(values)


def test_bootstrap_half_level_is_median(rng, trig4, quick_search):
    """α = 0.5 with an odd B selects the median replicate"""
    # Arrange
    x = MultiSample(rng.normal(size=(25, 2)))

    # Act
    result = bootstrap_critical_value(x, trig4, 0.5, 41, quick_search, RngStream(8), candidates=16)

    # Assert
    assert result.critical_value == float(np.median(result.replicate_values))


def test_ms_test_p1_delegates(rng, trig4, quick_search, stream):
    """One-column input uses the univariate statistic and says so"""
    # Arrange
    x, y = MultiSample(rng.normal(size=30)), MultiSample(rng.normal(size=25))

    # Act
    report = ms_test(x, y, trig4, 0.05, 20, quick_search, stream)

    # Assert
    assert report.details["delegated"] == "univariate smooth statistic"
    assert report.statistic == pytest.approx(
        smooth_statistic(UniSample(x.rows[:, 0]), UniSample(y.rows[:, 0]), trig4)
    )
    assert report.reject == (report.statistic >= report.critical_value)


def test_ms_test_swaps_so_x_is_larger(rng, trig4, quick_search, stream):
    """m > n swaps the roles; the report keeps the caller's n and m"""
    # Arrange
    x, y = MultiSample(rng.normal(size=(10, 2))), MultiSample(rng.normal(size=(14, 2)))

    # Act
    report = ms_test(x, y, trig4, 0.05, 20, quick_search, stream, quick_search.with_restarts(1))

    # Assert
    assert report.swapped
    assert (report.n, report.m) == (10, 14)
    assert len(report.details["best_direction"]) == 2


def test_ms_test_detects_location_shift(rng, trig4, quick_search, stream):
    """A three-unit shift in both coordinates is rejected"""
    # Arrange
    x = MultiSample(rng.normal(size=(40, 2)))
    y = MultiSample(rng.normal(size=(40, 2)) + 3.0)

    # Act
    report = ms_test(x, y, trig4, 0.05, 50, quick_search, stream, quick_search.with_restarts(1))

    # Assert
    assert report.reject
    assert report.statistic > report.critical_value


def test_ms_test_reproducible(rng, trig4, quick_search):
    """Same seed, identical report"""
    # Arrange
    x, y = MultiSample(rng.normal(size=(20, 3))), MultiSample(rng.normal(size=(18, 3)))
    bootstrap = quick_search.with_restarts(1)

    # Act
    first = ms_test(x, y, trig4, 0.05, 20, quick_search, RngStream(6), bootstrap)
    second = ms_test(x, y, trig4, 0.05, 20, quick_search, RngStream(6), bootstrap)

    # Assert
    assert first == second


def test_bf_statistic_simple_case():
    """One point each at 0 and 1: (1·1/2)·∫₀¹ 1 dt = 1/2"""
    # Act
    value = bf_statistic_along(MultiSample([0.0]), MultiSample([1.0]), np.array([[1.0]]))

    # Assert
    assert value == pytest.approx(0.5)


def test_bf_statistic_is_symmetric_under_reflection(rng):
    """u and −u contribute the same integral"""
    # Arrange
    x, y = MultiSample(rng.normal(size=(12, 3))), MultiSample(rng.normal(size=(9, 3)))
    u = Direction.from_vector([1.0, 2.0, -1.0]).vector

    # Act & Assert
    assert bf_statistic_along(x, y, np.array([u, -u])) == pytest.approx(
        bf_statistic_along(x, y, np.array([u]))
    )


def test_bf_test_identical_samples_not_rejected(rng, stream):
    # Arrange
    x = MultiSample(rng.normal(size=(10, 2)))

    # Act
    report = bf_test(x, x, 0.05, stream, M=20, B=49)

    # Assert
    assert report.statistic == 0.0
    assert report.p_value == 1.0 and not report.reject


def test_bf_test_detects_location_shift(rng, stream):
    # Arrange
    x = MultiSample(rng.normal(size=(40, 2)))
    y = MultiSample(rng.normal(size=(40, 2)) + [2.0, 0.0])

    # Act
    report = bf_test(x, y, 0.05, stream, M=50, B=99)

    # Assert
    assert report.reject
    assert report.p_value == pytest.approx(0.01)


def test_mks_statistic_p1_equals_ks(rng, quick_search, stream):
    # Arrange
    x, y = rng.normal(size=15), rng.normal(size=12)

    # Act
    value = mks_statistic(MultiSample(x), MultiSample(y), quick_search, stream)

    # Assert
    assert value == pytest.approx(ks_statistic(UniSample(x), UniSample(y)))


def test_mks_test_shift_rejected(rng, quick_search, stream):
    # Arrange
    x = MultiSample(rng.normal(size=(25, 2)))
    y = MultiSample(rng.normal(size=(25, 2)) + [0.0, 3.0])

    # Act
    report = mks_test(x, y, 0.05, quick_search, stream, B=19, candidates=8)

    # Assert
    assert report.method == "mks"
    assert report.reject
