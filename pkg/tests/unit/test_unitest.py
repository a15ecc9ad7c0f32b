"""
Unit tests for the univariate two-sample tests.

Statistics are compared with direct brute-force oracles; rank invariance
and permutation p-values are checked exactly.
"""

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings as hypothesis_settings
from hypothesis import strategies as st

from core.exceptions import DomainError, InvariantViolation
from core.models.basis import BasisKind, BasisSystem
from core.models.reports import TestReport
from core.models.samples import UniSample
from core.unitest import (
    bgx_statistic,
    bgx_test,
    cvm_statistic,
    cvm_test,
    ks_statistic,
    ks_test,
    max_abs_gaussian_cdf,
    oracle_statistic,
    permutation_pvalue,
    schwarz_criterion,
    schwarz_smooth_test,
    select_d_schwarz,
    smooth_critical_value,
    smooth_statistic,
    smooth_test,
)
from utils.random import RngStream
from utils.special import normal_cdf


def psi(kind: BasisKind, k: int, z: float) -> float:
    """Textbook basis functions evaluated one point at a time."""
    if kind is BasisKind.TRIGONOMETRIC:
        return math.sqrt(2) * math.cos(math.pi * k * z)
    x = 2 * z - 1
    p_prev, p = 1.0, x
    if k == 1:
        return math.sqrt(3) * x
    for j in range(1, k):
        p_prev, p = p, ((2 * j + 1) * x * p - j * p_prev) / (j + 1)
    return math.sqrt(2 * k + 1) * p


def smooth_oracle(x, y, kind, d):
    if len(y) > len(x):
        x, y = y, x
    n, m = len(x), len(y)
    v = [sum(1 for a in x if a <= b) / n for b in y]
    comps = [abs(sum(psi(kind, k, z) for z in v) / m) for k in range(1, d + 1)]
    return math.sqrt(n * m / (n + m)) * max(comps), m * sum(
        (sum(psi(kind, k, z) for z in v) / m) ** 2 for k in range(1, d + 1)
    )


def ks_oracle(x, y):
    n, m = len(x), len(y)
    gaps = [abs(sum(a <= t for a in x) / n - sum(b <= t for b in y) / m) for t in x + y]
    return math.sqrt(n * m / (n + m)) * max(gaps)


def cvm_oracle(x, y):
    n, m = len(x), len(y)
    total = sum(
        (sum(a <= t for a in x) / n - sum(b <= t for b in y) / m) ** 2 for t in x + y
    )
    return n * m / (n + m) * total / (n + m)


small_samples = st.lists(st.integers(min_value=-50, max_value=50), min_size=1, max_size=8)


@hypothesis_settings(max_examples=200)
@given(
    x=small_samples,
    y=small_samples,
    kind=st.sampled_from(list(BasisKind)),
    d=st.integers(min_value=1, max_value=3),
)
def test_statistics_match_brute_force_oracles(x, y, kind, d):
    """Smooth, BGX, KS and CVM statistics equal their direct definitions"""
    # Arrange
    xs, ys = UniSample(x), UniSample(y)
    basis = BasisSystem(kind, d)
    expected_smooth, expected_bgx = smooth_oracle(list(map(float, x)), list(map(float, y)), kind, d)

    # Act & Assert
    assert smooth_statistic(xs, ys, basis) == pytest.approx(expected_smooth, rel=1e-12, abs=1e-12)
    assert bgx_statistic(xs, ys, basis) == pytest.approx(expected_bgx, rel=1e-12, abs=1e-12)
    assert ks_statistic(xs, ys) == pytest.approx(ks_oracle(x, y), rel=1e-12)
    assert cvm_statistic(xs, ys) == pytest.approx(cvm_oracle(x, y), rel=1e-12, abs=1e-15)


@hypothesis_settings(max_examples=100)
@given(
    x=st.lists(st.integers(min_value=-1000, max_value=1000), min_size=2, max_size=30),
    y=st.lists(st.integers(min_value=-1000, max_value=1000), min_size=2, max_size=30),
)
def test_rank_invariance_under_increasing_transform(x, y):
    """Every statistic is unchanged by t ↦ t³ + 5t applied to both samples"""
    # Arrange
    def transform(values):
        return UniSample([float(v) ** 3 + 5.0 * v for v in values])

    xs, ys = UniSample(x), UniSample(y)
    tx, ty = transform(x), transform(y)
    basis = BasisSystem(BasisKind.TRIGONOMETRIC, 5)

    # Act & Assert
    assert smooth_statistic(xs, ys, basis) == smooth_statistic(tx, ty, basis)
    assert bgx_statistic(xs, ys, basis) == bgx_statistic(tx, ty, basis)
    assert ks_statistic(xs, ys) == ks_statistic(tx, ty)
    assert cvm_statistic(xs, ys) == cvm_statistic(tx, ty)


def test_smooth_statistic_doc_example():
    """One point each, d = 1: √(1/2)·|ψ_1(1)| = 1"""
    basis = BasisSystem(BasisKind.TRIGONOMETRIC, 1)
    assert smooth_statistic(UniSample([0.0]), UniSample([1.0]), basis) == pytest.approx(1.0)


def test_smooth_statistic_symmetric_in_sample_order(rng, trig4):
    """The larger sample always plays the X role"""
    # Arrange
    x, y = UniSample(rng.normal(size=30)), UniSample(rng.normal(size=20))

    # Act & Assert
    assert smooth_statistic(x, y, trig4) == smooth_statistic(y, x, trig4)


@hypothesis_settings(max_examples=150)
@given(
    x=st.lists(st.floats(min_value=-10, max_value=10, allow_nan=False), min_size=1, max_size=40),
    y=st.lists(st.floats(min_value=-10, max_value=10, allow_nan=False), min_size=1, max_size=40),
    kind=st.sampled_from(list(BasisKind)),
    d=st.integers(min_value=2, max_value=16),
    data=st.data(),
)
def test_smooth_statistic_monotone_in_d(x, y, kind, d, data):
    """Ψ̂(d′) ≤ Ψ̂(d) for every d′ < d on the same samples"""
    # Arrange
    xs, ys = UniSample(x), UniSample(y)
    smaller = data.draw(st.integers(min_value=1, max_value=d - 1))

    # Act
    low = smooth_statistic(xs, ys, BasisSystem(kind, smaller))
    high = smooth_statistic(xs, ys, BasisSystem(kind, d))

    # Assert
    assert low <= high + 1e-12


def test_critical_value_d1_is_normal_quantile():
    """c_0.05(1) = 1.959964"""
    assert round(smooth_critical_value(0.05, 1), 6) == 1.959964


@pytest.mark.parametrize("d", [1, 4, 12])
def test_critical_value_inverts_null_cdf(d):
    """(2Φ(c_α) − 1)^d = 1 − α"""
    assert max_abs_gaussian_cdf(smooth_critical_value(0.05, d), d) == pytest.approx(0.95, abs=1e-12)


@pytest.mark.parametrize("alpha", [1e-6, 1e-10, 1e-14])
@pytest.mark.parametrize("d", [1, 4, 20])
def test_critical_value_keeps_precision_for_tiny_alpha(alpha, d):
    """The exceedance probability at c_α(d) recovers α to relative accuracy"""
    # Act
    c = smooth_critical_value(alpha, d)

    # Assert
    exceedance = -math.expm1(d * math.log1p(-2.0 * normal_cdf(-c)))
    assert exceedance == pytest.approx(alpha, rel=1e-6)
    assert smooth_critical_value(alpha, d) > smooth_critical_value(10 * alpha, d)


def test_null_cdf_monotone_in_d():
    """The limit CDF decreases pointwise in d"""
    # Arrange
    t = np.linspace(0.0, 5.0, 101)

    # Act & Assert
    assert np.all(max_abs_gaussian_cdf(t, 12) <= max_abs_gaussian_cdf(t, 4))


def test_null_cdf_rejects_negative_t():
    with pytest.raises(DomainError):
        max_abs_gaussian_cdf(-0.5, 3)


def test_smooth_test_rejects_far_shift(trig4):
    """Every Y above every X gives Ψ̂ = √(nm/(n+m))·√2"""
    # Arrange
    x = UniSample(np.linspace(0, 1, 60))
    y = UniSample(np.linspace(5, 6, 50))

    # Act
    report = smooth_test(x, y, trig4, 0.05)

    # Assert
    assert report.reject
    assert report.statistic == pytest.approx(math.sqrt(60 * 50 / 110) * math.sqrt(2))
    assert report.critical_value == pytest.approx(smooth_critical_value(0.05, 4))


def test_smooth_test_flags_swap_and_large_d():
    """m > n is reported as swapped; d > min(n, m) adds a warning"""
    # Arrange
    basis = BasisSystem(BasisKind.TRIGONOMETRIC, 6)

    # Act
    report = smooth_test(UniSample([0.1, 0.2, 0.3]), UniSample([0.4, 0.5, 0.6, 0.7]), basis, 0.05)

    # Assert
    assert report.swapped
    assert any("exceeds" in w for w in report.warnings)


def test_oracle_statistic_uses_true_cdf():
    """Ψ(d) with F = uniform is max_k |m^{−1/2}Σψ_k(Y_j)|"""
    # Arrange
    y = UniSample([0.1, 0.4, 0.8])
    basis = BasisSystem(BasisKind.TRIGONOMETRIC, 2)
    expected = max(abs(sum(psi(basis.kind, k, v) for v in y.values)) / math.sqrt(3) for k in (1, 2))

    # Act
    value = oracle_statistic(y, lambda t: np.clip(t, 0, 1), basis)

    # Assert
    assert value == pytest.approx(expected)


def test_oracle_statistic_rejects_invalid_cdf():
    with pytest.raises(DomainError):
        oracle_statistic(UniSample([0.5]), lambda t: t + 1.0, BasisSystem(BasisKind.TRIGONOMETRIC, 1))


def test_exhaustive_pvalue_matches_enumeration():
    """Exhaustive mode counts every split of the pooled sample once"""
    # Arrange
    x, y = UniSample([0.1, 0.5, 0.9, 1.3]), UniSample([1.0, 1.7, 2.2])
    pooled = list(x.values) + list(y.values)
    observed = ks_statistic(x, y)
    count = 0
    splits = list(itertools.combinations(range(7), 3))
    for s in splits:
        ys = [pooled[i] for i in s]
        xs = [pooled[i] for i in range(7) if i not in s]
        count += ks_statistic(UniSample(xs), UniSample(ys)) >= observed - 1e-12
    expected = (1 + count) / (len(splits) + 1)

    # Act
    p_value = permutation_pvalue(ks_statistic, x, y, B=1, exhaustive=True)

    # Assert
    assert p_value == pytest.approx(expected, abs=1e-15)


def test_sampled_pvalue_approaches_exhaustive():
    """Many random permutations approximate the exhaustive p-value"""
    # Arrange
    x, y = UniSample([0.2, 0.6, 1.1, 1.4]), UniSample([0.9, 1.8, 2.5, 3.0])
    exact = permutation_pvalue(cvm_statistic, x, y, B=1, exhaustive=True)

    # Act
    sampled = permutation_pvalue(cvm_statistic, x, y, B=4000, stream=RngStream(3))

    # Assert
    assert abs(sampled - exact) < 0.03


def test_identical_samples_give_zero_statistic_and_no_rejection(stream):
    """KS and CVM on identical samples: statistic 0, p-value 1"""
    # Arrange
    x = UniSample([0.3, 1.2, 2.5, 4.0, 4.1])

    # Act
    ks = ks_test(x, x, 0.05, stream, B=99)
    cvm = cvm_test(x, x, 0.05, stream, B=99)

    # Assert
    assert ks.statistic == 0.0 and ks.p_value == 1.0 and not ks.reject
    assert cvm.statistic == 0.0 and cvm.p_value == 1.0 and not cvm.reject


def test_permutation_test_is_reproducible():
    """Same stream, same p-value"""
    # Arrange
    x, y = UniSample(np.arange(10.0)), UniSample(np.arange(3.5, 12.5))

    # Act
    first = ks_test(x, y, 0.05, RngStream(21), B=199)
    second = ks_test(x, y, 0.05, RngStream(21), B=199)

    # Assert
    assert first.p_value == second.p_value


def test_permutation_requires_stream():
    with pytest.raises(DomainError):
        permutation_pvalue(ks_statistic, UniSample([1.0]), UniSample([2.0]), B=10)


def test_bgx_test_default_basis_and_chi2_calibration():
    """Default BGX uses trig d = 4 and the χ²_4 critical value"""
    # Arrange
    x, y = UniSample(np.linspace(0, 1, 40)), UniSample(np.linspace(0.02, 0.98, 30))

    # Act
    report = bgx_test(x, y)

    # Assert
    assert report.d == 4 and report.basis == "trig"
    assert report.critical_value == pytest.approx(9.487729, abs=1e-6)
    assert report.reject == (report.statistic >= report.critical_value)


def test_schwarz_selects_one_without_signal():
    """Identical samples: the penalty dominates and d̂ = 1"""
    # Arrange
    x = UniSample(np.linspace(0, 1, 50))

    # Act & Assert
    assert select_d_schwarz(x, x, "trig", 10) == 1


def test_schwarz_criterion_is_penalised_quadratic(trig4):
    """T(d) − d·log(n + m) with T the cumulative quadratic statistic"""
    # Arrange
    x, y = UniSample(np.linspace(0, 1, 30)), UniSample(np.linspace(0.3, 1.3, 20))

    # Act
    criterion = schwarz_criterion(x, y, BasisKind.TRIGONOMETRIC, 4)

    # Assert
    for d in range(1, 5):
        quadratic = bgx_statistic(x, y, BasisSystem(BasisKind.TRIGONOMETRIC, d))
        assert criterion[d - 1] == pytest.approx(quadratic - d * math.log(50))


def test_schwarz_smooth_test_reports_selected_d():
    # Arrange
    x, y = UniSample(np.linspace(0, 1, 60)), UniSample(np.linspace(0.5, 1.5, 40))

    # Act
    report = schwarz_smooth_test(x, y, "trig", 0.05, d_max=8)

    # Assert
    assert report.method == "schwarz"
    assert report.d == report.details["selected_d"]
    assert 1 <= report.d <= 8


def test_report_rejects_inconsistent_decision():
    """reject must agree with statistic ≥ critical value"""
    with pytest.raises(InvariantViolation):
        TestReport("smooth", 1.0, True, 0.05, 10, 10, critical_value=2.0)


@pytest.mark.parametrize("alpha", [0.0, 1.0, 1.5])
def test_alpha_outside_unit_interval_rejected(alpha, trig4):
    with pytest.raises(DomainError):
        smooth_test(UniSample([0.1]), UniSample([0.2]), trig4, alpha)
