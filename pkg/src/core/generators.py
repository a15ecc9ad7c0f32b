"""
Simulation Generators Module

Samplers, densities and distribution functions for every simulated design:
the null families, the numbered examples and the smooth alternatives
ρ_θ(z) = C_d(θ)·exp{Σ_k θ_k ψ_k(z)} on [0, 1].

Responsibilities:
    - Range-check generator parameters (``validate_spec``)
    - Draw i.i.d. samples from an ``RngStream`` (``sample``)
    - Evaluate univariate densities and distribution functions

Samplers:
    - Null families: ``scipy.stats`` frozen distributions; Pareto(a, scale, loc)
      is the Lomax law with CDF 1 − (scale/(x − loc + scale))^a on x > loc;
      the stable law uses the Chambers-Mallows-Stuck construction of
      ``scipy.stats.levy_stable``
    - Multivariate t_ν(0, Σ): Gaussian N(0, Σ) divided by √(χ²_ν/ν)
    - Examples 1, 2, 4, 5 and smooth alternatives: rejection from the uniform
      envelope; Example 3: lognormal proposals accepted with probability
      {1 + a·sin(2πW)}/(1 + |a|)
    - Examples 6, 7: two i.i.d. coordinates plus 0.3·Y₁ + 0.7·Y₂
    - Examples 8, 9: Y = A·Z with A = [[√(1−δ), √δ], [√δ, √(1−δ)]] ⊕ I₃

Example:
    >>> spec = GeneratorSpec.parse("example:4(1.0)")
    >>> y = sample(spec, 150, RngStream(7))
    >>> round(density(spec, 0.0), 6)
"""

import math
from functools import lru_cache

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import stats

from config.logging import logger
from config.settings import settings
from core.basis import basis_table
from core.exceptions import DomainError, EnvelopeError
from core.models.basis import BasisKind
from core.models.experiment import (
    CLIPPED_EXAMPLE5_MAX,
    EXAMPLES,
    GeneratorFamily,
    GeneratorSpec,
)
from core.models.samples import MultiSample, UniSample
from core.validators import require_count, require_in_range
from utils.quadrature import integrate_adaptive
from utils.random import RngStream

# Grid size and safety factor for the smooth-alternative envelope.
ENVELOPE_GRID = 10_000
ENVELOPE_FACTOR = 1.05

_MIXING_WEIGHTS = np.array([0.3, 0.7])


# --------------------------------------------------------------------------- #
# Validation
# --------------------------------------------------------------------------- #


def _positive(params: dict, *names: str) -> None:
    for name in names:
        value = params[name]
        if not isinstance(value, float) or not value > 0:
            raise DomainError(f"{name} must be > 0, got {value!r}")


def validate_spec(spec: GeneratorSpec) -> GeneratorSpec:
    """
    Check parameter ranges.

    Raises:
        DomainError: If a parameter lies outside its family's range
    """
    if spec.family is GeneratorFamily.EXAMPLE:
        name, low, high = EXAMPLES[spec.example_id]
        if spec.example_id == 5 and spec.clip:
            high = CLIPPED_EXAMPLE5_MAX
        require_in_range(spec.param, low, high, name)
        return spec
    if spec.family is GeneratorFamily.SMOOTH:
        if not all(math.isfinite(t) for t in spec.theta):
            raise DomainError("θ coefficients must be finite")
        return spec

    params = spec.params
    for key, value in params.items():
        if key != "cov" and not isinstance(value, float):
            raise DomainError(f"{key} must be numeric, got {value!r}")
    if spec.name == "gamma":
        _positive(params, "shape", "scale")
    elif spec.name in ("logistic", "normal"):
        _positive(params, "scale")
    elif spec.name == "pareto":
        _positive(params, "a", "scale")
    elif spec.name == "stable":
        require_in_range(params["alpha"], 0.1, 2.0, "alpha")
        require_in_range(params["beta"], -1.0, 1.0, "beta")
        _positive(params, "scale")
    elif spec.name == "t":
        _positive(params, "df")
    elif spec.name == "uniform":
        if not params["low"] < params["high"]:
            raise DomainError("uniform needs low < high")
    elif spec.name == "lognormal":
        _positive(params, "sigma")
    else:
        require_count(params["p"], "p", 1)
        if spec.name == "mvt":
            _positive(params, "df")
        if params["cov"] not in ("identity", "ar1"):
            raise DomainError(f"cov must be 'identity' or 'ar1', got {params['cov']!r}")
    return spec


# --------------------------------------------------------------------------- #
# Null families
# --------------------------------------------------------------------------- #


def null_distribution(spec: GeneratorSpec):
    """Frozen ``scipy.stats`` distribution of a univariate null family."""
    p = spec.params
    if spec.name == "gamma":
        return stats.gamma(p["shape"], scale=p["scale"])
    if spec.name == "logistic":
        return stats.logistic(loc=p["loc"], scale=p["scale"])
    if spec.name == "normal":
        return stats.norm(loc=p["loc"], scale=p["scale"])
    if spec.name == "pareto":
        return stats.lomax(p["a"], loc=p["loc"], scale=p["scale"])
    if spec.name == "stable":
        return stats.levy_stable(p["alpha"], p["beta"], loc=p["loc"], scale=p["scale"])
    if spec.name == "t":
        return stats.t(p["df"])
    if spec.name == "uniform":
        return stats.uniform(loc=p["low"], scale=p["high"] - p["low"])
    if spec.name == "lognormal":
        return stats.lognorm(p["sigma"], scale=math.exp(p["mu"]))
    raise DomainError(f"{spec.name} is not a univariate family")


def covariance(p: int, kind: str, rho: float | None = None) -> NDArray[np.float64]:
    """
    I_p or the AR(1) matrix Σ_{ij} = ρ^{|i−j|} (ρ defaults to ``settings.AR1_RHO``).
    """
    if kind == "identity":
        return np.eye(p)
    rho = settings.AR1_RHO if rho is None else rho
    index = np.arange(p)
    return rho ** np.abs(index[:, None] - index[None, :])


def _multivariate_t(
    n: int, p: int, df: float, sigma: NDArray[np.float64], stream: RngStream
) -> NDArray[np.float64]:
    factor = np.linalg.cholesky(sigma)
    z = stream.gaussian((n, p)) @ factor.T
    w = stream.generator.chisquare(df, size=n) / df
    return z / np.sqrt(w)[:, None]


def _sample_null(spec: GeneratorSpec, n: int, stream: RngStream) -> NDArray[np.float64]:
    if spec.name == "mvnormal":
        p = int(spec.params["p"])
        factor = np.linalg.cholesky(covariance(p, spec.params["cov"]))
        return stream.gaussian((n, p)) @ factor.T
    if spec.name == "mvt":
        p = int(spec.params["p"])
        return _multivariate_t(n, p, spec.params["df"], covariance(p, spec.params["cov"]), stream)
    return np.asarray(null_distribution(spec).rvs(size=n, random_state=stream.generator))


# --------------------------------------------------------------------------- #
# Example densities
# --------------------------------------------------------------------------- #


def _local_bump(x: NDArray[np.float64], mu: float) -> NDArray[np.float64]:
    """g_μ(x) = 1/2 + 2x(μ − |x|)/μ² on |x| < μ, 1/2 elsewhere in [−1, 1]."""
    g = np.full_like(x, 0.5)
    if mu > 0:
        inside = np.abs(x) < mu
        g[inside] += 2.0 * x[inside] * (mu - np.abs(x[inside])) / mu**2
    return np.where(np.abs(x) <= 1.0, g, 0.0)


def _sine_wave(x: NDArray[np.float64], sigma: float) -> NDArray[np.float64]:
    """g_σ(x) = {1 + sin(2πσx)}/2 on [−1, 1]."""
    return np.where(np.abs(x) <= 1.0, 0.5 * (1.0 + np.sin(2.0 * math.pi * sigma * x)), 0.0)


@lru_cache(maxsize=256)
def example4_normaliser(c: float) -> float:
    """Z(c) = ∫₀¹ exp{c·sin(5πx)} dx."""
    return integrate_adaptive(
        lambda t: math.exp(c * math.sin(5.0 * math.pi * t)),
        0.0,
        1.0,
        breakpoints=[k / 5.0 for k in range(1, 5)],
    )


def _example5_roots(c: float) -> list[float]:
    """Zeros of 1 + c·cos(5πx) in (0, 1) for c > 1."""
    phase = math.acos(-1.0 / c)
    roots = []
    for j in range(3):
        for angle in (phase + 2 * math.pi * j, 2 * math.pi * (j + 1) - phase):
            x = angle / (5.0 * math.pi)
            if 0.0 < x < 1.0:
                roots.append(x)
    return sorted(roots)


@lru_cache(maxsize=256)
def example5_normaliser(c: float) -> float:
    """∫₀¹ max{0, 1 + c·cos(5πx)} dx; equals 1 for c ≤ 1."""
    if c <= 1.0:
        return 1.0
    return integrate_adaptive(
        lambda t: max(0.0, 1.0 + c * math.cos(5.0 * math.pi * t)),
        0.0,
        1.0,
        breakpoints=_example5_roots(c),
    )


def _example4(x: NDArray[np.float64], c: float) -> NDArray[np.float64]:
    inside = (x >= 0.0) & (x <= 1.0)
    return np.where(inside, np.exp(c * np.sin(5.0 * math.pi * x)) / example4_normaliser(c), 0.0)


def _example5(x: NDArray[np.float64], c: float) -> NDArray[np.float64]:
    inside = (x >= 0.0) & (x <= 1.0)
    g = np.maximum(0.0, 1.0 + c * np.cos(5.0 * math.pi * x)) / example5_normaliser(c)
    return np.where(inside, g, 0.0)


def _example3(x: NDArray[np.float64], a: float) -> NDArray[np.float64]:
    """f(x)·{1 + a·sin(2π log x)} with f the standard lognormal density."""
    positive = x > 0
    safe = np.where(positive, x, 1.0)
    f = stats.lognorm.pdf(safe, 1.0)
    return np.where(positive, f * (1.0 + a * np.sin(2.0 * math.pi * np.log(safe))), 0.0)


@lru_cache(maxsize=128)
def smooth_normaliser(kind: BasisKind, theta: tuple[float, ...]) -> float:
    """C_d(θ)^{−1} = ∫₀¹ exp{θᵀψ(z)} dz."""
    coefficients = np.asarray(theta)

    def integrand(z: float) -> float:
        return math.exp(float((basis_table(kind, coefficients.size, np.array([z])) @ coefficients)[0]))

    breakpoints = [k / (2 * coefficients.size) for k in range(1, 2 * coefficients.size)]
    return integrate_adaptive(integrand, 0.0, 1.0, breakpoints=breakpoints)


def _smooth(x: NDArray[np.float64], kind: BasisKind, theta: tuple[float, ...]) -> NDArray[np.float64]:
    inside = (x >= 0.0) & (x <= 1.0)
    z = np.clip(x, 0.0, 1.0)
    exponent = basis_table(kind, len(theta), z) @ np.asarray(theta)
    return np.where(inside, np.exp(exponent) / smooth_normaliser(kind, theta), 0.0)


def density(spec: GeneratorSpec, x: ArrayLike) -> float | NDArray[np.float64]:
    """
    Density of a univariate generator at ``x`` (scalar or array).

    Raises:
        DomainError: For multivariate generators or invalid parameters
    """
    validate_spec(spec)
    if spec.p != 1:
        raise DomainError(f"{spec.to_text()} is multivariate; density is univariate only")
    points = np.asarray(x, dtype=float)
    flat = points.reshape(-1)
    if spec.family is GeneratorFamily.NULL:
        values = null_distribution(spec).pdf(flat)
    elif spec.family is GeneratorFamily.SMOOTH:
        values = _smooth(flat, BasisKind.parse(spec.name), spec.theta)
    else:
        values = {
            1: _local_bump,
            2: _sine_wave,
            3: _example3,
            4: _example4,
            5: _example5,
        }[spec.example_id](flat, spec.param)
    values = np.asarray(values, dtype=float)
    return float(values[0]) if points.ndim == 0 else values.reshape(points.shape)


def support(spec: GeneratorSpec) -> tuple[float, float]:
    """Interval carrying the distribution (may be infinite)."""
    if spec.family is GeneratorFamily.SMOOTH:
        return 0.0, 1.0
    if spec.family is GeneratorFamily.EXAMPLE:
        return {1: (-1.0, 1.0), 2: (-1.0, 1.0), 3: (0.0, math.inf)}.get(spec.example_id, (0.0, 1.0))
    lower, upper = null_distribution(spec).support()
    return float(lower), float(upper)


def _breakpoints(spec: GeneratorSpec) -> list[float]:
    if spec.family is GeneratorFamily.SMOOTH:
        k = len(spec.theta)
        return [j / (2 * k) for j in range(1, 2 * k)]
    if spec.example_id == 1:
        return [-spec.param, 0.0, spec.param]
    if spec.example_id == 2:
        return list(np.linspace(-1.0, 1.0, 21)[1:-1])
    if spec.example_id == 4:
        return [k / 5.0 for k in range(1, 5)]
    if spec.example_id == 5:
        roots = _example5_roots(spec.param) if spec.param > 1.0 else []
        return sorted(roots + [k / 5.0 for k in range(1, 5)])
    return []


def cdf(spec: GeneratorSpec, x: float) -> float:
    """
    Distribution function of a univariate generator.

    Null families use the closed form; the examples and smooth alternatives
    integrate their density (Example 3 on the log scale).
    """
    validate_spec(spec)
    if spec.p != 1:
        raise DomainError(f"{spec.to_text()} is multivariate; cdf is univariate only")
    if spec.family is GeneratorFamily.NULL:
        return float(null_distribution(spec).cdf(x))
    lower, upper = support(spec)
    if x <= lower:
        return 0.0
    if x >= upper:
        return 1.0
    if spec.example_id == 3:
        a = spec.param
        w = math.log(x)
        wave = integrate_adaptive(
            lambda t: stats.norm.pdf(t) * math.sin(2.0 * math.pi * t), -40.0, w
        )
        return float(stats.norm.cdf(w) + a * wave)
    inner = [b for b in _breakpoints(spec) if b < x]
    value = integrate_adaptive(
        lambda t: float(density(spec, t)), lower, x, breakpoints=inner
    )
    return min(1.0, max(0.0, value))


# --------------------------------------------------------------------------- #
# Rejection sampling
# --------------------------------------------------------------------------- #


def _rejection(
    n: int,
    stream: RngStream,
    propose,
    acceptance,
    label: str,
) -> NDArray[np.float64]:
    """
    Draw ``n`` accepted proposals.

    ``propose(k)`` returns k candidates and ``acceptance(candidates)`` their
    acceptance probabilities, which must lie in [0, 1].
    """
    accepted: list[NDArray[np.float64]] = []
    total = proposed = 0
    batch = max(2 * n, 64)
    while total < n:
        candidates = propose(batch)
        probability = acceptance(candidates)
        if np.any(probability > 1.0 + 1e-12):
            raise EnvelopeError(
                f"{label}: density exceeds the envelope by a factor {float(np.max(probability)):.4f}"
            )
        keep = candidates[stream.uniform(batch) < probability]
        accepted.append(keep)
        total += keep.size
        proposed += batch
    logger.debug("%s: acceptance rate %.3f", label, total / proposed)
    return np.concatenate(accepted)[:n]


def _uniform_proposal(low: float, high: float, stream: RngStream):
    return lambda k: low + (high - low) * stream.uniform(k)


@lru_cache(maxsize=128)
def smooth_envelope(kind: BasisKind, theta: tuple[float, ...]) -> float:
    """sup ρ_θ estimated on a 10⁴-point grid, times the safety factor 1.05."""
    grid = np.linspace(0.0, 1.0, ENVELOPE_GRID)
    return ENVELOPE_FACTOR * float(np.max(_smooth(grid, kind, theta)))


def _sample_example_1d(example: int, c: float, n: int, stream: RngStream) -> NDArray[np.float64]:
    label = f"example {example}"
    if example == 1:
        return _rejection(n, stream, _uniform_proposal(-1, 1, stream), lambda x: _local_bump(x, c), label)
    if example == 2:
        return _rejection(n, stream, _uniform_proposal(-1, 1, stream), lambda x: _sine_wave(x, c), label)
    if example == 3:

        def accept(w: NDArray[np.float64]) -> NDArray[np.float64]:
            return (1.0 + c * np.sin(2.0 * math.pi * w)) / (1.0 + abs(c))

        return np.exp(_rejection(n, stream, stream.gaussian, accept, label))
    if example == 4:

        def accept(x: NDArray[np.float64]) -> NDArray[np.float64]:
            return np.exp(c * np.sin(5.0 * math.pi * x) - c)

        return _rejection(n, stream, _uniform_proposal(0, 1, stream), accept, label)

    def accept(x: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.maximum(0.0, 1.0 + c * np.cos(5.0 * math.pi * x)) / (1.0 + c)

    return _rejection(n, stream, _uniform_proposal(0, 1, stream), accept, label)


def mixing_matrix(delta: float) -> NDArray[np.float64]:
    """A = [[√(1−δ), √δ], [√δ, √(1−δ)]] ⊕ I₃ (orthogonal only at δ = 0)."""
    a = np.eye(5)
    a[:2, :2] = [[math.sqrt(1 - delta), math.sqrt(delta)], [math.sqrt(delta), math.sqrt(1 - delta)]]
    return a


def _sample_example(spec: GeneratorSpec, n: int, stream: RngStream) -> NDArray[np.float64]:
    example, c = spec.example_id, spec.param
    if example <= 5:
        return _sample_example_1d(example, c, n, stream)
    if example in (6, 7):
        base = 1 if example == 6 else 4
        pairs = _sample_example_1d(base, c, 2 * n, stream).reshape(n, 2)
        return np.column_stack([pairs, pairs @ _MIXING_WEIGHTS])
    if example == 8:
        z = stream.gaussian((n, 5))
    else:
        z = _multivariate_t(n, 5, 4.0, np.eye(5), stream)
    return z @ mixing_matrix(c).T


def _sample_smooth(spec: GeneratorSpec, n: int, stream: RngStream) -> NDArray[np.float64]:
    kind = BasisKind.parse(spec.name)
    envelope = smooth_envelope(kind, spec.theta)
    return _rejection(
        n,
        stream,
        _uniform_proposal(0, 1, stream),
        lambda z: _smooth(z, kind, spec.theta) / envelope,
        f"smooth {spec.to_text()}",
    )


def sample(spec: GeneratorSpec, n: int, stream: RngStream) -> UniSample | MultiSample:
    """
    Draw ``n`` i.i.d. observations.

    Returns:
        UniSample for univariate generators, MultiSample otherwise

    Raises:
        DomainError: On invalid parameters or n < 1
        EnvelopeError: If a smooth-alternative density exceeds its envelope
    """
    n = require_count(n, "n")
    validate_spec(spec)
    if spec.family is GeneratorFamily.NULL:
        values = _sample_null(spec, n, stream)
    elif spec.family is GeneratorFamily.EXAMPLE:
        values = _sample_example(spec, n, stream)
    else:
        values = _sample_smooth(spec, n, stream)
    return UniSample(values) if spec.p == 1 else MultiSample(values)


def generator_notes(spec: GeneratorSpec) -> list[str]:
    """Parameter conventions a generator relies on, for result metadata."""
    notes = []
    if spec.family is GeneratorFamily.NULL:
        if spec.name == "pareto":
            notes.append("pareto(a, scale, loc): Lomax law, CDF 1 - (scale/(x - loc + scale))^a")
        elif spec.name == "stable":
            notes.append("stable(alpha, beta, scale, loc): scipy levy_stable parameterisation")
        if spec.params.get("cov") == "ar1":
            notes.append(f"covariance: AR(1) with rho={settings.AR1_RHO!r}")
    elif spec.example_id == 4:
        notes.append("example 4 density normalised by the numerical integral Z(c)")
    elif spec.example_id == 5 and spec.clip:
        notes.append("example 5 clipped: max(0, 1 + c cos(5 pi x)) renormalised for c > 1")
    return notes
