"""
Experiment Domain Models

Validated descriptions of simulated distributions and Monte Carlo
experiments, plus the records an experiment produces.

Responsibilities:
    - Describe a data generator (null family, numbered example, smooth
      alternative) and parse / print its one-line text form
    - Describe one size or power experiment with all defaults resolved
    - Hold the aggregated result of an experiment at one parameter value

Does NOT:
    - Draw samples (see ``core.generators``)
    - Run replicates (see ``core.services.experiment_service``)
    - Read config files (see ``adapters.config_file``)

Generator text forms:
    null:<name>(key=value, ...)        e.g. ``null:gamma(shape=2, scale=2)``
    example:<id>(<param>[, clip=true]) e.g. ``example:4(1.0)``
    smooth:<basis>(θ1, θ2, ...)        e.g. ``smooth:trig(0.8, 0, 0)``

Example:
    >>> spec = GeneratorSpec.parse("example:1(0.5)")
    >>> spec.param
    0.5
    >>> spec.to_text()
    'example:1(0.5)'
"""

import re
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from config.settings import settings
from core.exceptions import InputError
from core.models.basis import BasisKind

# Parameters accepted by every null family, with their defaults.
NULL_FAMILIES: dict[str, dict[str, float | str]] = {
    "gamma": {"shape": 2.0, "scale": 2.0},
    "logistic": {"loc": 0.0, "scale": 1.0},
    "normal": {"loc": 0.0, "scale": 1.0},
    "pareto": {"a": 0.5, "scale": 1.0, "loc": 1.0},
    "stable": {"alpha": 1.5, "beta": 0.0, "scale": 1.0, "loc": 1.0},
    "t": {"df": 7.0},
    "uniform": {"low": 0.0, "high": 1.0},
    "lognormal": {"mu": 0.0, "sigma": 1.0},
    "mvnormal": {"p": 3.0, "cov": "identity"},
    "mvt": {"p": 3.0, "df": 4.0, "cov": "identity"},
}

MULTIVARIATE_NULLS = frozenset({"mvnormal", "mvt"})

# Parameter name and closed range of each numbered example.
EXAMPLES: dict[int, tuple[str, float, float]] = {
    1: ("mu", 0.0, 1.0),
    2: ("sigma", 0.0, 5.0),
    3: ("a", -1.0, 1.0),
    4: ("c", 0.0, 2.0),
    5: ("c", 0.0, 1.0),
    6: ("mu", 0.0, 1.0),
    7: ("c", 0.0, 2.0),
    8: ("delta", 0.0, 0.5),
    9: ("delta", 0.0, 0.5),
}

# Example 5 with the clip flag accepts c up to 2.
CLIPPED_EXAMPLE5_MAX = 2.0

METHODS = ("smooth", "ks", "cvm", "bgx", "schwarz", "ms", "bf", "mks")
MULTIVARIATE_METHODS = frozenset({"ms", "bf", "mks"})

_SPEC_PATTERN = re.compile(r"^\s*(null|example|smooth)\s*:\s*([A-Za-z0-9_]+)\s*(?:\((.*)\))?\s*$")


class GeneratorFamily(str, Enum):
    NULL = "null"
    EXAMPLE = "example"
    SMOOTH = "smooth"


def _format_number(value: float) -> str:
    return repr(float(value)) if float(value) != int(value) else str(int(value))


def _parse_value(text: str) -> float | str:
    try:
        return float(text)
    except ValueError:
        return text.strip().lower()


class GeneratorSpec(BaseModel):
    """
    A simulated distribution.

    Attributes:
        family: null / example / smooth
        name: Null family name, example number, or basis kind
        params: Null-family parameters (defaults filled in)
        param: Example parameter (μ, σ, a, c or δ)
        theta: Smooth-alternative coefficients θ_1..θ_d
        clip: Example 5 only: allow c > 1 with the clipped density
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    family: GeneratorFamily
    name: str
    params: dict[str, float | str] = Field(default_factory=dict)
    param: float | None = None
    theta: tuple[float, ...] = ()
    clip: bool = False

    @model_validator(mode="after")
    def check_structure(self) -> "GeneratorSpec":
        """Names and parameter slots must fit the family."""
        if self.family is GeneratorFamily.NULL:
            if self.name not in NULL_FAMILIES:
                raise ValueError(f"unknown null family {self.name!r}")
            unknown = set(self.params) - set(NULL_FAMILIES[self.name])
            if unknown:
                raise ValueError(f"unknown parameter(s) {sorted(unknown)} for {self.name}")
            if self.param is not None or self.theta or self.clip:
                raise ValueError("null families take keyword parameters only")
            merged = {**NULL_FAMILIES[self.name], **self.params}
            object.__setattr__(self, "params", merged)
        elif self.family is GeneratorFamily.EXAMPLE:
            if not self.name.isdigit() or int(self.name) not in EXAMPLES:
                raise ValueError(f"unknown example {self.name!r}; expected 1-9")
            if self.param is None:
                raise ValueError(f"example {self.name} needs its parameter")
            if self.clip and self.name != "5":
                raise ValueError("clip applies to example 5 only")
        else:
            BasisKind.parse(self.name)
            if not self.theta:
                raise ValueError("smooth alternatives need at least one θ coefficient")
        return self

    @property
    def example_id(self) -> int | None:
        return int(self.name) if self.family is GeneratorFamily.EXAMPLE else None

    @property
    def p(self) -> int:
        """Dimension of the generated observations."""
        if self.family is GeneratorFamily.NULL and self.name in MULTIVARIATE_NULLS:
            return int(self.params["p"])
        if self.example_id in (6, 7):
            return 3
        if self.example_id in (8, 9):
            return 5
        return 1

    def with_param(self, value: float) -> "GeneratorSpec":
        """Same example at another parameter value."""
        if self.family is not GeneratorFamily.EXAMPLE:
            raise InputError(f"{self.to_text()} has no sweepable parameter")
        return self.model_copy(update={"param": float(value)})

    @classmethod
    def parse(cls, text: str) -> "GeneratorSpec":
        """
        Parse the one-line text form.

        Raises:
            InputError: On grammar errors, unknown names or parameters
        """
        match = _SPEC_PATTERN.match(text)
        if not match:
            raise InputError(f"cannot parse generator {text!r}")
        family, name, body = match.group(1), match.group(2).lower(), match.group(3) or ""
        items = [item.strip() for item in body.split(",") if item.strip()]
        fields: dict = {"family": family, "name": name}
        try:
            if family == "null":
                params = {}
                for item in items:
                    key, sep, value = item.partition("=")
                    if not sep:
                        raise InputError(f"null parameters are key=value, got {item!r}")
                    params[key.strip()] = _parse_value(value)
                fields["params"] = params
            elif family == "example":
                positional = [i for i in items if "=" not in i]
                keywords = dict(i.split("=", 1) for i in items if "=" in i)
                if len(positional) > 1:
                    raise InputError(f"example takes one parameter, got {positional}")
                for key, value in keywords.items():
                    key = key.strip()
                    if key == "clip":
                        fields["clip"] = value.strip().lower() in ("1", "true", "yes")
                    elif positional or key != EXAMPLES.get(int(name), ("",))[0]:
                        raise InputError(f"unknown example parameter {key!r}")
                    else:
                        positional = [value]
                fields["param"] = float(positional[0]) if positional else None
            else:
                fields["theta"] = tuple(float(i) for i in items)
            return cls.model_validate(fields)
        except (ValidationError, ValueError) as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(f"invalid generator {text!r}: {_first_error(exc)}") from None

    def to_text(self) -> str:
        """Inverse of ``parse`` (canonical spelling)."""
        if self.family is GeneratorFamily.NULL:
            body = ", ".join(
                f"{k}={_format_number(v) if isinstance(v, float) else v}"
                for k, v in self.params.items()
            )
            return f"null:{self.name}({body})"
        if self.family is GeneratorFamily.EXAMPLE:
            clip = ", clip=true" if self.clip else ""
            return f"example:{self.name}({_format_number(self.param)}{clip})"
        body = ", ".join(_format_number(t) for t in self.theta)
        return f"smooth:{BasisKind.parse(self.name).value}({body})"


def _first_error(exc: Exception) -> str:
    if isinstance(exc, ValidationError):
        return exc.errors()[0]["msg"]
    return str(exc)


def reference_spec(example_id: int) -> GeneratorSpec:
    """The X-sample distribution each numbered example is compared against."""
    references = {
        1: "null:uniform(low=-1, high=1)",
        2: "null:uniform(low=-1, high=1)",
        3: "null:lognormal(mu=0, sigma=1)",
        4: "null:uniform(low=0, high=1)",
        5: "null:uniform(low=0, high=1)",
        6: "example:6(0)",
        7: "example:7(0)",
        8: "example:8(0)",
        9: "example:9(0)",
    }
    return GeneratorSpec.parse(references[example_id])


class ExperimentConfig(BaseModel):
    """
    One fully resolved Monte Carlo experiment.

    ``f`` generates the X sample and ``g`` the Y sample. When ``f`` is
    omitted it defaults to the reference distribution of an example ``g``
    and to ``g`` itself otherwise. A non-empty ``grid`` makes the
    experiment a power curve over the example parameter of ``g``.

    Attributes:
        name: Label used in output file names
        f, g: Generators for the X and Y samples
        n, m: Sample sizes (≥ 2)
        method: Test procedure label
        basis, d: Orthonormal system (ignored by KS/CVM/BF/MKS)
        alpha: Nominal level
        replicates: Monte Carlo replicates R
        seed: Root seed; replicate r uses ``RngStream(seed).derive(r)``
        jobs: Worker processes
        B: Permutations or bootstrap replicates (method default if None)
        restarts, bootstrap_restarts: Sphere-search budgets (ms / mks)
        directions: Monte Carlo directions for BF
        d_max: Upper bound of the Schwarz rule
        grid: Power-curve parameter values
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str = "experiment"
    f: GeneratorSpec | None = None
    g: GeneratorSpec
    n: int = Field(ge=2)
    m: int = Field(ge=2)
    method: str = "smooth"
    basis: BasisKind = BasisKind.TRIGONOMETRIC
    d: int = Field(default_factory=lambda: settings.DEFAULT_D, ge=1)
    alpha: float = Field(default=0.05, gt=0.0, lt=1.0)
    replicates: int = Field(default=1000, ge=1)
    seed: int = Field(default_factory=lambda: settings.SEED, ge=0, lt=2**64)
    jobs: int = Field(default_factory=lambda: settings.JOBS, ge=1)
    B: int | None = Field(default=None, ge=1)
    restarts: int | None = Field(default=None, ge=1)
    bootstrap_restarts: int | None = Field(default=None, ge=1)
    directions: int | None = Field(default=None, ge=1)
    d_max: int | None = Field(default=None, ge=1)
    grid: tuple[float, ...] = ()

    @field_validator("method")
    @classmethod
    def validate_method(cls, v: str) -> str:
        v = v.strip().lower()
        if v not in METHODS:
            raise ValueError(f"unknown method {v!r}; expected one of {', '.join(METHODS)}")
        return v

    @field_validator("basis", mode="before")
    @classmethod
    def validate_basis(cls, v):
        return BasisKind.parse(v)

    @model_validator(mode="after")
    def resolve_reference(self) -> "ExperimentConfig":
        if self.f is None:
            example = self.g.example_id
            object.__setattr__(self, "f", reference_spec(example) if example else self.g)
        if self.f.p != self.g.p:
            raise ValueError(f"F generates dimension {self.f.p}, G dimension {self.g.p}")
        if self.grid and self.g.family is not GeneratorFamily.EXAMPLE:
            raise ValueError("a power grid needs an example generator for g")
        return self

    @property
    def is_power_curve(self) -> bool:
        return bool(self.grid)

    @property
    def p(self) -> int:
        return self.g.p

    @property
    def slug(self) -> str:
        """File-name stem identifying the experiment."""
        return f"{self.name}__{self.method}_{self.basis.value}_d{self.d}_n{self.n}_m{self.m}"


class ExperimentResult(BaseModel):
    """
    Aggregated rejections of one experiment at one parameter value.

    ``se`` is the Monte Carlo standard error √(rate·(1 − rate)/R).
    """

    model_config = ConfigDict(frozen=True)

    param: float | None
    rate: float
    se: float
    R: int
    seed: int
    rejections: int
