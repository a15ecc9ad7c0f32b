"""
Experiment Config File Adapter

This module parses the flat ``key = value`` experiment file format into
validated ``ExperimentConfig`` objects.

Grammar:
    - One ``key = value`` assignment per line
    - ``#`` starts a comment; blank lines are ignored
    - Keys may appear once; unknown keys are rejected
    - ``f``, ``g``, ``sizes``, ``method``, ``basis`` and ``d`` accept a
      comma-separated list; the file then describes the cartesian product
      of all listed values. Commas inside parentheses do not split.
    - ``sizes`` items are ``NxM`` (e.g. ``180x150``); alternatively give
      ``n`` and ``m`` separately
    - ``grid`` is a list of parameter values or ``start:stop:step``

Example file:
    # Univariate size, Gamma null
    name = size_gamma
    g = null:gamma(shape=2, scale=2)
    sizes = 80x60, 120x90, 180x150
    method = smooth
    d = 4, 8, 12
    replicates = 2000
    seed = 1

Example:
    >>> configs = load_config("configs/size_gamma.cfg")
    >>> len(configs)
    9
"""

import itertools
import re
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import ValidationError

from config.logging import logger
from core.exceptions import InputError
from core.generators import validate_spec
from core.models.experiment import ExperimentConfig, GeneratorFamily, GeneratorSpec

SCALAR_KEYS = frozenset(
    {
        "name",
        "n",
        "m",
        "alpha",
        "replicates",
        "seed",
        "jobs",
        "B",
        "restarts",
        "bootstrap_restarts",
        "directions",
        "d_max",
        "grid",
    }
)
LIST_KEYS = ("f", "g", "sizes", "method", "basis", "d")
KNOWN_KEYS = SCALAR_KEYS | set(LIST_KEYS)

_KEY_PATTERN = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_SIZE_PATTERN = re.compile(r"^\s*(\d+)\s*[xX]\s*(\d+)\s*$")


def split_top_level(text: str) -> list[str]:
    """
    Split at commas outside parentheses.

    Raises:
        InputError: On unbalanced parentheses
    """
    items, depth, current = [], 0, []
    for char in text:
        if char == "(":
            depth += 1
        elif char == ")":
            depth -= 1
            if depth < 0:
                raise InputError(f"unbalanced ')' in {text!r}")
        if char == "," and depth == 0:
            items.append("".join(current).strip())
            current = []
        else:
            current.append(char)
    if depth != 0:
        raise InputError(f"unbalanced '(' in {text!r}")
    items.append("".join(current).strip())
    return [item for item in items if item]


def parse_assignments(text: str, source: str | None = None) -> dict[str, tuple[str, int]]:
    """
    ``{key: (raw value, line number)}`` of a config text.

    Raises:
        InputError: On a line without ``=``, a bad or duplicate key, an
            unknown key, or an empty value
    """
    assignments: dict[str, tuple[str, int]] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep:
            raise InputError(f"expected 'key = value', got {line!r}", line_no, source)
        if not _KEY_PATTERN.match(key):
            raise InputError(f"invalid key {key!r}", line_no, source)
        if key not in KNOWN_KEYS:
            raise InputError(
                f"unknown key {key!r}; expected one of {', '.join(sorted(KNOWN_KEYS))}",
                line_no,
                source,
            )
        if key in assignments:
            raise InputError(
                f"duplicate key {key!r} (first set on line {assignments[key][1]})",
                line_no,
                source,
            )
        if not value:
            raise InputError(f"empty value for {key!r}", line_no, source)
        assignments[key] = (value, line_no)
    return assignments


def _parse_int(value: str, key: str, line: int, source: str | None) -> int:
    try:
        return int(value)
    except ValueError:
        raise InputError(f"{key} must be an integer, got {value!r}", line, source) from None


def _parse_float(value: str, key: str, line: int, source: str | None) -> float:
    try:
        return float(value)
    except ValueError:
        raise InputError(f"{key} must be a number, got {value!r}", line, source) from None


def parse_grid(value: str, line: int | None = None, source: str | None = None) -> tuple[float, ...]:
    """
    Grid values from a list or ``start:stop:step`` (stop included).

    Raises:
        InputError: On non-numeric items or a non-positive step
    """
    if ":" in value:
        parts = value.split(":")
        if len(parts) != 3:
            raise InputError(f"grid range must be start:stop:step, got {value!r}", line, source)
        start, stop, step = (_parse_float(p.strip(), "grid", line, source) for p in parts)
        if step <= 0 or stop < start:
            raise InputError(f"grid range {value!r} is empty", line, source)
        count = int(round((stop - start) / step)) + 1
        return tuple(float(v) for v in np.round(start + step * np.arange(count), 12))
    return tuple(_parse_float(item, "grid", line, source) for item in split_top_level(value))


def _parse_sizes(value: str, line: int, source: str | None) -> list[tuple[int, int]]:
    sizes = []
    for item in split_top_level(value):
        match = _SIZE_PATTERN.match(item)
        if not match:
            raise InputError(f"sample sizes must look like 180x150, got {item!r}", line, source)
        sizes.append((int(match.group(1)), int(match.group(2))))
    return sizes


def _parse_generators(value: str, line: int, source: str | None) -> list[GeneratorSpec]:
    specs = []
    for item in split_top_level(value):
        try:
            specs.append(GeneratorSpec.parse(item))
        except InputError as exc:
            raise InputError(str(exc), line, source) from None
    return specs


def _generator_tags(specs: list[GeneratorSpec]) -> list[str]:
    """Short labels distinguishing expanded generators in output names."""
    if len(specs) == 1:
        return [""]
    tags = []
    for spec in specs:
        if spec.family is GeneratorFamily.NULL:
            tags.append(spec.name)
        elif spec.family is GeneratorFamily.EXAMPLE:
            tags.append(f"ex{spec.name}")
        else:
            tags.append(f"smooth_{spec.name}")
    if len(set(tags)) != len(tags):
        tags = [f"{tag}{k}" for k, tag in enumerate(tags, start=1)]
    return tags


def build_configs(
    assignments: dict[str, tuple[str, int]], source: str | None = None
) -> list[ExperimentConfig]:
    """
    Expand parsed assignments into experiment configurations.

    Raises:
        InputError: On malformed values or invalid combinations
        DomainError: On generator parameters outside their ranges
    """
    if "g" not in assignments:
        raise InputError("missing required key 'g'", source=source)
    if "sizes" in assignments and ("n" in assignments or "m" in assignments):
        line = assignments["sizes"][1]
        raise InputError("give either 'sizes' or 'n' and 'm', not both", line, source)

    scalars: dict[str, Any] = {}
    for key in SCALAR_KEYS & set(assignments):
        value, line = assignments[key]
        if key == "name":
            scalars[key] = value
        elif key == "grid":
            scalars[key] = parse_grid(value, line, source)
        elif key == "alpha":
            scalars[key] = _parse_float(value, key, line, source)
        else:
            scalars[key] = _parse_int(value, key, line, source)

    g_specs = _parse_generators(*assignments["g"], source)
    f_specs: list[GeneratorSpec | None] = (
        _parse_generators(*assignments["f"], source) if "f" in assignments else [None]
    )
    if "sizes" in assignments:
        sizes = _parse_sizes(*assignments["sizes"], source)
    elif "n" in assignments and "m" in assignments:
        sizes = [(scalars.pop("n"), scalars.pop("m"))]
    else:
        raise InputError("missing sample sizes: set 'sizes' or both 'n' and 'm'", source=source)

    def listed(key: str) -> list[Any]:
        if key not in assignments:
            return [None]
        value, line = assignments[key]
        items = split_top_level(value)
        if key == "d":
            return [_parse_int(item, key, line, source) for item in items]
        return items

    g_tags = _generator_tags(g_specs)
    base_name = scalars.pop("name", Path(source).stem if source else "experiment")
    configs = []
    for f_spec, (g_spec, tag), (n, m), method, basis, d in itertools.product(
        f_specs, zip(g_specs, g_tags), sizes, listed("method"), listed("basis"), listed("d")
    ):
        fields = {
            **scalars,
            "name": f"{base_name}_{tag}" if tag else base_name,
            "g": g_spec,
            "n": n,
            "m": m,
        }
        for key, value in (("f", f_spec), ("method", method), ("basis", basis), ("d", d)):
            if value is not None:
                fields[key] = value
        try:
            cfg = ExperimentConfig.model_validate(fields)
        except ValidationError as exc:
            error = exc.errors()[0]
            where = ".".join(str(part) for part in error["loc"]) or "config"
            raise InputError(f"{where}: {error['msg']}", source=source) from None
        validate_spec(cfg.f)
        validate_spec(cfg.g)
        for value in cfg.grid:
            validate_spec(cfg.g.with_param(value))
        configs.append(cfg)

    logger.info("%s: %d experiment(s)", source or "config", len(configs))
    return configs


def parse_config(text: str, source: str | None = None) -> list[ExperimentConfig]:
    """Experiment configurations described by a config text."""
    return build_configs(parse_assignments(text, source), source)


def load_config(path: str | Path) -> list[ExperimentConfig]:
    """
    Experiment configurations described by a config file.

    Raises:
        InputError: If the file cannot be read or is malformed
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read config: {exc.strerror}", source=str(path)) from None
    except UnicodeDecodeError:
        raise InputError("config is not valid UTF-8 text", source=str(path)) from None
    return parse_config(text, str(path))
