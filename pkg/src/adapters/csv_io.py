"""
CSV Adapter Module

This module reads observation files and writes result tables.

Responsibilities:
    - Parse comma-separated numeric files into ``UniSample`` / ``MultiSample``
    - Report malformed rows as ``InputError`` naming the file and line
    - Write experiment results and calibration curves with a stable layout

Input format:
    One observation per line, ``.`` as decimal separator, columns separated
    by commas. An optional single header row (for example ``value`` or
    ``x1,x2,x3``) is skipped. Blank lines are ignored.

Output format:
    Results files have the header ``param,rate,se,R,seed``; ``param`` is
    empty for size experiments. Floats are written with ``repr`` so reruns
    produce identical bytes.

Example:
    >>> x = read_uni_csv("x.csv")
    >>> write_results_csv("size.csv", [result])
"""

import csv
import math
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Iterable, Iterator, Sequence, TextIO

from core.exceptions import InputError
from core.models.experiment import ExperimentResult
from core.models.samples import MultiSample, UniSample

RESULT_HEADER = ("param", "rate", "se", "R", "seed")


def _parse_row(cells: list[str]) -> list[float] | None:
    """Floats of a row, or None when any cell is not a number."""
    try:
        return [float(cell) for cell in cells]
    except ValueError:
        return None


def read_rows(path: str | Path) -> list[list[float]]:
    """
    Numeric rows of a CSV file with consistent width.

    Raises:
        InputError: If the file is missing, empty, has a non-numeric row
            after the first, a non-finite value, or rows of different widths
    """
    source = str(path)
    try:
        handle = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot open file: {exc.strerror}", source=source) from None

    with handle:
        try:
            rows = _numeric_rows(handle, source)
        except UnicodeDecodeError:
            raise InputError("file is not valid UTF-8 text", source=source) from None

    if not rows:
        raise InputError("file contains no observations", source=source)
    return rows


def _numeric_rows(handle: TextIO, source: str) -> list[list[float]]:
    rows: list[list[float]] = []
    width: int | None = None
    for line_no, cells in enumerate(csv.reader(handle), start=1):
        cells = [cell.strip() for cell in cells]
        if not cells or all(cell == "" for cell in cells):
            continue
        values = _parse_row(cells)
        if values is None:
            if width is None and not rows:
                # header row
                width = len(cells)
                continue
            raise InputError(f"non-numeric value in row {cells!r}", line_no, source)
        if not all(math.isfinite(v) for v in values):
            raise InputError("values must be finite", line_no, source)
        if width is None:
            width = len(values)
        elif len(values) != width:
            raise InputError(
                f"row has {len(values)} column(s), expected {width}", line_no, source
            )
        rows.append(values)
    return rows


def read_uni_csv(path: str | Path) -> UniSample:
    """
    Univariate sample from a one-column CSV file.

    Raises:
        InputError: If the file is malformed or has more than one column
    """
    rows = read_rows(path)
    if len(rows[0]) != 1:
        raise InputError(f"expected one column, found {len(rows[0])}", source=str(path))
    return UniSample([row[0] for row in rows])


def read_multi_csv(path: str | Path) -> MultiSample:
    """p-dimensional sample, one observation per row."""
    return MultiSample(read_rows(path))


def format_number(value: float | int | None) -> str:
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


@contextmanager
def _open_output(target: str | Path | TextIO | None) -> Iterator[TextIO]:
    if target is None or target == "-":
        yield sys.stdout
    elif hasattr(target, "write"):
        yield target
    else:
        path = Path(target)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="", encoding="utf-8") as handle:
            yield handle


def write_table(
    target: str | Path | TextIO | None,
    header: Sequence[str],
    rows: Iterable[Sequence[float | int | None]],
) -> None:
    """Write a header and numeric rows; ``None`` or ``"-"`` means stdout."""
    with _open_output(target) as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_number(value) for value in row])


def write_results_csv(
    target: str | Path | TextIO | None, results: Iterable[ExperimentResult]
) -> None:
    """Results file with header ``param,rate,se,R,seed``."""
    write_table(
        target,
        RESULT_HEADER,
        ((r.param, r.rate, r.se, r.R, r.seed) for r in results),
    )
