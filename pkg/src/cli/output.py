"""
Output helpers shared by the command handlers.
"""

import sys
from pathlib import Path

from config.settings import settings


def emit(text: str, out: str | None) -> None:
    """Write ``text`` to ``out``, or to stdout when ``out`` is None or ``-``."""
    if out is None or out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def resolve_seed(seed: int | None) -> int:
    """The given seed, or ``settings.SEED`` (env ``SMOOTHTEST_SEED``)."""
    return settings.SEED if seed is None else seed
