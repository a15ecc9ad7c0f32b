"""
Logging configuration.

Exposes the toolkit-wide ``logger``; every module logs through it so one
handler and one level (``settings.LOG_LEVEL``) govern all output. Logs go to
stderr so JSON reports on stdout stay machine-readable.

Example:
    >>> from config.logging import logger
    >>> logger.info("Running %d replicates", 2000)
"""

import logging
import sys

from config.settings import settings

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: str | None = None) -> logging.Logger:
    """
    Configure and return the toolkit logger.

    Safe to call repeatedly; the handler is installed once and only the
    level is updated afterwards.

    Args:
        level: Level name overriding ``settings.LOG_LEVEL``

    Returns:
        logging.Logger: The ``smoothtest`` logger
    """
    log = logging.getLogger(settings.APP_NAME)
    if not log.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        log.addHandler(handler)
        log.propagate = False
    log.setLevel((level or settings.LOG_LEVEL).upper())
    return log


logger = configure_logging()
