"""
Logging Configuration
Centralized logging setup for SpinXfer.

Records go to stderr; stdout is reserved for result tables.
"""

import logging
import sys
from typing import Optional, TextIO

from config.settings import settings

DEFAULT_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - [%(filename)s:%(lineno)d] - %(message)s"

PACKAGE_LOGGERS = ("src", "src.services", "src.cli")


def resolve_level(level: Optional[str] = None) -> int:
    """Map a level name (or the settings default) to a logging constant."""
    if level is None:
        level = "DEBUG" if settings.DEBUG else settings.LOG_LEVEL
    return getattr(logging, level.upper(), logging.INFO)


def setup_logging(
    level: Optional[str] = None,
    log_format: Optional[str] = None,
    stream: Optional[TextIO] = None,
) -> None:
    """
    Configure application logging.

    Args:
        level: Log level name; defaults to SPINXFER_LOG_LEVEL (DEBUG when SPINXFER_DEBUG)
        log_format: Log message format
        stream: Handler target, stderr unless given
    """
    log_level = resolve_level(level)

    logging.basicConfig(
        level=log_level,
        format=log_format or DEFAULT_FORMAT,
        handlers=[logging.StreamHandler(stream or sys.stderr)],
        force=True,
    )

    for name in PACKAGE_LOGGERS:
        logging.getLogger(name).setLevel(log_level)

    # numpy/scipy RuntimeWarnings (overflow, ill-conditioned eigh) land in the log
    logging.captureWarnings(True)

    logging.getLogger(__name__).debug("Logging configured at %s", logging.getLevelName(log_level))
