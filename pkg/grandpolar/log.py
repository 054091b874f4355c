"""Console logging for the command-line tools."""

from __future__ import annotations

import logging
import sys

_LEVEL_TAGS = {
    logging.DEBUG: "DEBUG",
    logging.INFO: "INFO",
    logging.WARNING: "WARN",
    logging.ERROR: "ERROR",
    logging.CRITICAL: "FATAL",
}


class _BracketFormatter(logging.Formatter):
    def format(self, record: logging.LogRecord) -> str:
        tag = _LEVEL_TAGS.get(record.levelno, record.levelname)
        return f"[{tag}] {record.getMessage()}"


def configure(verbose: bool = False) -> logging.Logger:
    """Route the package logger to stderr; idempotent."""
    logger = logging.getLogger("grandpolar")
    logger.setLevel(logging.DEBUG if verbose else logging.INFO)
    for handler in list(logger.handlers):
        if getattr(handler, "_grandpolar", False):
            logger.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(_BracketFormatter())
    handler._grandpolar = True  # type: ignore[attr-defined]
    logger.addHandler(handler)
    logger.propagate = False
    return logger
