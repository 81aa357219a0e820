"""
Structured logging setup.
Log events go to stderr so that reports on stdout stay reproducible.
"""

import logging
import sys
from typing import Any, Optional

import structlog

from kreinspec.core.config import settings


def _stderr_logger(*args: Any) -> structlog.PrintLogger:
    # Looked up per call; sys.stderr may be replaced at runtime
    return structlog.PrintLogger(file=sys.stderr)


def configure_logging(level: Optional[str] = None, json: Optional[bool] = None) -> None:
    """
    Configure structlog for the toolkit.

    Args:
        level: Log level name (defaults to settings.LOG_LEVEL)
        json: Render JSON lines instead of console output (defaults to settings.LOG_JSON)
    """
    level_name = (level or settings.LOG_LEVEL).upper()
    numeric_level = logging.getLevelName(level_name)
    if not isinstance(numeric_level, int):
        numeric_level = logging.WARNING

    use_json = settings.LOG_JSON if json is None else json
    renderer = (
        structlog.processors.JSONRenderer()
        if use_json
        else structlog.dev.ConsoleRenderer(colors=False)
    )

    structlog.configure(
        processors=[
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(numeric_level),
        logger_factory=_stderr_logger,
        cache_logger_on_first_use=False,
    )
