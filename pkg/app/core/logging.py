import os
import sys

from loguru import logger

from app.core.config import settings


def color_enabled() -> bool:
    return "NO_COLOR" not in os.environ


def setup_logging(level: str | None = None) -> None:
    """Route all diagnostics to a single stderr sink; stdout carries results only."""
    logger.remove()
    logger.add(
        sys.stderr,
        level=(level or settings.LOG_LEVEL).upper(),
        colorize=color_enabled() and sys.stderr.isatty(),
        format="<level>{level: <8}</level> | {name}:{function} - {message}",
    )
