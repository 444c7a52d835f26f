"""
Centralized Logger Configuration for stqft

This module provides a unified logging system with consistent formatting,
levels, and configuration across the simulator, the DSP layer and the CLI.
"""

import logging
import sys
from typing import TextIO

# Standard log format
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

# Default log levels
DEFAULT_LEVEL = logging.DEBUG
CONSOLE_LEVEL = logging.DEBUG

# Global logger cache to avoid duplicate handlers
_loggers: dict[str, logging.Logger] = {}

# Create console handler formatter
_formatter = logging.Formatter(LOG_FORMAT)


class UnbufferedStreamHandler(logging.StreamHandler):  # type: ignore[type-arg]
    """
    A StreamHandler that automatically flushes after each emit.

    Progress of long pipeline runs shows up immediately instead of sitting
    in the stream buffer until the process exits.
    """

    def __init__(self, stream: TextIO | None = None) -> None:
        """Initialize with immediate flush capability."""
        super().__init__(stream)

    def emit(self, record: logging.LogRecord) -> None:
        """Emit a log record and immediately flush the stream."""
        super().emit(record)
        self.flush()


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger instance with unified configuration.

    This function provides a centralized logger that:
    - Uses a consistent format across all modules
    - Prevents duplicate handlers
    - Supports hierarchical logging (e.g., 'stqft.simulator', 'stqft.services')
    - Writes to stderr so stdout stays free for CLI output

    Args:
        name: Logger name, typically __name__ from the calling module

    Returns:
        A configured logger instance

    Example:
        >>> from stqft.config.logger_config import get_logger
        >>> logger = get_logger(__name__)
        >>> logger.info("Framed %d windows", 12)
    """
    if name in _loggers:
        return _loggers[name]

    logger = logging.getLogger(name)
    logger.setLevel(DEFAULT_LEVEL)

    if not logger.handlers:
        console_handler = UnbufferedStreamHandler(sys.stderr)
        console_handler.setLevel(CONSOLE_LEVEL)
        console_handler.setFormatter(_formatter)
        logger.addHandler(console_handler)

    # Prevent propagation to root logger to avoid duplicate output
    logger.propagate = False

    _loggers[name] = logger

    return logger


def set_log_level(level: int | str) -> None:
    """
    Change the level of every logger handed out so far.

    Loggers created afterwards pick the new level up as well.

    Args:
        level: A logging level number or name ("DEBUG", "WARNING", ...)
    """
    global DEFAULT_LEVEL

    if isinstance(level, str):
        resolved = logging.getLevelName(level.upper())
        if not isinstance(resolved, int):
            raise ValueError(f"Unknown log level: {level}")
        level = resolved

    DEFAULT_LEVEL = level
    for logger in _loggers.values():
        logger.setLevel(level)
