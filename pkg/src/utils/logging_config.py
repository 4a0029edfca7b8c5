"""Logging configuration utilities.

This module provides standardized logging setup for the command-line tools,
with consistent formatting and both file and console output.
"""

import logging
import os
from pathlib import Path

LOG_FILE_NAME = "sa_lab.log"


def setup_logger(name: str, level: str = "INFO") -> logging.Logger:
    """Set up a logger with standardized configuration.

    Creates a logger with both file and console handlers. The log directory is
    read from SA_LAB_LOG_DIR (default ``logs``). Log output never goes into the
    experiment artifacts, so re-runs stay byte-identical.

    Args:
        name: Logger name (typically ``"src"`` so every module logger inherits it)
        level: Logging level as string (DEBUG, INFO, WARNING, ERROR, CRITICAL).
               Defaults to INFO.

    Returns:
        Configured logger instance

    Example:
        >>> from src.utils.logging_config import setup_logger
        >>> logger = setup_logger("src", "DEBUG")
        >>> logger.info("Ensemble started")
    """
    logger = logging.getLogger(name)

    log_level = getattr(logging, level.upper(), logging.INFO)
    logger.setLevel(log_level)

    # Avoid adding duplicate handlers if logger already configured
    if logger.handlers:
        return logger

    formatter = logging.Formatter("[%(asctime)s] %(name)s - %(levelname)s - %(message)s")

    log_dir = Path(os.getenv("SA_LAB_LOG_DIR", "logs"))
    try:
        log_dir.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_dir / LOG_FILE_NAME)
        file_handler.setLevel(log_level)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)
    except OSError as e:
        # A read-only working directory must not stop a batch run
        logging.getLogger(__name__).warning(f"File logging disabled: {e}")

    console_handler = logging.StreamHandler()
    console_handler.setLevel(log_level)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    logger.debug(f"Logger '{name}' configured with level {level}")

    return logger
