"""Structured logging for the verification engines."""

import logging
import sys
from pathlib import Path
from typing import Optional

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def setup_logger(
    name: str = "icgs",
    log_level: Optional[str] = None,
    log_file: Optional[str] = None,
) -> logging.Logger:
    """
    Configure ``name`` to log to stderr and, optionally, to a file.

    Stdout is reserved for the CLI's JSON reports. Level and file fall back
    to ICGS_LOG_LEVEL and ICGS_LOG_FILE. A logger that already has handlers
    only gets its level updated.
    """
    from ..config import get_settings

    settings = get_settings()
    logger = logging.getLogger(name)
    logger.setLevel((log_level or settings.log_level).upper())
    if logger.handlers:
        return logger

    formatter = logging.Formatter(LOG_FORMAT, datefmt="%Y-%m-%d %H:%M:%S")
    handlers = [logging.StreamHandler(sys.stderr)]
    target = log_file or settings.log_file
    if target:
        Path(target).parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(target, encoding="utf-8"))
    for handler in handlers:
        handler.setFormatter(formatter)
        logger.addHandler(handler)
    logger.propagate = False
    return logger


def get_logger(name: str = "icgs") -> logging.Logger:
    logger = logging.getLogger(name)
    return logger if logger.handlers else setup_logger(name)
