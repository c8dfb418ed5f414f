"""Logging configuration and utilities."""
import logging
import os
from typing import Optional


def setup_logger(
    name: str,
    log_file: Optional[str] = None,
    level: str = "INFO",
    log_format: Optional[str] = None
) -> logging.Logger:
    """
    Set up and configure a logger.

    Args:
        name: Logger name
        log_file: Path to log file (optional)
        level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_format: Log message format

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)

    # Avoid adding handlers multiple times; a configured level is kept
    if logger.handlers:
        return logger

    logger.setLevel(getattr(logging, level.upper()))

    if log_format is None:
        log_format = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    formatter = logging.Formatter(log_format)

    # Console handler goes to stderr so CSV/JSON written to stdout stays clean
    console_handler = logging.StreamHandler()
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if log_file:
        log_dir = os.path.dirname(log_file)
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger


def configure_from(config) -> None:
    """
    Apply the ``logging`` section of a ConfigManager to the package loggers.

    Args:
        config: ConfigManager instance
    """
    level = config.get('logging.level', 'INFO')
    log_format = config.get('logging.format')
    log_file = config.get('logging.file')

    root = logging.getLogger('larpkit')
    root.setLevel(getattr(logging, str(level).upper()))
    if log_file and not any(isinstance(h, logging.FileHandler) for h in root.handlers):
        log_dir = os.path.dirname(log_file)
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)
        handler = logging.FileHandler(log_file)
        handler.setFormatter(logging.Formatter(
            log_format or "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
        ))
        root.addHandler(handler)
    for name, logger in logging.root.manager.loggerDict.items():
        if name.startswith('larpkit.') and isinstance(logger, logging.Logger):
            logger.setLevel(getattr(logging, str(level).upper()))
