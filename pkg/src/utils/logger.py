"""
Logger module for configuring logging.

Console output goes to stderr so that coverings, dumps and CSV written to
stdout stay byte-exact.
"""

import logging
import os
import sys
from pathlib import Path
from typing import Optional

# Define log levels
LOG_LEVELS = {
    'debug': logging.DEBUG,
    'info': logging.INFO,
    'warning': logging.WARNING,
    'error': logging.ERROR,
    'critical': logging.CRITICAL
}

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
LOG_FILE_NAME = 'parallel_dualization.log'

# Get log level from environment variable or use default
DEFAULT_LOG_LEVEL = os.environ.get('LOG_LEVEL', 'info').lower()
LOG_LEVEL = LOG_LEVELS.get(DEFAULT_LOG_LEVEL, logging.INFO)

# Configure root logger
logging.basicConfig(
    level=LOG_LEVEL,
    format=LOG_FORMAT,
    handlers=[
        logging.StreamHandler(sys.stderr)
    ]
)


def get_logger(name: str, log_level: Optional[str] = None) -> logging.Logger:
    """
    Get a logger with the specified name and log level.

    Args:
        name: Logger name (usually __name__)
        log_level: Optional log level override

    Returns:
        Configured logger
    """
    logger = logging.getLogger(name)

    if log_level is not None:
        level = LOG_LEVELS.get(log_level.lower(), LOG_LEVEL)
        logger.setLevel(level)

    return logger


def set_log_level(log_level: str) -> None:
    """Change the root log level at runtime (used by the CLI --log-level flag)."""
    level = LOG_LEVELS.get(log_level.lower())
    if level is None:
        raise ValueError(f"Unknown log level: {log_level}")
    logging.getLogger().setLevel(level)


def setup_file_logging(log_dir: str = 'logs') -> Path:
    """
    Set up file logging in addition to console logging.

    Args:
        log_dir: Directory to store log files

    Returns:
        Path of the log file
    """
    log_path = Path(log_dir)
    log_path.mkdir(exist_ok=True, parents=True)

    log_file = log_path / LOG_FILE_NAME

    root = logging.getLogger()
    for handler in root.handlers:
        if isinstance(handler, logging.FileHandler) and Path(handler.baseFilename) == log_file.resolve():
            return log_file

    file_handler = logging.FileHandler(log_file)
    file_handler.setLevel(LOG_LEVEL)
    file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(file_handler)

    logger = get_logger(__name__)
    logger.info(f"File logging set up at {log_file}")
    return log_file
