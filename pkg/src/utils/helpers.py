"""
Helpers module for common utility functions.
"""

import json
import os
import re
from pathlib import Path
from typing import Any, Dict, Tuple, Union

import pandas as pd
import yaml

from .logger import get_logger

logger = get_logger(__name__)

_SHAPE_PATTERN = re.compile(r"^\s*(\d+)\s*[x×X]\s*(\d+)\s*$")


def load_config(config_path: Union[str, Path] = None, required: bool = False) -> Dict[str, Any]:
    """
    Load configuration from a YAML file.

    Args:
        config_path: Path to the configuration file
        required: Raise instead of falling back to ``{}`` when the file is missing

    Returns:
        Configuration dictionary (empty if the file cannot be read)

    Raises:
        FileNotFoundError: if ``required`` is set and the file does not exist
    """
    if config_path is None:
        config_dir = os.environ.get('CONFIG_DIR', 'config')
        config_path = Path(config_dir) / 'config.yaml'
    else:
        config_path = Path(config_path)

    if required and not config_path.is_file():
        logger.error(f"Configuration file not found: {config_path}")
        raise FileNotFoundError(f"configuration file not found: {config_path}")

    logger.info(f"Loading configuration from {config_path}")

    try:
        with open(config_path, 'r', encoding='utf-8') as f:
            config = yaml.safe_load(f)

        return config or {}
    except Exception as e:
        logger.error(f"Error loading configuration: {e}")
        return {}


def ensure_dir(directory: Union[str, Path]) -> Path:
    """
    Ensure a directory exists, creating it if necessary.

    Args:
        directory: Directory path

    Returns:
        Path object for the directory
    """
    directory = Path(directory)
    directory.mkdir(exist_ok=True, parents=True)
    return directory


def save_json(data: Any, file_path: Union[str, Path], indent: int = 2) -> bool:
    """
    Save data as a JSON file.

    Args:
        data: Data to save
        file_path: Path to save the file
        indent: JSON indentation level

    Returns:
        True if successful, False otherwise
    """
    file_path = Path(file_path)
    file_path.parent.mkdir(exist_ok=True, parents=True)

    try:
        with open(file_path, 'w', encoding='utf-8') as f:
            json.dump(data, f, indent=indent)

        logger.info(f"Saved JSON data to {file_path}")
        return True
    except Exception as e:
        logger.error(f"Error saving JSON data: {e}")
        return False


def save_csv(frame: pd.DataFrame, file_path: Union[str, Path]) -> Path:
    """
    Write a DataFrame as CSV without the index column.

    Args:
        frame: Table to write
        file_path: Destination path (parent directories are created)

    Returns:
        Path of the written file
    """
    file_path = Path(file_path)
    file_path.parent.mkdir(exist_ok=True, parents=True)
    frame.to_csv(file_path, index=False)
    logger.info(f"Saved {len(frame)} rows to {file_path}")
    return file_path


def parse_shape(text: str) -> Tuple[int, int]:
    """
    Parse a matrix shape written as ``"30x120"`` (``×`` is accepted too).

    Raises:
        ValueError: if the text is not two positive integers joined by ``x``
    """
    match = _SHAPE_PATTERN.match(text)
    if not match:
        raise ValueError(f"Invalid shape {text!r}; expected MxN, e.g. 30x120")
    m, n = int(match.group(1)), int(match.group(2))
    if m < 1 or n < 1:
        raise ValueError(f"Invalid shape {text!r}; both dimensions must be positive")
    return m, n


def format_shape(m: int, n: int) -> str:
    """Inverse of :func:`parse_shape`."""
    return f"{m}x{n}"


def format_error(error: Exception) -> Dict[str, str]:
    """
    Format an exception as a dictionary.

    Args:
        error: Exception to format

    Returns:
        Dictionary with error information
    """
    return {
        "error": str(error),
        "type": error.__class__.__name__
    }
