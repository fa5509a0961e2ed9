"""Input file resolution for matrix, polynomial-matrix and certificate files."""

from __future__ import annotations

import os
from pathlib import Path
from typing import Optional, Union

import aiofiles

from utils.errors import MalformedInputError
from utils.logging import get_logger

logger = get_logger(__name__)


def get_data_dir(custom_dir: Optional[str] = None) -> Path:
    """Base directory for relative input paths.

    Order: ``custom_dir``, then ``SFT_DATA_DIR``, then the working directory.
    """
    raw = custom_dir or os.environ.get("SFT_DATA_DIR")
    base = Path(raw) if raw else Path.cwd()
    if not base.is_dir():
        raise FileNotFoundError(f"Data directory {base} does not exist")
    return base


def resolve_input_path(
    path: Union[str, Path], data_dir: Optional[str] = None
) -> Path:
    """Absolute paths are kept; relative ones are joined to the data directory.

    Paths containing ``..`` are rejected.
    """
    candidate = Path(path)
    if ".." in candidate.parts:
        raise MalformedInputError(f"parent directory references are not allowed: {path}")
    if not candidate.is_absolute():
        candidate = get_data_dir(data_dir) / candidate
    if not candidate.is_file():
        raise FileNotFoundError(f"No such input file: {candidate}")
    return candidate


async def read_input(path: Union[str, Path], data_dir: Optional[str] = None) -> str:
    resolved = resolve_input_path(path, data_dir)
    async with aiofiles.open(resolved, "r", encoding="utf-8") as handle:
        text = await handle.read()
    logger.debug(f"Read {len(text)} characters from {resolved}")
    return text


__all__ = ["get_data_dir", "resolve_input_path", "read_input"]
