"""Utility exports for sftalgebra."""

from .errors import SftError, ToolError
from .limits import ComputeConfig, ComputeGuard
from .logging import configure_logging, get_logger
from .shared_config import get_compute_config

__all__ = [
    "SftError",
    "ToolError",
    "ComputeConfig",
    "ComputeGuard",
    "configure_logging",
    "get_logger",
    "get_compute_config",
]
