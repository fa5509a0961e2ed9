"""Process-wide compute configuration.

Tools, the command line and the server all read limits from one
``ComputeConfig`` built from the environment on first use.
"""

from __future__ import annotations

import logging
from typing import Any, Optional

from .limits import ComputeConfig
from .logging import get_logger


class SharedComputeConfig:
    """Singleton holder of the ``ComputeConfig`` loaded from the environment."""

    _instance: Optional["SharedComputeConfig"] = None
    _config: Optional[ComputeConfig] = None
    _logger: Optional[logging.Logger] = None

    def __new__(cls) -> "SharedComputeConfig":
        if cls._instance is None:
            instance = super().__new__(cls)
            cls._logger = get_logger(__name__)
            cls._logger.debug("Creating shared compute configuration")
            instance._load()
            cls._instance = instance
        return cls._instance

    def _load(self) -> None:
        try:
            type(self)._config = ComputeConfig.from_env()
        except ValueError as e:
            if self._logger:
                self._logger.error(f"Invalid compute configuration: {e}")
            raise ValueError(f"Compute configuration failed to load: {e}") from e

    def get_config(self) -> ComputeConfig:
        if self._config is None:
            raise RuntimeError("Shared compute configuration not initialized")
        return self._config

    def stats(self) -> dict[str, Any]:
        if self._config is None:
            return {"error": "Compute configuration not initialized"}
        c = self._config
        return {
            "horizon": c.horizon,
            "series_order": c.series_order,
            "max_factorizations": c.max_factorizations,
            "max_periodic_points": c.max_periodic_points,
            "default_timeout": c.default_timeout,
            "max_timeout": c.max_timeout,
            "singleton_id": id(c),
        }

    @classmethod
    def reset_singleton(cls) -> None:
        """Forget the loaded configuration (tests change the environment)."""
        cls._instance = None
        cls._config = None
        if cls._logger:
            cls._logger.debug("Compute configuration singleton reset")


def get_compute_config() -> ComputeConfig:
    return SharedComputeConfig().get_config()


def get_compute_config_stats() -> dict[str, Any]:
    return SharedComputeConfig().stats()


__all__ = [
    "SharedComputeConfig",
    "get_compute_config",
    "get_compute_config_stats",
]
