"""Compute limits applied around every tool call.

``ComputeConfig`` gathers the numeric defaults (trace horizon, series order,
enumeration budgets) and the request/response limits from the environment:

- SFT_HORIZON: trace horizon N for net-trace and JLL checks (default 64)
- SFT_SERIES_ORDER: truncation order of zeta series (default 10)
- SFT_MAX_FACTORIZATIONS: ESSE factorization budget (default 200000)
- SFT_MAX_PERIODIC_POINTS: periodic point budget per level (default 200000)
- SFT_DEFAULT_TIMEOUT / SFT_MAX_TIMEOUT: seconds (default 30 / 300)
- SFT_MAX_INPUT_SIZE, SFT_MAX_STRING_LENGTH: request limits
- SFT_MAX_OUTPUT_SIZE, SFT_MAX_OUTPUT_LINES: response truncation limits

``ComputeGuard`` enforces them: request validation before a tool runs, a
wall-clock timeout while it runs and truncation of what it returns.
"""

from __future__ import annotations

import asyncio
import os
from contextlib import asynccontextmanager
from dataclasses import dataclass, field, fields, replace
from typing import Any, AsyncIterator, Mapping

from utils.errors import BudgetExceededError, SftError
from utils.logging import get_logger

logger = get_logger(__name__)

TRUNCATED_SIZE = "\n[OUTPUT TRUNCATED - SIZE LIMIT EXCEEDED]"
TRUNCATED_LINES = "\n[OUTPUT TRUNCATED - LINE LIMIT EXCEEDED]"


class RequestRejectedError(SftError):
    """A request broke the configured input limits."""

    kind = "request_rejected"


def _env_int(key: str, default: int) -> int:
    return int(os.getenv(key, str(default)))


def _env_float(key: str, default: float) -> float:
    return float(os.getenv(key, str(default)))


@dataclass
class ComputeConfig:
    horizon: int = 64
    series_order: int = 10
    max_factorizations: int = 200_000
    max_periodic_points: int = 200_000
    default_timeout: float = 30.0
    max_timeout: float = 300.0
    max_input_size: int = 1_000_000
    max_string_length: int = 200_000
    max_output_size: int = 10_000_000
    max_output_lines: int = 50_000
    overrides: dict[str, Any] = field(default_factory=dict, repr=False)

    @classmethod
    def from_env(cls) -> "ComputeConfig":
        config = cls(
            horizon=_env_int("SFT_HORIZON", 64),
            series_order=_env_int("SFT_SERIES_ORDER", 10),
            max_factorizations=_env_int("SFT_MAX_FACTORIZATIONS", 200_000),
            max_periodic_points=_env_int("SFT_MAX_PERIODIC_POINTS", 200_000),
            default_timeout=_env_float("SFT_DEFAULT_TIMEOUT", 30.0),
            max_timeout=_env_float("SFT_MAX_TIMEOUT", 300.0),
            max_input_size=_env_int("SFT_MAX_INPUT_SIZE", 1_000_000),
            max_string_length=_env_int("SFT_MAX_STRING_LENGTH", 200_000),
            max_output_size=_env_int("SFT_MAX_OUTPUT_SIZE", 10_000_000),
            max_output_lines=_env_int("SFT_MAX_OUTPUT_LINES", 50_000),
        )
        config.validate()
        logger.debug(
            "Compute configuration loaded",
            extra={
                "horizon": config.horizon,
                "series_order": config.series_order,
                "max_factorizations": config.max_factorizations,
                "default_timeout": config.default_timeout,
            },
        )
        return config

    def validate(self) -> None:
        for name in (
            "horizon",
            "series_order",
            "max_factorizations",
            "max_periodic_points",
            "max_input_size",
            "max_output_size",
            "max_output_lines",
        ):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.default_timeout <= 0 or self.max_timeout <= 0:
            raise ValueError("timeouts must be positive")

    def with_overrides(self, **values: Any) -> "ComputeConfig":
        """A copy with command-line flags applied; ``None`` values are ignored."""
        applied = {k: v for k, v in values.items() if v is not None}
        unknown = set(applied) - {f.name for f in fields(self)} - {"overrides"}
        if unknown:
            raise ValueError(f"unknown settings: {', '.join(sorted(unknown))}")
        copy = replace(self, **applied, overrides={**self.overrides, **applied})
        copy.validate()
        return copy


class ComputeGuard:
    """Request, timeout and response limits for tool execution."""

    def __init__(self, config: ComputeConfig) -> None:
        self.config = config

    def validate_request(self, name: str, arguments: Mapping[str, Any]) -> None:
        size = len(str(arguments))
        if size > self.config.max_input_size:
            logger.warning(
                f"Input size limit exceeded: {size} bytes",
                extra={"tool_name": name, "input_size": size},
            )
            raise RequestRejectedError(
                f"Input too large: {size} bytes (limit: {self.config.max_input_size})"
            )
        self._check_values(arguments, name, "")

    def _check_values(self, obj: Any, tool_name: str, path: str) -> None:
        if isinstance(obj, str):
            if len(obj) > self.config.max_string_length:
                raise RequestRejectedError(
                    f"String too long at {path}: {len(obj)} chars "
                    f"(limit: {self.config.max_string_length})"
                )
        elif isinstance(obj, Mapping):
            for key, value in obj.items():
                self._check_values(value, tool_name, f"{path}.{key}" if path else key)
        elif isinstance(obj, (list, tuple)):
            for i, item in enumerate(obj):
                self._check_values(item, tool_name, f"{path}[{i}]")
        elif callable(obj):
            logger.error(
                f"Callable argument rejected: {type(obj).__name__}",
                extra={"tool_name": tool_name, "path": path},
            )
            raise RequestRejectedError(
                f"Object type not allowed at {path}: {type(obj).__name__}"
            )

    def validate_response(self, result: Any, tool_name: str) -> str:
        text = str(result)
        if len(text) > self.config.max_output_size:
            logger.warning(
                "Output truncated due to size limit",
                extra={"tool_name": tool_name, "original_size": len(text)},
            )
            text = text[: self.config.max_output_size] + TRUNCATED_SIZE
        lines = text.split("\n")
        if len(lines) > self.config.max_output_lines:
            logger.warning(
                "Output truncated due to line limit",
                extra={"tool_name": tool_name, "original_lines": len(lines)},
            )
            text = "\n".join(lines[: self.config.max_output_lines]) + TRUNCATED_LINES
        return text

    @asynccontextmanager
    async def execution_timeout(
        self, tool_timeout: float, tool_name: str
    ) -> AsyncIterator[None]:
        """Run the body under min(tool_timeout, max_timeout) seconds.

        Expiry raises ``BudgetExceededError`` so callers report exit code 3.
        """
        effective = min(tool_timeout, self.config.max_timeout)
        if effective != tool_timeout:
            logger.info(
                "Tool timeout capped at maximum",
                extra={
                    "tool_name": tool_name,
                    "requested_timeout": tool_timeout,
                    "effective_timeout": effective,
                },
            )
        try:
            async with asyncio.timeout(effective):
                yield
        except TimeoutError:
            logger.error(
                "Tool execution timeout",
                extra={"tool_name": tool_name, "timeout_seconds": effective},
            )
            raise BudgetExceededError(
                f"'{tool_name}' did not finish within {effective}s"
            ) from None


__all__ = ["ComputeConfig", "ComputeGuard", "RequestRejectedError"]
