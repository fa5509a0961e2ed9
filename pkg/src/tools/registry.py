"""Tool registry and guarded dispatch shared by the command line and the server."""

from __future__ import annotations

import json
import time
import uuid
from typing import Any, Mapping, Optional

from pydantic import ValidationError

from utils.errors import SftError
from utils.limits import ComputeConfig, ComputeGuard
from utils.logging import get_logger

from .equivalence_tools import EquivTool, NeighborsTool
from .gyration_tools import GyrationTool, Sgc2Tool
from .invariant_tools import Classify2x2Tool, InvariantReportTool
from .niep_tools import NiepTool
from .poly_tools import PolyTool
from .sft_base import INTERNAL_ERROR_EXIT, Outcome, SftBaseTool
from .structure_tools import StructureTool

logger = get_logger(__name__)

TOOL_CLASSES: tuple[type[SftBaseTool[Any]], ...] = (
    InvariantReportTool,
    Classify2x2Tool,
    StructureTool,
    EquivTool,
    NeighborsTool,
    PolyTool,
    NiepTool,
    GyrationTool,
    Sgc2Tool,
)


def create_tools(config: Optional[ComputeConfig] = None) -> list[SftBaseTool[Any]]:
    return [cls(config) for cls in TOOL_CLASSES]


class ToolRegistry:
    """Looks tools up by name and runs them under the compute guard.

    ``call`` always returns a JSON document; failures become error documents.
    """

    def __init__(self, tools: list[SftBaseTool[Any]], config: ComputeConfig) -> None:
        self.tools = {tool.name: tool for tool in tools}
        self.config = config
        self.guard = ComputeGuard(config)

    @classmethod
    def from_config(cls, config: ComputeConfig) -> "ToolRegistry":
        return cls(create_tools(config), config)

    @property
    def names(self) -> list[str]:
        return list(self.tools)

    def get(self, name: str) -> SftBaseTool[Any]:
        if name not in self.tools:
            raise ValueError(f"Unknown tool: {name}")
        return self.tools[name]

    def timeout_for(self, tool: SftBaseTool[Any]) -> float:
        if "default_timeout" in self.config.overrides:
            return float(self.config.default_timeout)
        return max(tool.execution_timeout, self.config.default_timeout)

    async def call(
        self,
        name: str,
        arguments: Optional[Mapping[str, Any]],
        correlation_id: Optional[str] = None,
    ) -> str:
        tool = self.get(name)
        correlation_id = correlation_id or f"tool_{uuid.uuid4().hex[:8]}"
        arguments = dict(arguments or {})
        start_time = time.time()
        logger.info(
            f"Tool call request: {name}",
            extra={
                "correlation_id": correlation_id,
                "tool_name": name,
                "arg_count": len(arguments),
            },
        )
        try:
            self.guard.validate_request(name, arguments)
            params = tool.validate_params(arguments)
            timeout = self.timeout_for(tool)
            async with self.guard.execution_timeout(timeout, name):
                result = await tool.invoke(params)
        except (SftError, ValidationError) as e:
            result = tool.handle_error(e, name)
        total_time = time.time() - start_time
        safe_result = self.guard.validate_response(result, name)
        logger.info(
            f"Tool call completed: {name}",
            extra={
                "correlation_id": correlation_id,
                "tool_name": name,
                "total_time_ms": total_time * 1000,
                "result_length": len(safe_result),
            },
        )
        return safe_result


def exit_code_of(document: Mapping[str, Any]) -> int:
    """Exit status for a tool document: pass/info 0, fail 1, errors their own."""
    verdict = document.get("verdict")
    if verdict in (Outcome.PASS.value, Outcome.INFO.value):
        return 0
    if verdict == Outcome.FAIL.value:
        return 1
    error = document.get("error") or {}
    return int(error.get("exit_code", INTERNAL_ERROR_EXIT))


def parse_document(text: str) -> dict[str, Any]:
    """Decode a tool result; a truncated result counts as an internal error."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError:
        return {
            "verdict": Outcome.ERROR.value,
            "error": {
                "type": "output_truncated",
                "message": "result exceeded the output limits",
                "exit_code": INTERNAL_ERROR_EXIT,
            },
        }
    if not isinstance(doc, dict):
        raise TypeError("tool results are JSON objects")
    return doc


__all__ = [
    "TOOL_CLASSES",
    "create_tools",
    "ToolRegistry",
    "exit_code_of",
    "parse_document",
]
