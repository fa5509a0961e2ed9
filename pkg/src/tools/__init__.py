"""sftalgebra tools."""

from .base import BaseTool, ToolError, ToolParams
from .registry import TOOL_CLASSES, ToolRegistry, create_tools, exit_code_of
from .sft_base import Outcome, SftBaseTool

__all__ = [
    "BaseTool",
    "ToolError",
    "ToolParams",
    "SftBaseTool",
    "Outcome",
    "TOOL_CLASSES",
    "ToolRegistry",
    "create_tools",
    "exit_code_of",
]
