"""Typed tool pattern shared by the command line and the MCP server.

A tool declares a pydantic parameter model and an async ``invoke``:

```python
class PeriodParams(ToolParams):
    matrix: list[list[int]] = Field(description="Nonnegative square matrix")

class PeriodTool(BaseTool[PeriodParams]):
    name = "period"
    description = "Period of an irreducible matrix"
    Params = PeriodParams

    async def invoke(self, params: PeriodParams) -> str:
        ...
```

``get_schema`` feeds the MCP tool listing, ``validate_params`` turns raw
arguments (from MCP or argparse) into the typed model.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Any, Dict, Generic, Type, TypeVar

from pydantic import BaseModel, ConfigDict

from utils.errors import ToolError
from utils.logging import get_logger


class ToolParams(BaseModel):
    """Base class for tool parameter models."""

    model_config = ConfigDict(extra="forbid")


P = TypeVar("P", bound=ToolParams)


class BaseTool(Generic[P], ABC):
    """Abstract base class for all tools.

    Subclasses set ``name``, ``description`` and ``Params``; ``execution_timeout``
    is the requested wall-clock limit in seconds, capped by the compute guard.
    """

    name: str
    description: str
    params_model: Type[P]

    execution_timeout: float = 30.0

    def __init__(self) -> None:
        if not hasattr(self, "name") or not isinstance(self.name, str):
            raise ValueError("Tool must define a 'name' class attribute as a string")
        if not hasattr(self, "description") or not isinstance(self.description, str):
            raise ValueError(
                "Tool must define a 'description' class attribute as a string"
            )
        if not hasattr(self, "Params"):
            raise ValueError(
                "Tool must define a 'Params' class attribute (parameter model)"
            )
        if self.execution_timeout <= 0:
            raise ValueError("execution_timeout must be positive")
        self.params_model = getattr(self, "Params")

        logger_name = f"{self.__class__.__module__}.{self.__class__.__name__}"
        self.logger = get_logger(logger_name)
        self.logger.debug(f"Initialized tool: {self.name}")

    def get_schema(self) -> Dict[str, Any]:
        """JSON schema of the parameter model, as listed over MCP."""
        return self.params_model.model_json_schema()

    def validate_params(self, params: Dict[str, Any]) -> P:
        return self.params_model(**(params or {}))

    @abstractmethod
    async def invoke(self, params: P) -> Any:
        """Run the tool on validated parameters."""


__all__ = ["BaseTool", "ToolParams", "ToolError"]
