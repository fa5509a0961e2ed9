"""Base class for the sftalgebra tools.

Every tool answers with one JSON document::

    {"tool": "...", "verdict": "pass" | "fail" | "info", "summary": [...],
     "data": {...}}

or, when the computation could not be carried out::

    {"tool": "...", "verdict": "error", "error": {"type": ..., "message": ...,
     "exit_code": ...}}

``summary`` holds the human-readable lines the command line prints; ``data``
carries the same values for ``--json``.
"""

from __future__ import annotations

import json
from abc import ABC
from enum import Enum
from functools import partial
from typing import Any, Callable, Optional, Sequence, TypeVar

import anyio.to_thread
from pydantic import ValidationError

from sft.formats import parse_matrix, parse_polymatrix
from sft.matrix import IntMatrix
from sft.polymatrix import PolyMatrix
from utils.data_path import read_input
from utils.errors import MalformedInputError, SftError
from utils.limits import ComputeConfig
from utils.shared_config import get_compute_config

from .base import BaseTool, ToolParams

P = TypeVar("P", bound=ToolParams)
T = TypeVar("T")

INTERNAL_ERROR_EXIT = 2


class Outcome(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    INFO = "info"
    ERROR = "error"


def outcome_of(ok: bool) -> Outcome:
    return Outcome.PASS if ok else Outcome.FAIL


def _jsonable(value: Any) -> Any:
    if isinstance(value, IntMatrix):
        return value.to_rows()
    if isinstance(value, Enum):
        return value.value
    return str(value)


class SftBaseTool(BaseTool[P], ABC):
    """Tool with compute configuration, input loading and JSON responses."""

    execution_timeout: float = 30.0

    def __init__(self, config: Optional[ComputeConfig] = None) -> None:
        super().__init__()
        self._config = config

    @property
    def config(self) -> ComputeConfig:
        if self._config is None:
            self._config = get_compute_config()
        return self._config

    def configure(self, config: ComputeConfig) -> None:
        self._config = config

    # inputs ----------------------------------------------------------------

    async def load_text(self, path: str) -> str:
        return await read_input(path)

    async def load_matrix(
        self,
        rows: Optional[Sequence[Sequence[int]]],
        path: Optional[str],
        label: str = "matrix",
    ) -> IntMatrix:
        """A matrix given inline as rows, or as a file in the shared format."""
        if rows is not None and path is not None:
            raise MalformedInputError(f"give {label} inline or as a file, not both")
        if rows is not None:
            return IntMatrix.from_rows(rows)
        if path is None:
            raise MalformedInputError(f"{label} is required")
        return parse_matrix(await self.load_text(path), source=path)

    async def load_polymatrix(
        self,
        rows: Optional[Sequence[Sequence[str]]],
        path: Optional[str],
        label: str = "polynomial matrix",
    ) -> PolyMatrix:
        if rows is not None and path is not None:
            raise MalformedInputError(f"give {label} inline or as a file, not both")
        if rows is not None:
            text = "\n".join(
                [f"{len(rows)} {len(rows[0]) if rows else 0}"]
                + [" ".join(row) for row in rows]
            )
            return parse_polymatrix(text, source=label)
        if path is None:
            raise MalformedInputError(f"{label} is required")
        return parse_polymatrix(await self.load_text(path), source=path)

    # execution -------------------------------------------------------------

    async def run_sync(self, func: Callable[..., T], *args: Any, **kwargs: Any) -> T:
        """Run an exact computation in a worker thread.

        Cancellation (the guard's timeout) abandons the thread.
        """
        return await anyio.to_thread.run_sync(
            partial(func, *args, **kwargs), abandon_on_cancel=True
        )

    # responses -------------------------------------------------------------

    def respond(
        self,
        outcome: Outcome,
        summary: Sequence[str],
        data: Optional[dict[str, Any]] = None,
    ) -> str:
        document = {
            "tool": self.name,
            "verdict": outcome.value,
            "summary": list(summary),
            "data": data or {},
        }
        return json.dumps(document, indent=2, default=_jsonable)

    def handle_error(self, error: Exception, operation: str) -> str:
        """JSON error document for a failed computation."""
        if isinstance(error, SftError):
            self.logger.info(
                f"{operation} stopped: {error}",
                extra={"tool_name": self.name, "error_type": error.kind},
            )
            payload = error.to_dict()
        elif isinstance(error, ValidationError):
            payload = MalformedInputError(_validation_message(error)).to_dict()
        elif isinstance(error, FileNotFoundError):
            payload = MalformedInputError(str(error)).to_dict()
        else:
            self.logger.exception(
                f"Unexpected error during {operation}",
                extra={"tool_name": self.name, "operation": operation},
            )
            payload = {
                "type": "internal_error",
                "message": f"internal error during {operation}",
                "exit_code": INTERNAL_ERROR_EXIT,
            }
        return json.dumps(
            {"tool": self.name, "verdict": Outcome.ERROR.value, "error": payload},
            indent=2,
            default=_jsonable,
        )


def _validation_message(error: ValidationError) -> str:
    err = error.errors()[0]
    where = ".".join(str(p) for p in err.get("loc", ()))
    return f"{where}: {err.get('msg')}" if where else str(err.get("msg"))


__all__ = ["SftBaseTool", "Outcome", "outcome_of", "ToolParams"]
