"""Outcome values for checks that can legitimately come out negative."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional


@dataclass(frozen=True)
class Verdict:
    """Result of a verification.

    A failed verification is an ordinary answer, so it is returned rather than
    raised. ``detail`` says what failed; ``data`` carries anything a report
    wants to show (indices, offending values, bounds).
    """

    ok: bool
    detail: Optional[str] = None
    data: dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok

    @classmethod
    def passed(cls, **data: Any) -> "Verdict":
        return cls(True, None, dict(data))

    @classmethod
    def failed(cls, detail: str, **data: Any) -> "Verdict":
        return cls(False, detail, dict(data))

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"ok": self.ok}
        if self.detail is not None:
            out["detail"] = self.detail
        out.update(self.data)
        return out


__all__ = ["Verdict"]
