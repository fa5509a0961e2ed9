"""Polynomial matrices: NZC test, A# expansion, positive-equivalence move logs."""

from __future__ import annotations

import json
from typing import Any, Literal, Optional

from pydantic import Field

from sft.equivalence import EsseWitness
from sft.formats import format_matrix, parse_chain, parse_move_log
from sft.matrix import IntMatrix
from sft.polymatrix import (
    MoveLog,
    PolyMatrix,
    change_powers_chain,
    elementary_equivalence_from_sse,
    flow_invariants,
    is_nzc,
    psse_chain,
    replay,
    sharp_expand,
    sharp_move_log,
    verify_sharp,
)
from utils.errors import MalformedInputError

from .sft_base import Outcome, SftBaseTool, ToolParams, outcome_of

PolyAction = Literal["nzc", "sharp", "move", "psse", "flow", "elementary"]


def _poly_rows(p: PolyMatrix) -> list[list[str]]:
    return [[x.to_text() for x in row] for row in p.to_rows()]


class PolyParams(ToolParams):
    action: PolyAction = Field(description="Which polynomial-matrix operation to run")
    matrix: Optional[list[list[str]]] = Field(
        default=None, description='Polynomial matrix rows, entries like "1+2*t^3"'
    )
    matrix_path: Optional[str] = Field(default=None, description=".pmat file")
    log: Optional[dict[str, Any]] = Field(default=None, description="MoveLog document")
    log_path: Optional[str] = Field(default=None, description="MoveLog JSON file")
    r: Optional[list[list[int]]] = Field(default=None, description="R for 'psse'")
    r_path: Optional[str] = Field(default=None, description="File holding R")
    s: Optional[list[list[int]]] = Field(default=None, description="S for 'psse'")
    s_path: Optional[str] = Field(default=None, description="File holding S")
    changes: list[tuple[int, int, int, int]] = Field(
        default_factory=list,
        description="Power changes (i, j, k, k_new) applied before 'flow'",
    )
    chain_path: Optional[str] = Field(
        default=None, description="SSE chain file for 'elementary'"
    )
    with_moves: bool = Field(
        default=False, description="Include the move log from I - A to I - tA#"
    )


class PolyTool(SftBaseTool[PolyParams]):
    name = "poly"
    description = (
        "Polynomial matrices over Z[t]: NZC test, A# expansion with determinant "
        "check, positive-equivalence move logs (replay, PSSE), flow invariants "
        "and stabilized elementary equivalence from an SSE chain."
    )
    Params = PolyParams

    async def invoke(self, params: PolyParams) -> str:
        try:
            action = params.action
            if action == "move":
                log = await self._load_log(params)
                return await self.run_sync(self._move, log)
            if action == "psse":
                r = await self.load_matrix(params.r, params.r_path, "R")
                s = await self.load_matrix(params.s, params.s_path, "S")
                return await self.run_sync(self._psse, r, s)
            if action == "elementary":
                if params.chain_path is None:
                    raise MalformedInputError("'elementary' needs a chain file")
                text = await self.load_text(params.chain_path)
                return await self.run_sync(self._elementary, text, params.chain_path)
            a = await self.load_polymatrix(params.matrix, params.matrix_path)
            if action == "nzc":
                return await self.run_sync(self._nzc, a)
            if action == "sharp":
                return await self.run_sync(self._sharp, a, params.with_moves)
            return await self.run_sync(self._flow, a, params.changes)
        except Exception as e:
            return self.handle_error(e, f"poly {params.action}")

    async def _load_log(self, params: PolyParams) -> MoveLog:
        if params.log is not None:
            return parse_move_log(json.dumps(params.log), "log")
        if params.log_path is None:
            raise MalformedInputError("move log is required")
        return parse_move_log(await self.load_text(params.log_path), params.log_path)

    def _nzc(self, a: PolyMatrix) -> str:
        ok = is_nzc(a)
        return self.respond(
            outcome_of(ok), ["NZC" if ok else "not NZC"], {"nzc": ok}
        )

    def _sharp(self, a: PolyMatrix, with_moves: bool) -> str:
        expansion = sharp_expand(a)
        verdict = verify_sharp(a)
        summary = [
            f"A# has {expansion.matrix.rows} vertices "
            f"({expansion.rome_size} in the rome)",
            *format_matrix(expansion.matrix).splitlines()[1:],
            "det(I - A) = det(I - tA#): " + ("yes" if verdict else "no"),
        ]
        data: dict[str, Any] = {
            "matrix": expansion.matrix.to_rows(),
            "labels": [list(lab) for lab in expansion.labels],
            "check": verdict.to_dict(),
        }
        if with_moves:
            log = sharp_move_log(a)
            summary.append(f"move log: {len(log.moves)} moves inside tZplus")
            data["moves"] = log.to_dict()
        return self.respond(outcome_of(verdict.ok), summary, data)

    def _move(self, log: MoveLog) -> str:
        verdict = replay(log)
        if verdict:
            line = f"{len(log.moves)} moves replayed inside {log.klass.value}"
        else:
            where = verdict.data.get("index")
            line = f"move {where}: {verdict.detail}" if where is not None else str(
                verdict.detail
            )
        return self.respond(outcome_of(verdict.ok), [line], verdict.to_dict())

    def _psse(self, r: IntMatrix, s: IntMatrix) -> str:
        w = EsseWitness(r, s)
        log = psse_chain(r, s)
        verdict = replay(log)
        summary = [
            f"{len(log.moves)} basic moves from (I - tRS) + I to I + (I - tSR)",
            f"replay inside {log.klass.value}: " + ("pass" if verdict else "fail"),
            f"det(I - tRS) = det(I - tSR): "
            + ("yes" if log.start.det() == log.end.det() else "no"),
        ]
        data = {"log": log.to_dict(), "replay": verdict.to_dict()}
        data["source"] = w.source.to_rows()
        data["target"] = w.target.to_rows()
        return self.respond(outcome_of(verdict.ok), summary, data)

    def _flow(self, a: PolyMatrix, changes: list[tuple[int, int, int, int]]) -> str:
        if not changes:
            inv = flow_invariants(a)
            summary = [
                f"Bowen-Franks group: {inv.bowen_franks}",
                f"det(I - A(1)) = {inv.det_I_A1}",
            ]
            return self.respond(Outcome.INFO, summary, inv.to_dict())
        result = change_powers_chain(a, changes)
        summary = [
            "after power changes:",
            *str(result.end).splitlines(),
            f"Bowen-Franks group: {result.flow_start.bowen_franks} -> "
            f"{result.flow_end.bowen_franks}",
            f"det(I - A(1)): {result.flow_start.det_I_A1} -> {result.flow_end.det_I_A1}",
        ]
        return self.respond(
            outcome_of(result.invariants_agree),
            summary,
            {
                "end": _poly_rows(result.end),
                "start_invariants": result.flow_start.to_dict(),
                "end_invariants": result.flow_end.to_dict(),
            },
        )

    def _elementary(self, text: str, source: str) -> str:
        chain = parse_chain(text, source)
        eq = elementary_equivalence_from_sse(chain)
        summary = [f"E (I - tA) F = I - tB verified at size {eq.size}"]
        return self.respond(
            Outcome.PASS,
            summary,
            {"E": _poly_rows(eq.e), "F": _poly_rows(eq.f), "size": eq.size},
        )


__all__ = ["PolyTool", "PolyParams"]
