"""Certificate checking for ESSE, SSE chains and shift equivalence."""

from __future__ import annotations

import json
from typing import Any, Literal, Optional

from pydantic import Field

from sft.equivalence import (
    EsseWitness,
    Ring,
    SeWitness,
    SseChain,
    compress_sse_to_se,
    esse_neighbors,
    maller_shub_witness,
    verify_esse,
    verify_se,
    verify_sse_chain,
)
from sft.formats import (
    matrix_to_json,
    parse_chain,
    parse_se_witness,
    se_witness_to_json,
)
from sft.gyration import sgc2
from sft.matrix import IntMatrix
from utils.errors import BudgetExceededError, MalformedInputError

from .sft_base import Outcome, SftBaseTool, ToolParams, outcome_of

Rows = list[list[int]]
EquivAction = Literal[
    "verify-esse", "verify-chain", "compress", "verify-se", "maller-shub"
]


class EquivParams(ToolParams):
    action: EquivAction = Field(description="Which certificate to check or build")
    a: Optional[Rows] = Field(default=None, description="Matrix A as rows")
    a_path: Optional[str] = Field(default=None, description="File holding A")
    b: Optional[Rows] = Field(
        default=None, description="Matrix B as rows (for verify-chain, the declared end)"
    )
    b_path: Optional[str] = Field(default=None, description="File holding B")
    r: Optional[Rows] = Field(default=None, description="Witness R as rows")
    r_path: Optional[str] = Field(default=None, description="File holding R")
    s: Optional[Rows] = Field(default=None, description="Witness S as rows")
    s_path: Optional[str] = Field(default=None, description="File holding S")
    chain: Optional[list[dict[str, Any]]] = Field(
        default=None, description='Chain edges [{"R": ..., "S": ..., "s": 1}]'
    )
    chain_path: Optional[str] = Field(default=None, description="Chain JSON file")
    witness: Optional[dict[str, Any]] = Field(
        default=None, description='Shift equivalence {"R", "S", "lag", "denominator"}'
    )
    witness_path: Optional[str] = Field(default=None, description="SE witness JSON file")
    ring: Optional[Ring] = Field(
        default=None, description="Zplus or Z (default Zplus, or the chain file's ring)"
    )
    rational: bool = Field(
        default=False, description="Accept witnesses over Q (common denominator)"
    )


class EquivTool(SftBaseTool[EquivParams]):
    name = "equiv"
    description = (
        "Verify elementary and strong shift equivalences (A = RS, B = SR), "
        "chains of them, and shift equivalence witnesses of any lag; compress a "
        "chain to a shift equivalence; build the Maller-Shub similarity."
    )
    Params = EquivParams

    async def invoke(self, params: EquivParams) -> str:
        try:
            if params.action == "verify-esse":
                a = await self.load_matrix(params.a, params.a_path, "A")
                b = await self.load_matrix(params.b, params.b_path, "B")
                w = await self._load_esse(params)
                return await self.run_sync(self._verify_esse, a, b, w)
            if params.action == "maller-shub":
                w = await self._load_esse(params)
                return await self.run_sync(self._maller_shub, w)
            if params.action in ("verify-chain", "compress"):
                chain = await self._load_chain(params)
                if params.action == "compress":
                    return await self.run_sync(self._compress, chain)
                end = None
                if params.b is not None or params.b_path is not None:
                    end = await self.load_matrix(params.b, params.b_path, "B")
                return await self.run_sync(self._verify_chain, chain, end)
            a = await self.load_matrix(params.a, params.a_path, "A")
            b = await self.load_matrix(params.b, params.b_path, "B")
            witness = await self._load_se(params)
            return await self.run_sync(self._verify_se, a, b, witness, params.rational)
        except Exception as e:
            return self.handle_error(e, f"equiv {params.action}")

    async def _load_esse(self, params: EquivParams) -> EsseWitness:
        r = await self.load_matrix(params.r, params.r_path, "R")
        s = await self.load_matrix(params.s, params.s_path, "S")
        return EsseWitness(r, s, params.ring or Ring.ZPLUS)

    async def _load_chain(self, params: EquivParams) -> SseChain:
        if params.chain is not None and params.chain_path is not None:
            raise MalformedInputError("give the chain inline or as a file, not both")
        if params.chain is not None:
            return parse_chain(json.dumps(params.chain), "chain", params.ring)
        if params.chain_path is None:
            raise MalformedInputError("chain is required")
        text = await self.load_text(params.chain_path)
        return parse_chain(text, params.chain_path, params.ring)

    async def _load_se(self, params: EquivParams) -> SeWitness:
        if params.witness is not None:
            return parse_se_witness(json.dumps(params.witness), "witness")
        if params.witness_path is None:
            raise MalformedInputError("shift equivalence witness is required")
        text = await self.load_text(params.witness_path)
        return parse_se_witness(text, params.witness_path)

    def _verify_esse(self, a: IntMatrix, b: IntMatrix, w: EsseWitness) -> str:
        verdict = verify_esse(a, b, w)
        line = (
            f"ESSE over {w.ring.value}: verified"
            if verdict
            else f"ESSE over {w.ring.value}: fails ({verdict.detail})"
        )
        return self.respond(outcome_of(verdict.ok), [line], verdict.to_dict())

    def _verify_chain(self, chain: SseChain, end: Optional[IntMatrix] = None) -> str:
        check = verify_sse_chain(chain, end)
        if check:
            summary = [f"SSE chain over {chain.ring.value} verified, lag {check.lag}"]
            if chain.ring is Ring.Z:
                total = sum(
                    e.orientation * sgc2(e.witness.r, e.witness.s) for e in chain.edges
                ) % 2
                summary.append(f"sgc2 along the chain: {total}")
        elif check.failed_index is None:
            summary = [str(check.detail)]
        else:
            summary = [f"edge {check.failed_index}: {check.detail}"]
        return self.respond(outcome_of(check.ok), summary, check.to_dict())

    def _compress(self, chain: SseChain) -> str:
        witness = compress_sse_to_se(chain)
        summary = [f"shift equivalence of lag {witness.lag} over {witness.ring.value}"]
        return self.respond(Outcome.PASS, summary, se_witness_to_json(witness))

    def _verify_se(
        self, a: IntMatrix, b: IntMatrix, w: SeWitness, rational: bool
    ) -> str:
        verdict = verify_se(a, b, w, rational=rational)
        over = "Q" if rational and w.denominator != 1 else "Z"
        line = (
            f"shift equivalence over {over} of lag {w.lag}: verified"
            if verdict
            else f"shift equivalence of lag {w.lag}: fails ({verdict.detail})"
        )
        return self.respond(outcome_of(verdict.ok), [line], verdict.to_dict())

    def _maller_shub(self, w: EsseWitness) -> str:
        ms = maller_shub_witness(w)
        summary = [
            "U [[A, R], [0, 0]] = [[0, R], [0, B]] U verified",
            "U =",
            *str(ms.u).splitlines(),
        ]
        return self.respond(
            Outcome.PASS,
            summary,
            {
                "U": ms.u.to_rows(),
                "M1": matrix_to_json(ms.m1),
                "M2": matrix_to_json(ms.m2),
            },
        )


class NeighborsParams(ToolParams):
    matrix: Optional[Rows] = Field(default=None, description="Nonnegative matrix as rows")
    matrix_path: Optional[str] = Field(default=None, description="Matrix file")
    max_inner: int = Field(default=2, ge=1, le=4, description="Largest inner dimension")
    max_entry: int = Field(default=1, ge=0, le=4, description="Largest witness entry")
    budget: Optional[int] = Field(
        default=None, ge=1, description="Factorization budget (default from config)"
    )
    with_sgc2: bool = Field(default=False, description="Report sgc2 of each edge")


class NeighborsTool(SftBaseTool[NeighborsParams]):
    name = "neighbors"
    description = (
        "Enumerate ESSE-Z+ neighbours B = SR of A = RS with bounded witnesses, "
        "deduplicated up to vertex relabelling."
    )
    Params = NeighborsParams

    async def invoke(self, params: NeighborsParams) -> str:
        try:
            a = await self.load_matrix(params.matrix, params.matrix_path)
            return await self.run_sync(self._neighbors, a, params)
        except BudgetExceededError as e:
            return self._partial(e)
        except Exception as e:
            return self.handle_error(e, "neighbour search")

    def _neighbors(self, a: IntMatrix, params: NeighborsParams) -> str:
        budget = params.budget or self.config.max_factorizations
        found = esse_neighbors(a, params.max_inner, params.max_entry, budget)
        summary = [f"{len(found)} neighbours"]
        items = []
        for nb in found:
            item: dict[str, Any] = {
                "matrix": nb.matrix.to_rows(),
                "R": nb.witness.r.to_rows(),
                "S": nb.witness.s.to_rows(),
                "factorizations": nb.multiplicity,
            }
            line = f"{nb.matrix.to_rows()} ({nb.multiplicity} factorizations)"
            if params.with_sgc2:
                item["sgc2"] = sgc2(nb.witness.r, nb.witness.s)
                line += f" sgc2 = {item['sgc2']}"
            items.append(item)
            summary.append(line)
        return self.respond(Outcome.INFO, summary, {"neighbors": items})

    def _partial(self, error: BudgetExceededError) -> str:
        doc = json.loads(self.handle_error(error, "neighbour search"))
        partial = error.partial or []
        doc["partial"] = [nb.matrix.to_rows() for nb in partial]
        return json.dumps(doc, indent=2)


__all__ = [
    "EquivTool",
    "EquivParams",
    "NeighborsTool",
    "NeighborsParams",
]
