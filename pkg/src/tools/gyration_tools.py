"""Gyration, orbit sign and SGCC of automorphisms; sgc2 of SSE(Z) edges and paths."""

from __future__ import annotations

import json
import random
from dataclasses import replace
from typing import Any, Literal, Optional

from pydantic import Field, model_validator

from sft.blockcode import (
    Automorphism,
    PeriodicMap,
    enumerate_periodic,
    identity_map,
    rotate_orbit,
    shift_automorphism,
    simple_graph_symmetry,
    symbol_permutation_code,
)
from sft.equivalence import Ring, SseChain
from sft.formats import automorphism_to_json, parse_automorphism, parse_chain
from sft.gyration import (
    LevelMap,
    code_level_map,
    gyration,
    orbit_sign,
    path_sgc2,
    random_triangle,
    sgc2,
    sgcc,
    triangle_from,
    verify_triangle,
)
from sft.matrix import IntMatrix
from utils.errors import MalformedInputError

from .sft_base import Outcome, SftBaseTool, ToolParams, outcome_of

Rows = list[list[int]]
AutomorphismKind = Literal["shift", "symbols", "edges", "code", "one-orbit"]


class GyrationParams(ToolParams):
    automorphism: AutomorphismKind = Field(
        default="shift", description="How the automorphism is given"
    )
    matrix: Optional[Rows] = Field(default=None, description="Graph matrix as rows")
    matrix_path: Optional[str] = Field(default=None, description="Graph matrix file")
    n: Optional[int] = Field(
        default=None, ge=1, description="Use the full n-shift instead of a matrix"
    )
    perm: Optional[list[int]] = Field(
        default=None, description="Symbol or parallel-edge permutation"
    )
    code: Optional[dict[str, Any]] = Field(
        default=None, description='Block-code document {"matrix", "forward", "inverse"}'
    )
    code_path: Optional[str] = Field(default=None, description="Block-code JSON file")
    orbit: Optional[list[int]] = Field(
        default=None, description="Point (edge word) whose orbit 'one-orbit' rotates"
    )
    orbit_level: Optional[int] = Field(
        default=None, ge=1, description="Period of the rotated orbit"
    )
    rotate: int = Field(default=1, description="Rotation amount for 'one-orbit'")
    levels: list[int] = Field(
        default_factory=list, description="Levels k to report g_k and the sign at"
    )
    m: Optional[int] = Field(default=None, ge=1, description="Report SGCC_m")
    budget: Optional[int] = Field(
        default=None, ge=1, description="Periodic point budget (default from config)"
    )

    @model_validator(mode="after")
    def _targets(self) -> "GyrationParams":
        if any(k < 1 for k in self.levels):
            raise ValueError("levels must be positive")
        if not self.levels and self.m is None:
            raise ValueError("give at least one level or m")
        if self.automorphism in ("symbols", "edges") and self.perm is None:
            raise ValueError(f"'{self.automorphism}' needs perm")
        if self.automorphism == "one-orbit" and self.orbit_level is None:
            raise ValueError("'one-orbit' needs orbit_level")
        return self


class GyrationTool(SftBaseTool[GyrationParams]):
    name = "gyration"
    description = (
        "Gyration g_k, orbit sign and SGCC_m of an automorphism of an edge shift: "
        "the shift map, a symbol or parallel-edge permutation, a block code with "
        "its inverse, or a rotation of one periodic orbit."
    )
    Params = GyrationParams

    async def invoke(self, params: GyrationParams) -> str:
        try:
            auto: Optional[Automorphism] = None
            a: Optional[IntMatrix] = None
            if params.automorphism == "code":
                auto = await self._load_code(params)
            elif params.n is not None:
                a = IntMatrix.scalar(params.n)
            else:
                a = await self.load_matrix(params.matrix, params.matrix_path)
            return await self.run_sync(self._report, params, auto, a)
        except Exception as e:
            return self.handle_error(e, "gyration")

    async def _load_code(self, params: GyrationParams) -> Automorphism:
        if params.code is not None:
            return parse_automorphism(json.dumps(params.code), "code")
        if params.code_path is None:
            raise MalformedInputError("block-code document is required")
        return parse_automorphism(await self.load_text(params.code_path), params.code_path)

    def _level_map(
        self, params: GyrationParams, auto: Optional[Automorphism], a: Optional[IntMatrix]
    ) -> tuple[LevelMap, Optional[Automorphism]]:
        budget = params.budget or self.config.max_periodic_points
        kind = params.automorphism
        if kind == "one-orbit":
            assert a is not None and params.orbit_level is not None
            level = params.orbit_level

            def at(k: int) -> PeriodicMap:
                table = enumerate_periodic(a, k, budget)
                if k != level:
                    return identity_map(table)
                if params.orbit is not None:
                    rep = tuple(params.orbit)
                else:
                    orbits = table.least_period_orbits(k)
                    if not orbits:
                        raise MalformedInputError(f"no orbit of least period {k}")
                    rep = orbits[0].representative
                return rotate_orbit(table, rep, params.rotate)

            return at, None
        if kind == "code":
            assert auto is not None
        elif kind == "shift":
            assert a is not None
            auto = shift_automorphism(a)
        elif kind == "symbols":
            assert params.perm is not None
            if params.n is None:
                raise MalformedInputError("'symbols' acts on the full n-shift; give n")
            auto = symbol_permutation_code(params.n, params.perm)
        else:
            assert a is not None and params.perm is not None
            auto = simple_graph_symmetry(a, params.perm)
        return code_level_map(auto, budget), auto

    def _report(
        self, params: GyrationParams, auto: Optional[Automorphism], a: Optional[IntMatrix]
    ) -> str:
        level_map, code = self._level_map(params, auto, a)
        summary: list[str] = []
        levels: list[dict[str, int]] = []
        for k in params.levels:
            pmap = level_map(k)
            g, sign = gyration(pmap), orbit_sign(pmap)
            summary.append(f"k = {k}: g_k = {g} in Z/{k}, sign = {sign}")
            levels.append({"k": k, "gyration": g, "sign": sign})
        data: dict[str, Any] = {"automorphism": params.automorphism, "levels": levels}
        if params.m is not None:
            value = sgcc(level_map, params.m)
            summary.append(f"SGCC_{params.m} = {value} in Z/{params.m}")
            data["sgcc"] = {"m": params.m, "value": value}
        if code is not None and params.automorphism != "shift":
            data["code"] = automorphism_to_json(code)
        return self.respond(Outcome.INFO, summary, data)


Sgc2Action = Literal["edge", "path", "triangle", "cocycle"]


class Sgc2Params(ToolParams):
    action: Sgc2Action = Field(default="edge", description="What to evaluate")
    r: Optional[Rows] = Field(default=None, description="R of an ESSE over Z")
    r_path: Optional[str] = Field(default=None, description="File holding R")
    s: Optional[Rows] = Field(default=None, description="S of an ESSE over Z")
    s_path: Optional[str] = Field(default=None, description="File holding S")
    path: Optional[list[dict[str, Any]]] = Field(
        default=None, description='Path edges [{"R": ..., "S": ..., "s": 1}]'
    )
    path_file: Optional[str] = Field(default=None, description="Path JSON file")
    r1: Optional[Rows] = Field(default=None, description="Triangle R1")
    r2: Optional[Rows] = Field(default=None, description="Triangle R2")
    s3: Optional[Rows] = Field(default=None, description="Triangle S3")
    s1: Optional[Rows] = Field(default=None, description="Triangle S1 (checked)")
    s2: Optional[Rows] = Field(default=None, description="Triangle S2 (checked)")
    r3: Optional[Rows] = Field(default=None, description="Triangle R3 (checked)")
    count: int = Field(default=1000, ge=1, description="Random triangles for 'cocycle'")
    max_size: int = Field(default=3, ge=1, le=6, description="Largest triangle size")
    seed: int = Field(default=0, description="Seed for 'cocycle'")


class Sgc2Tool(SftBaseTool[Sgc2Params]):
    name = "sgc2"
    description = (
        "The mod 2 sign-gyration invariant sgc2(R, S) of an elementary strong "
        "shift equivalence over Z, summed with orientations along a path; "
        "triangle identities and the cocycle property."
    )
    Params = Sgc2Params

    async def invoke(self, params: Sgc2Params) -> str:
        try:
            if params.action == "edge":
                r = await self.load_matrix(params.r, params.r_path, "R")
                s = await self.load_matrix(params.s, params.s_path, "S")
                return await self.run_sync(self._edge, r, s)
            if params.action == "path":
                chain = await self._load_path(params)
                return await self.run_sync(self._path, chain)
            if params.action == "triangle":
                return await self.run_sync(self._triangle, params)
            return await self.run_sync(self._cocycle, params)
        except Exception as e:
            return self.handle_error(e, f"sgc2 {params.action}")

    async def _load_path(self, params: Sgc2Params) -> SseChain:
        if params.path is not None:
            return parse_chain(json.dumps(params.path), "path", Ring.Z)
        if params.path_file is None:
            raise MalformedInputError("path is required")
        text = await self.load_text(params.path_file)
        return parse_chain(text, params.path_file, Ring.Z)

    def _edge(self, r: IntMatrix, s: IntMatrix) -> str:
        value = sgc2(r, s)
        return self.respond(Outcome.INFO, [f"sgc2(R, S) = {value}"], {"sgc2": value})

    def _path(self, chain: SseChain) -> str:
        terms = [sgc2(e.witness.r, e.witness.s) for e in chain.edges]
        total = path_sgc2(chain)
        summary = [f"{len(terms)} edges, sgc2 along the path = {total}"]
        data = {
            "sgc2": total,
            "edges": [
                {"orientation": e.orientation, "sgc2": t}
                for e, t in zip(chain.edges, terms)
            ],
        }
        return self.respond(Outcome.INFO, summary, data)

    def _triangle(self, params: Sgc2Params) -> str:
        if params.r1 is None or params.r2 is None or params.s3 is None:
            raise MalformedInputError("a triangle needs r1, r2 and s3")
        t = triangle_from(
            IntMatrix.from_rows(params.r1),
            IntMatrix.from_rows(params.r2),
            IntMatrix.from_rows(params.s3),
        )
        given = {"s1": params.s1, "s2": params.s2, "r3": params.r3}
        overrides = {
            name: IntMatrix.from_rows(rows)
            for name, rows in given.items()
            if rows is not None
        }
        t = replace(t, **overrides)
        verdict = verify_triangle(t)
        defect = t.cocycle_defect()
        summary = [
            "triangle identities: " + ("pass" if verdict else "fail"),
            f"sgc2(R1,S1) + sgc2(R2,S2) - sgc2(R3,S3) = {defect} mod 2",
        ]
        ok = verdict.ok and defect == 0
        return self.respond(
            outcome_of(ok), summary, {"identities": verdict.to_dict(), "defect": defect}
        )

    def _cocycle(self, params: Sgc2Params) -> str:
        rng = random.Random(params.seed)
        failures: list[int] = []
        for i in range(params.count):
            t = random_triangle(rng, params.max_size)
            if not verify_triangle(t) or t.cocycle_defect():
                failures.append(i)
        self.logger.debug(
            "Cocycle sweep finished",
            extra={"count": params.count, "failures": len(failures)},
        )
        summary = [f"{params.count} seeded triangles, {len(failures)} failures"]
        return self.respond(
            outcome_of(not failures),
            summary,
            {"count": params.count, "seed": params.seed, "failures": failures[:20]},
        )


__all__ = ["GyrationTool", "GyrationParams", "Sgc2Tool", "Sgc2Params"]
