"""Invariant reports and the 2x2 triangular-family classification."""

from __future__ import annotations

from typing import Any, Optional

from pydantic import Field, model_validator

from sft.algebra import zeta_exp_side, zeta_series
from sft.invariants import (
    TriangularFamily,
    canonical_classes,
    canonical_residue,
    class_counts,
    invariant_report,
    reduce_to_triangular,
    se_z_equivalent,
    sim_z_equivalent,
    similarity_oracle,
    transpose_partner,
    transpose_se_test,
)
from sft.matrix import IntMatrix

from .sft_base import Outcome, SftBaseTool, ToolParams, outcome_of


class InvariantReportParams(ToolParams):
    matrix: Optional[list[list[int]]] = Field(
        default=None, description="Square integer matrix given as rows"
    )
    matrix_path: Optional[str] = Field(
        default=None, description="Matrix file in the shared text or JSON format"
    )
    count: Optional[int] = Field(
        default=None, ge=1, description="How many traces trace(A^n) to list"
    )
    zeta_check: bool = Field(
        default=False,
        description="Also check 1/det(I-tA) against exp(sum trace(A^n) t^n / n)",
    )


class InvariantReportTool(SftBaseTool[InvariantReportParams]):
    name = "invariants_report"
    description = (
        "Exact invariants of a square integer matrix: det(I-tA) in factored form, "
        "characteristic polynomial, Bowen-Franks group, det(I-A), traces, "
        "primitivity and period."
    )
    Params = InvariantReportParams

    async def invoke(self, params: InvariantReportParams) -> str:
        try:
            a = await self.load_matrix(params.matrix, params.matrix_path)
            count = params.count or self.config.series_order
            return await self.run_sync(self._report, a, count, params.zeta_check)
        except Exception as e:
            return self.handle_error(e, "invariant report")

    def _report(self, a: IntMatrix, count: int, zeta_check: bool) -> str:
        report = invariant_report(a, count)
        summary = report.summary_lines()
        data = report.to_dict()
        outcome = Outcome.INFO
        if zeta_check:
            order = self.config.series_order
            agree = zeta_series(a, order) == zeta_exp_side(a, order)
            summary.append(
                f"zeta identity through order {order}: {'pass' if agree else 'fail'}"
            )
            data["zeta_identity"] = {"order": order, "ok": agree}
            outcome = outcome_of(agree)
        return self.respond(outcome, summary, data)


class Classify2x2Params(ToolParams):
    a: int = Field(description="Larger eigenvalue, a > |b| > 0")
    b: int = Field(description="Smaller eigenvalue")
    x: Optional[int] = Field(default=None, description="Off-diagonal entry of M_x")
    y: Optional[int] = Field(default=None, description="Off-diagonal entry of M_y")
    counts: bool = Field(default=False, description="Report class counts")
    classes: bool = Field(default=False, description="List the classes as residues")
    transpose: bool = Field(
        default=False, description="Is M_x shift equivalent to its transpose?"
    )
    oracle_bound: Optional[int] = Field(
        default=None,
        ge=0,
        description="Confirm SIM answers by a unimodular search with this entry bound",
    )
    matrix: Optional[list[list[int]]] = Field(
        default=None, description="A 2x2 matrix to place in the family"
    )
    matrix_path: Optional[str] = Field(default=None, description="File with a 2x2 matrix")

    @model_validator(mode="after")
    def _needs_question(self) -> "Classify2x2Params":
        asked = (
            self.counts
            or self.classes
            or self.transpose
            or self.x is not None
            or self.matrix is not None
            or self.matrix_path is not None
        )
        if not asked:
            self.counts = True
        if self.y is not None and self.x is None:
            raise ValueError("y needs x")
        if self.transpose and self.x is None:
            raise ValueError("transpose needs x")
        return self


class Classify2x2Tool(SftBaseTool[Classify2x2Params]):
    name = "classify2x2"
    description = (
        "Similarity (SIM-Z) and shift equivalence (SE-Z) classes of the 2x2 "
        "family [[a, x], [0, b]]."
    )
    Params = Classify2x2Params

    async def invoke(self, params: Classify2x2Params) -> str:
        try:
            fam = TriangularFamily(params.a, params.b)
            given: Optional[IntMatrix] = None
            if params.matrix is not None or params.matrix_path is not None:
                given = await self.load_matrix(params.matrix, params.matrix_path)
            return await self.run_sync(self._classify, fam, params, given)
        except Exception as e:
            return self.handle_error(e, "2x2 classification")

    def _classify(
        self, fam: TriangularFamily, params: Classify2x2Params, given: Optional[IntMatrix]
    ) -> str:
        summary: list[str] = []
        data: dict[str, Any] = {"a": fam.a, "b": fam.b, "modulus": fam.modulus}
        outcome = Outcome.INFO

        if given is not None:
            red = reduce_to_triangular(given, fam)
            summary.append(f"matrix is similar over Z to M_{red.x} via U = {red.u.to_rows()}")
            data["reduction"] = {"x": red.x, "raw_x": red.raw_x, "U": red.u.to_rows()}

        if params.counts:
            sim, se = class_counts(fam)
            summary.append(f"SIM classes: {sim}, SE classes: {se}")
            data["counts"] = {"sim": sim, "se": se}

        if params.classes:
            classes = canonical_classes(fam)
            summary.append("SIM classes: " + _render(classes["sim"]))
            summary.append("SE classes: " + _render(classes["se"]))
            data["classes"] = classes

        if params.x is not None and params.y is not None:
            x, y = params.x, params.y
            sim = sim_z_equivalent(fam, x, y)
            se = se_z_equivalent(fam, x, y)
            summary.append(f"M_{x} ~SIM-Z M_{y}: {'yes' if sim else 'no'}")
            summary.append(f"M_{x} ~SE-Z M_{y}: {'yes' if se else 'no'}")
            data["pair"] = {"x": x, "y": y, "sim": sim, "se": se}
            if params.oracle_bound is not None:
                witness = similarity_oracle(
                    fam.matrix(x), fam.matrix(y), params.oracle_bound
                )
                found = witness is not None
                summary.append(
                    f"unimodular search (entries within {params.oracle_bound}): "
                    + (f"found U = {witness.to_rows()}" if witness else "none found")
                )
                data["oracle"] = {
                    "bound": params.oracle_bound,
                    "witness": witness.to_rows() if witness else None,
                    "agrees": found == sim,
                }
            outcome = outcome_of(se)
        elif params.x is not None:
            x = params.x
            data["x"] = {"value": x, "residue": canonical_residue(fam, x)}
            summary.append(f"M_{x} has canonical residue {canonical_residue(fam, x)}")

        if params.transpose:
            assert params.x is not None
            partner = transpose_partner(fam, params.x)
            ok = transpose_se_test(fam, params.x)
            summary.append(
                f"transpose of M_{params.x} is SE-Z to M_{partner}; "
                f"M_{params.x} ~SE-Z its transpose: {'yes' if ok else 'no'}"
            )
            data["transpose"] = {"partner": partner, "se": ok}
            outcome = outcome_of(ok)

        return self.respond(outcome, summary, data)


def _render(classes: list[list[int]]) -> str:
    return " ".join("{" + ", ".join(map(str, c)) + "}" for c in classes)


__all__ = [
    "InvariantReportTool",
    "InvariantReportParams",
    "Classify2x2Tool",
    "Classify2x2Params",
]
