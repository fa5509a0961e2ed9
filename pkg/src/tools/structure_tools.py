"""Support-graph structure of nonnegative matrices."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import Field

from sft.formats import matrix_to_json
from sft.matrix import IntMatrix
from sft.structure import (
    cyclic_block_form,
    fix_counts,
    higher_block,
    is_irreducible,
    is_primitive,
    nondegenerate_core,
    period,
    strongly_connected_classes,
)

from .sft_base import Outcome, SftBaseTool, ToolParams

StructureAction = Literal[
    "core", "primitive", "period", "blockform", "higher", "components", "periodic"
]


class StructureParams(ToolParams):
    action: StructureAction = Field(description="Which structural question to answer")
    matrix: Optional[list[list[int]]] = Field(
        default=None, description="Nonnegative square matrix given as rows"
    )
    matrix_path: Optional[str] = Field(
        default=None, description="Matrix file in the shared text or JSON format"
    )
    k: int = Field(default=2, ge=1, description="Block length for 'higher'")
    count: Optional[int] = Field(
        default=None, ge=1, description="Number of periods for 'periodic'"
    )


class StructureTool(SftBaseTool[StructureParams]):
    name = "structure"
    description = (
        "Nondegenerate core, primitivity, period, cyclic block form, higher block "
        "presentations, strong components and periodic point counts of a "
        "nonnegative integer matrix."
    )
    Params = StructureParams

    async def invoke(self, params: StructureParams) -> str:
        try:
            a = await self.load_matrix(params.matrix, params.matrix_path)
            handler = getattr(self, f"_{params.action}")
            result: str = await self.run_sync(handler, a, params)
            return result
        except Exception as e:
            return self.handle_error(e, f"structure {params.action}")

    def _core(self, a: IntMatrix, params: StructureParams) -> str:
        core, kept = nondegenerate_core(a)
        summary = [
            f"kept vertices: {', '.join(map(str, kept)) if kept else 'none'}",
            f"core size: {core.rows}",
        ]
        return self.respond(
            Outcome.INFO, summary, {"kept": kept, "core": matrix_to_json(core)}
        )

    def _primitive(self, a: IntMatrix, params: StructureParams) -> str:
        result = is_primitive(a)
        if result.primitive:
            summary = [f"primitive: yes (A^{result.exponent} > 0)"]
        elif result.period is not None:
            summary = [f"primitive: no (irreducible of period {result.period})"]
        else:
            summary = ["primitive: no (reducible)"]
        outcome = Outcome.PASS if result.primitive else Outcome.FAIL
        return self.respond(outcome, summary, result.to_dict())

    def _period(self, a: IntMatrix, params: StructureParams) -> str:
        if not is_irreducible(a):
            return self.respond(
                Outcome.FAIL, ["reducible"], {"irreducible": False, "period": None}
            )
        p = period(a)
        return self.respond(
            Outcome.PASS,
            [f"irreducible, period {p}"],
            {"irreducible": True, "period": p},
        )

    def _blockform(self, a: IntMatrix, params: StructureParams) -> str:
        form = cyclic_block_form(a)
        summary = [
            f"period: {form.period}",
            "class sizes: " + ", ".join(map(str, form.class_sizes)),
            "vertex order: " + ", ".join(map(str, form.permutation)),
        ]
        for i, prod in enumerate(form.products):
            summary.append(
                f"block product {i}: primitive"
                if is_primitive(prod).primitive
                else f"block product {i}: not primitive"
            )
        return self.respond(
            Outcome.INFO,
            summary,
            {
                "period": form.period,
                "permutation": list(form.permutation),
                "class_sizes": list(form.class_sizes),
                "blocks": [b.to_rows() for b in form.blocks],
                "products": [m.to_rows() for m in form.products],
            },
        )

    def _higher(self, a: IntMatrix, params: StructureParams) -> str:
        h = higher_block(a, params.k, limit=self.config.max_periodic_points)
        summary = [f"{params.k}-block presentation: {h.rows} vertices"]
        summary.extend(str(h).splitlines())
        return self.respond(Outcome.INFO, summary, {"k": params.k, **matrix_to_json(h)})

    def _components(self, a: IntMatrix, params: StructureParams) -> str:
        comps = strongly_connected_classes(a)
        summary = []
        for c in comps:
            kind = f"irreducible, period {c.period}" if c.irreducible else "trivial"
            summary.append(f"{{{', '.join(map(str, c.vertices))}}}: {kind}")
        return self.respond(
            Outcome.INFO,
            summary,
            {
                "components": [
                    {
                        "vertices": list(c.vertices),
                        "irreducible": c.irreducible,
                        "period": c.period,
                    }
                    for c in comps
                ]
            },
        )

    def _periodic(self, a: IntMatrix, params: StructureParams) -> str:
        data = fix_counts(a, params.count or self.config.series_order)
        summary = [
            "fixed points: " + ", ".join(map(str, data.fix_counts)),
            "least period points: " + ", ".join(map(str, data.least_period_counts)),
            "orbits: " + ", ".join(map(str, data.orbit_counts)),
        ]
        return self.respond(Outcome.INFO, summary, data.to_dict())


__all__ = ["StructureTool", "StructureParams"]
