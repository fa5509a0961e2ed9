"""Spectral conditions and realizations for candidate nonzero spectra."""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Literal, Optional

from pydantic import Field, field_validator

from sft.matrix import IntMatrix
from sft.niep import (
    CandidateSpectrum,
    SpectrumRing,
    check_conditions,
    check_perron,
    eventually_positive,
    inflate_period,
    jll_check,
    jll_min_size_bound,
    laffey_quantities,
    realization_report,
    spectrum_pth_root_poly,
    suleimanova_realize,
)
from sft.poly import IntPoly, factored_display
from utils.errors import MalformedInputError

from .sft_base import Outcome, SftBaseTool, ToolParams, outcome_of

NiepAction = Literal[
    "check",
    "perron",
    "jll",
    "jll-bound",
    "suleimanova",
    "inflate",
    "root-poly",
    "positive",
    "laffey",
    "realization",
]

_MATRIX_ACTIONS = ("jll", "inflate", "positive", "realization")


class NiepParams(ToolParams):
    action: NiepAction = Field(description="Which spectral operation to run")
    poly: Optional[str] = Field(
        default=None, description='Monic p(t) = prod (t - lambda), e.g. "-2+3*t+t^2"'
    )
    det_poly: Optional[str] = Field(
        default=None, description="det(I - tA) = prod (1 - lambda t)"
    )
    values: Optional[list[str]] = Field(
        default=None, description='Spectrum values as integers or fractions ("1/2")'
    )
    coeffs: Optional[list[str]] = Field(
        default=None, description="Ascending rational coefficients of a monic p(t)"
    )
    complex_values: Optional[list[tuple[float, float]]] = Field(
        default=None, description="Spectrum as (re, im) floats"
    )
    ring: SpectrumRing = Field(default=SpectrumRing.Z, description="Z or dense")
    horizon: Optional[int] = Field(default=None, ge=1, description="Trace horizon N")
    max_k: int = Field(default=8, ge=1, description="Largest k for JLL bounds")
    max_m: int = Field(default=4, ge=1, description="Largest m for 'jll'")
    p: int = Field(default=2, ge=1, description="Period for 'inflate' and 'root-poly'")
    kmax: int = Field(default=64, ge=1, description="Power limit for 'positive'")
    tolerance: float = Field(default=1e-9, gt=0, description="Perron tolerance")
    matrix: Optional[list[list[int]]] = Field(default=None, description="Matrix rows")
    matrix_path: Optional[str] = Field(default=None, description="Matrix file")

    @field_validator("values", "coeffs")
    @classmethod
    def _fractions(cls, v: Optional[list[str]]) -> Optional[list[str]]:
        if v is None:
            return v
        for item in v:
            try:
                Fraction(item)
            except (ValueError, ZeroDivisionError):
                raise ValueError(f"not a rational number: {item!r}") from None
        return v


def _spectrum(params: NiepParams) -> CandidateSpectrum:
    given = [
        name
        for name in ("poly", "det_poly", "values", "coeffs", "complex_values")
        if getattr(params, name) is not None
    ]
    if len(given) != 1:
        raise MalformedInputError(
            "give exactly one of poly, det_poly, values, coeffs, complex_values"
        )
    if params.poly is not None:
        return CandidateSpectrum.from_poly(IntPoly.parse(params.poly))
    if params.det_poly is not None:
        return CandidateSpectrum.from_det_poly(IntPoly.parse(params.det_poly))
    if params.values is not None:
        return CandidateSpectrum.from_roots([Fraction(v) for v in params.values])
    if params.coeffs is not None:
        return CandidateSpectrum.from_rational([Fraction(c) for c in params.coeffs])
    assert params.complex_values is not None
    floats = [complex(re, im) for re, im in params.complex_values]
    return CandidateSpectrum.from_floats(floats)


class NiepTool(SftBaseTool[NiepParams]):
    name = "niep"
    description = (
        "Nonnegative inverse eigenvalue toolkit: Perron, coefficient and "
        "(net) trace conditions up to a horizon, JLL inequalities and size "
        "bounds, Suleimanova companion realizations, period inflation, "
        "eventual positivity and Laffey's quantities."
    )
    Params = NiepParams

    async def invoke(self, params: NiepParams) -> str:
        try:
            a: Optional[IntMatrix] = None
            if params.action in _MATRIX_ACTIONS:
                a = await self.load_matrix(params.matrix, params.matrix_path)
            handler = getattr(self, "_" + params.action.replace("-", "_"))
            result: str = await self.run_sync(handler, params, a)
            return result
        except Exception as e:
            return self.handle_error(e, f"niep {params.action}")

    def _horizon(self, params: NiepParams) -> int:
        return params.horizon or self.config.horizon

    def _check(self, params: NiepParams, a: Optional[IntMatrix]) -> str:
        spec = _spectrum(params)
        horizon = self._horizon(params)
        report = check_conditions(spec, params.ring, horizon, params.max_k)
        summary = report.summary_lines()
        if report.laffey is not None:
            q = report.laffey.to_dict()
            summary.append(f"Laffey G = {q['G']}, M = {q['M']}")
        return self.respond(
            outcome_of(report.ok),
            summary,
            {"spectrum": spec.to_dict(), **report.to_dict()},
        )

    def _perron(self, params: NiepParams, a: Optional[IntMatrix]) -> str:
        check = check_perron(_spectrum(params), params.tolerance)
        line = f"Perron condition: {check.verdict.value}"
        if check.detail:
            line += f" ({check.detail})"
        outcome = {"pass": Outcome.PASS, "fail": Outcome.FAIL}.get(
            check.verdict.value, Outcome.INFO
        )
        return self.respond(outcome, [line], check.to_dict())

    def _jll(self, params: NiepParams, a: Optional[IntMatrix]) -> str:
        assert a is not None
        verdict = jll_check(a, params.max_m, params.max_k)
        line = (
            f"JLL inequalities hold for m <= {params.max_m}, k <= {params.max_k}"
            if verdict
            else str(verdict.detail)
        )
        return self.respond(outcome_of(verdict.ok), [line], verdict.to_dict())

    def _jll_bound(self, params: NiepParams, a: Optional[IntMatrix]) -> str:
        bound = jll_min_size_bound(_spectrum(params), params.max_k)
        return self.respond(
            Outcome.INFO,
            [f"a nonnegative realization needs size at least {bound}"],
            {"min_size": bound, "max_k": params.max_k},
        )

    def _suleimanova(self, params: NiepParams, a: Optional[IntMatrix]) -> str:
        if params.values is None:
            raise MalformedInputError("suleimanova needs values")
        out = suleimanova_realize([Fraction(v) for v in params.values])
        rows = [[str(x) for x in row] for row in out.rows]
        summary = ["nonnegative companion realization:"]
        summary.extend(" ".join(row) for row in rows)
        return self.respond(Outcome.PASS, summary, {"matrix": rows})

    def _inflate(self, params: NiepParams, a: Optional[IntMatrix]) -> str:
        assert a is not None
        big = inflate_period(a, params.p)
        summary = [
            f"period-{params.p} inflation, {big.rows} vertices",
            *str(big).splitlines(),
        ]
        data = {"matrix": big.to_rows(), "p": params.p}
        return self.respond(Outcome.PASS, summary, data)

    def _root_poly(self, params: NiepParams, a: Optional[IntMatrix]) -> str:
        if params.det_poly is None:
            raise MalformedInputError("root-poly needs det_poly")
        q = spectrum_pth_root_poly(IntPoly.parse(params.det_poly), params.p)
        return self.respond(
            Outcome.INFO,
            [f"q(t^{params.p}) = {factored_display(q)}"],
            {"poly": q.to_text()},
        )

    def _positive(self, params: NiepParams, a: Optional[IntMatrix]) -> str:
        assert a is not None
        k = eventually_positive(a, params.kmax)
        if k is None:
            return self.respond(
                Outcome.FAIL,
                [f"undetermined: no positive power up to {params.kmax}"],
                {"k": None, "kmax": params.kmax},
            )
        data = {"k": k, "kmax": params.kmax}
        return self.respond(Outcome.PASS, [f"A^{k} > 0"], data)

    def _laffey(self, params: NiepParams, a: Optional[IntMatrix]) -> str:
        q = laffey_quantities(_spectrum(params), self._horizon(params))
        data: dict[str, Any] = q.to_dict()
        summary = [
            f"G = {data['G']}",
            f"M = {data['M']}" + (f" at n = {q.floor_at}" if q.floor_at else ""),
            f"bound shape: {q.bound_shape}",
        ]
        return self.respond(Outcome.INFO, summary, data)

    def _realization(self, params: NiepParams, a: Optional[IntMatrix]) -> str:
        assert a is not None
        report = realization_report(a, self._horizon(params))
        summary = report.conditions.summary_lines()
        summary.append("JLL inequalities: " + ("pass" if report.jll else "fail"))
        return self.respond(outcome_of(report.ok), summary, report.to_dict())


__all__ = ["NiepTool", "NiepParams"]
