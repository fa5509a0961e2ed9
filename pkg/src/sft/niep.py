"""Necessary conditions for nonzero spectra of nonnegative matrices.

Spectra are handled through the monic polynomial p(t) = prod (t - lambda_i),
with exact rational coefficients. Root locations are only needed for the
Perron condition and Laffey's gap. There numpy locates the roots and the
irreducible factors of p(t) over Q decide simplicity and the -lambda test
exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Optional, Sequence, Union

import numpy as np
import sympy

from sft.algebra import berkowitz_coefficients, det_one_minus_tA, matrix_traces, net_traces
from sft.matrix import IntMatrix
from sft.poly import IntPoly
from sft.structure import require_nonnegative
from sft.verdict import Verdict
from utils.errors import DomainError, NotRealizableError, PreconditionError, VerificationError
from utils.logging import get_logger

logger = get_logger(__name__)

Number = Union[int, Fraction]

_T = sympy.Symbol("t")


def _frac(x: Any) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class CandidateSpectrum:
    """A candidate nonzero spectrum.

    ``coeffs`` are the ascending coefficients of the monic p(t). Spectra given
    by floating-point roots keep them in ``float_roots`` and have no exact
    coefficients.
    """

    coeffs: tuple[Fraction, ...] = ()
    float_roots: Optional[tuple[complex, ...]] = None

    def __post_init__(self) -> None:
        if self.float_roots is not None:
            if any(abs(z) == 0 for z in self.float_roots):
                raise DomainError("spectrum values must be nonzero")
            return
        if not self.coeffs or self.coeffs[-1] != 1:
            raise DomainError("spectrum polynomial must be monic")
        if self.coeffs[0] == 0:
            raise DomainError("spectrum polynomial has a zero root")

    @classmethod
    def from_poly(cls, p: IntPoly) -> "CandidateSpectrum":
        return cls(tuple(Fraction(c) for c in p.coeffs))

    @classmethod
    def from_det_poly(cls, q: IntPoly) -> "CandidateSpectrum":
        """From det(I - tA) = prod (1 - lambda_i t)."""
        if q.constant_term != 1:
            raise DomainError("det(I - tA) must have constant term 1")
        return cls.from_poly(q.reverse(q.degree))

    @classmethod
    def from_rational(cls, coeffs: Sequence[Any]) -> "CandidateSpectrum":
        return cls(tuple(_frac(c) for c in coeffs))

    @classmethod
    def from_roots(cls, lams: Sequence[Any]) -> "CandidateSpectrum":
        coeffs = [Fraction(1)]
        for lam in lams:
            root = _frac(lam)
            nxt = [Fraction(0)] * (len(coeffs) + 1)
            for i, c in enumerate(coeffs):
                nxt[i + 1] += c
                nxt[i] -= root * c
            coeffs = nxt
        return cls(tuple(coeffs))

    @classmethod
    def from_floats(cls, roots: Sequence[complex]) -> "CandidateSpectrum":
        return cls(float_roots=tuple(complex(z) for z in roots))

    @property
    def exact(self) -> bool:
        return self.float_roots is None

    @property
    def degree(self) -> int:
        if self.float_roots is not None:
            return len(self.float_roots)
        return len(self.coeffs) - 1

    def is_integral(self) -> bool:
        return self.exact and all(c.denominator == 1 for c in self.coeffs)

    def numeric_roots(self) -> np.ndarray:
        if self.float_roots is not None:
            return np.array(self.float_roots, dtype=complex)
        if self.degree == 0:
            return np.array([], dtype=complex)
        # squarefree pieces keep repeated roots from splitting numerically
        return np.concatenate(
            [np.tile(_factor_roots(f), mult) for f, mult in self.factors()]
        )

    def factors(self) -> list[tuple[sympy.Poly, int]]:
        """Irreducible factors of p(t) over Q with multiplicity."""
        if not self.exact or self.degree == 0:
            return []
        poly = sympy.Poly(
            [sympy.Rational(c.numerator, c.denominator) for c in reversed(self.coeffs)],
            _T,
            domain="QQ",
        )
        return [(factor, int(mult)) for factor, mult in poly.factor_list()[1]]

    def rational_roots(self) -> dict[Fraction, int]:
        """Exact rational roots with multiplicity."""
        out: dict[Fraction, int] = {}
        for factor, mult in self.factors():
            if factor.degree() == 1:
                a, b = factor.all_coeffs()
                root = -sympy.Rational(b) / sympy.Rational(a)
                out[Fraction(int(root.p), int(root.q))] = out.get(
                    Fraction(int(root.p), int(root.q)), 0
                ) + mult
        return out

    def to_dict(self) -> dict[str, Any]:
        if self.float_roots is not None:
            return {"roots": [[z.real, z.imag] for z in self.float_roots]}
        return {"coeffs": [str(c) for c in self.coeffs]}


def power_sums(spec: CandidateSpectrum, count: int) -> list[Any]:
    """s_1..s_count: exact Fractions, or floats for float spectra."""
    if spec.float_roots is not None:
        roots = spec.numeric_roots()
        return [float(np.sum(roots**n).real) for n in range(1, count + 1)]
    k = spec.degree
    # reversed polynomial 1 + a_(k-1) t + ... + a_0 t^k
    q = [spec.coeffs[k - i] for i in range(k + 1)]
    f = [Fraction(0)] + [-q[i] for i in range(1, k + 1)]
    sums: list[Fraction] = [Fraction(0)]
    for n in range(1, count + 1):
        s = n * f[n] if n <= k else Fraction(0)
        for i in range(1, min(n, k + 1)):
            s += f[i] * sums[n - i]
        sums.append(s)
    return sums[1:]


# Perron condition -------------------------------------------------------------


class PerronVerdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    UNCERTAIN = "numeric-uncertain"


@dataclass(frozen=True)
class PerronCheck:
    verdict: PerronVerdict
    value: Optional[float] = None
    exact_value: Optional[Fraction] = None
    gap: Optional[float] = None
    detail: Optional[str] = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "verdict": self.verdict.value,
            "value": self.value,
            "exact_value": str(self.exact_value) if self.exact_value is not None else None,
            "gap": self.gap,
            "detail": self.detail,
        }


def _factor_roots(factor: sympy.Poly) -> np.ndarray:
    return np.roots([float(c) for c in factor.all_coeffs()]).astype(complex)


def _root_distance(factor: sympy.Poly, r: float) -> float:
    return float(np.min(np.abs(_factor_roots(factor) - r)))


def check_perron(spec: CandidateSpectrum, tolerance: float = 1e-9) -> PerronCheck:
    """Is there a simple positive root strictly larger than every other modulus?"""
    roots = spec.numeric_roots()
    if roots.size == 0:
        return PerronCheck(PerronVerdict.FAIL, detail="empty spectrum")
    positive = [
        z for z in roots if abs(z.imag) <= max(tolerance, 1e-7 * abs(z)) and z.real > tolerance
    ]
    if not positive:
        return PerronCheck(PerronVerdict.FAIL, detail="no positive real root")
    top = max(positive, key=lambda z: z.real)
    top_index = int(np.argmin(np.abs(roots - top)))
    others = np.delete(roots, top_index)
    r = float(top.real)
    gap = r - float(np.max(np.abs(others))) if others.size else math.inf
    if gap < -tolerance:
        return PerronCheck(
            PerronVerdict.FAIL, r, None, gap, "another root has larger modulus"
        )
    exact_root: Optional[Fraction] = None
    factors = spec.factors()
    if factors:
        # the factor carrying r is its minimal polynomial
        host, mult = min(factors, key=lambda fm: _root_distance(fm[0], r))
        if host.degree() == 1:
            a, b = host.all_coeffs()
            value = -sympy.Rational(b) / sympy.Rational(a)
            exact_root = Fraction(int(value.p), int(value.q))
        if mult > 1:
            return PerronCheck(
                PerronVerdict.FAIL, r, exact_root, 0.0, "dominant root is repeated"
            )
        for factor, _ in factors:
            mirrored = sympy.Poly(factor.as_expr().subs(_T, -_T), _T, domain="QQ")
            if mirrored.rem(host).is_zero:
                return PerronCheck(
                    PerronVerdict.FAIL, r, exact_root, 0.0, "-lambda is also a root"
                )
    if gap > tolerance:
        return PerronCheck(PerronVerdict.PASS, r, exact_root, gap)
    return PerronCheck(
        PerronVerdict.UNCERTAIN, r, exact_root, gap, "modulus gap within tolerance"
    )


# trace conditions -------------------------------------------------------------


class SpectrumRing(str, Enum):
    Z = "Z"
    DENSE = "dense"


@dataclass(frozen=True)
class LaffeyQuantities:
    gap: Any
    tracial_floor: Optional[Any]
    floor_at: Optional[int]
    bound_shape: str = "kappa_n * (1/(M*G))^n"

    def to_dict(self) -> dict[str, Any]:
        return {
            "G": str(self.gap),
            "M": str(self.tracial_floor) if self.tracial_floor is not None else "inapplicable",
            "M_at": self.floor_at,
            "bound_shape": self.bound_shape,
        }


@dataclass(frozen=True)
class SpectrumReport:
    """Every pass is certified only up to ``horizon``."""

    ring: SpectrumRing
    horizon: int
    perron: PerronCheck
    coefficients_ok: bool
    traces_ok_to: int
    trace_violation: Optional[tuple[int, Any]] = None
    net_traces_ok_to: Optional[int] = None
    net_trace_violation: Optional[tuple[int, Any]] = None
    positivity_violation: Optional[tuple[int, int]] = None
    jll_min_size: int = 1
    laffey: Optional[LaffeyQuantities] = None
    power_sums: tuple[Any, ...] = field(default=(), repr=False)

    @property
    def ok(self) -> bool:
        if self.perron.verdict is PerronVerdict.FAIL or not self.coefficients_ok:
            return False
        if self.trace_violation or self.positivity_violation:
            return False
        return self.net_trace_violation is None

    def to_dict(self) -> dict[str, Any]:
        def pair(v: Optional[tuple[int, Any]]) -> Optional[list[Any]]:
            return [v[0], str(v[1])] if v is not None else None

        return {
            "ok": self.ok,
            "ring": self.ring.value,
            "horizon": self.horizon,
            "perron": self.perron.to_dict(),
            "coefficients_ok": self.coefficients_ok,
            "traces_ok_to": self.traces_ok_to,
            "trace_violation": pair(self.trace_violation),
            "net_traces_ok_to": self.net_traces_ok_to,
            "net_trace_violation": pair(self.net_trace_violation),
            "positivity_violation": list(self.positivity_violation)
            if self.positivity_violation
            else None,
            "jll_min_size": self.jll_min_size,
            "laffey": self.laffey.to_dict() if self.laffey else None,
        }

    def summary_lines(self) -> list[str]:
        lines = [
            f"Perron condition: {self.perron.verdict.value}",
            f"coefficients condition: {'pass' if self.coefficients_ok else 'fail'}",
        ]
        if self.trace_violation:
            n, v = self.trace_violation
            lines.append(f"trace condition: fail at n = {n} (trace {v})")
        else:
            lines.append(f"trace condition: pass up to n = {self.traces_ok_to}")
        if self.ring is SpectrumRing.Z:
            if self.net_trace_violation:
                n, v = self.net_trace_violation
                lines.append(f"net trace condition: fail at n = {n} (net trace {v})")
            else:
                lines.append(f"net trace condition: pass up to n = {self.net_traces_ok_to}")
        elif self.positivity_violation:
            n, nk = self.positivity_violation
            lines.append(f"positivity condition: trace {n} > 0 but trace {nk} <= 0")
        else:
            lines.append(f"positivity condition: pass up to n = {self.horizon}")
        lines.append(f"JLL minimum size: {self.jll_min_size}")
        return lines


def _first_violation(values: Sequence[Any]) -> Optional[tuple[int, Any]]:
    for n, v in enumerate(values, start=1):
        if v < 0:
            return (n, v)
    return None


def check_conditions(
    spec: CandidateSpectrum, ring: SpectrumRing = SpectrumRing.Z, horizon: int = 64, max_k: int = 8
) -> SpectrumReport:
    if horizon < 1:
        raise DomainError("horizon must be at least 1")
    sums = power_sums(spec, horizon)
    trace_bad = _first_violation(sums)
    coefficients_ok = spec.is_integral() if ring is SpectrumRing.Z else True
    net_ok_to: Optional[int] = None
    net_bad: Optional[tuple[int, Any]] = None
    positivity_bad: Optional[tuple[int, int]] = None
    if ring is SpectrumRing.Z:
        net_bad = _first_violation(net_traces(sums))
        net_ok_to = net_bad[0] - 1 if net_bad else horizon
    else:
        for n in range(1, horizon + 1):
            if sums[n - 1] > 0:
                bad = next(
                    (n * k for k in range(2, horizon // n + 1) if sums[n * k - 1] <= 0),
                    None,
                )
                if bad is not None:
                    positivity_bad = (n, bad)
                    break
    perron = check_perron(spec)
    laffey = None
    if perron.verdict is PerronVerdict.PASS and spec.degree > 0:
        laffey = laffey_quantities(_normalized(spec, perron), horizon)
    report = SpectrumReport(
        ring=ring,
        horizon=horizon,
        perron=perron,
        coefficients_ok=coefficients_ok,
        traces_ok_to=trace_bad[0] - 1 if trace_bad else horizon,
        trace_violation=trace_bad,
        net_traces_ok_to=net_ok_to,
        net_trace_violation=net_bad,
        positivity_violation=positivity_bad,
        jll_min_size=jll_min_size_bound(spec, min(max_k, horizon)) if spec.exact else 1,
        laffey=laffey,
        power_sums=tuple(sums),
    )
    logger.debug("Spectrum checked", extra={"ring": ring.value, "ok": report.ok})
    return report


def _normalized(spec: CandidateSpectrum, perron: PerronCheck) -> CandidateSpectrum:
    """Scale roots so the Perron value is 1."""
    if spec.exact and perron.exact_value is not None:
        rho = perron.exact_value
        k = spec.degree
        return CandidateSpectrum(tuple(c / rho ** (k - i) for i, c in enumerate(spec.coeffs)))
    assert perron.value is not None
    return CandidateSpectrum.from_floats(list(spec.numeric_roots() / perron.value))


# JLL inequalities ----------------------------------------------------------------


def jll_check(a: IntMatrix, max_m: int, max_k: int) -> Verdict:
    """n^(k-1) trace(A^(mk)) >= trace(A^m)^k for m <= max_m, k <= max_k."""
    n = require_nonnegative(a, "JLL inequalities")
    taus = matrix_traces(a, max_m * max_k)
    for m in range(1, max_m + 1):
        for k in range(1, max_k + 1):
            lhs = n ** (k - 1) * taus[m * k - 1]
            rhs = taus[m - 1] ** k
            if lhs < rhs:
                return Verdict.failed(
                    f"JLL fails at m = {m}, k = {k}", m=m, k=k, lhs=lhs, rhs=rhs
                )
    return Verdict.passed(max_m=max_m, max_k=max_k)


def _least_size(s1: Fraction, sk: Fraction, k: int) -> int:
    """Smallest n >= 1 with n^(k-1) s_k >= s_1^k."""
    target = s1**k

    def ok(n: int) -> bool:
        return n ** (k - 1) * sk >= target

    hi = 1
    while not ok(hi):
        hi *= 2
    lo = hi // 2 + 1 if hi > 1 else 1
    while lo < hi:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid + 1
    return hi


def jll_min_size_bound(spec: CandidateSpectrum, max_k: int) -> int:
    """Lower bound on the size of a nonnegative matrix with this spectrum."""
    if not spec.exact:
        raise DomainError("JLL size bound needs an exact spectrum")
    sums = [_frac(s) for s in power_sums(spec, max(max_k, 1))]
    s1 = sums[0]
    if s1 <= 0:
        return 1
    best = 1
    for k in range(2, max_k + 1):
        if sums[k - 1] > 0:
            best = max(best, _least_size(s1, sums[k - 1], k))
    return best


# realizations --------------------------------------------------------------------


@dataclass(frozen=True)
class CompanionRealization:
    """Companion matrix with ones on the superdiagonal and last row -a_0..-a_(k-1)."""

    rows: tuple[tuple[Fraction, ...], ...]

    def is_nonnegative(self) -> bool:
        return all(x >= 0 for row in self.rows for x in row)

    def as_int_matrix(self) -> IntMatrix:
        if any(x.denominator != 1 for row in self.rows for x in row):
            raise NotRealizableError("companion matrix has non-integral entries")
        return IntMatrix.from_rows([[int(x) for x in row] for row in self.rows])


def companion(spec: CandidateSpectrum) -> CompanionRealization:
    k = spec.degree
    rows = [[Fraction(0)] * k for _ in range(k)]
    for i in range(k - 1):
        rows[i][i + 1] = Fraction(1)
    if k:
        rows[k - 1] = [-c for c in spec.coeffs[:k]]
    return CompanionRealization(tuple(tuple(r) for r in rows))


def suleimanova_realize(lams: Sequence[Number]) -> CompanionRealization:
    """One positive value, the rest negative, positive sum: the companion is nonnegative."""
    values = [_frac(x) for x in lams]
    if not values or values[0] <= 0:
        raise PreconditionError("first value must be positive")
    if any(v >= 0 for v in values[1:]):
        raise PreconditionError("all values after the first must be negative")
    if sum(values) <= 0:
        raise PreconditionError("the values must have positive sum")
    spec = CandidateSpectrum.from_roots(values)
    out = companion(spec)
    if not out.is_nonnegative():
        raise VerificationError("companion matrix has a negative entry")
    char = berkowitz_coefficients(out.rows, Fraction(0), Fraction(1))
    if tuple(reversed(char)) != spec.coeffs:
        raise VerificationError("companion characteristic polynomial mismatch")
    return out


def spectrum_pth_root_poly(q: IntPoly, p: int) -> IntPoly:
    """q(t^p): det(I - tA) for the p-th roots of the spectrum of q."""
    if p < 1:
        raise DomainError("p must be at least 1")
    return q.compose_power(p)


def inflate_period(d: IntMatrix, p: int) -> IntMatrix:
    """p-block cyclic matrix with D at block (0, 1) and identities around the cycle."""
    n = require_nonnegative(d, "period inflation")
    if p < 1:
        raise DomainError("p must be at least 1")
    if p == 1:
        return d
    grid = [[IntMatrix.zeros(n) for _ in range(p)] for _ in range(p)]
    grid[0][1] = d
    for i in range(1, p):
        grid[i][(i + 1) % p] = IntMatrix.identity(n)
    a = IntMatrix.block(grid)
    if det_one_minus_tA(a) != spectrum_pth_root_poly(det_one_minus_tA(d), p):
        raise VerificationError("det(I - tA) != det(I - t^p D)")
    return a


def eventually_positive(a: IntMatrix, kmax: int) -> Optional[int]:
    """Smallest k <= kmax with A^k > 0, or None when undetermined."""
    a.require_square("eventual positivity")
    power = a
    for k in range(1, kmax + 1):
        if k > 1:
            power = power @ a
        if power.rows and power.is_positive():
            return k
    return None


def laffey_quantities(spec: CandidateSpectrum, horizon: int) -> LaffeyQuantities:
    """G = 1 - max subdominant modulus and M = min over 2 <= n <= horizon of s_n.

    The Perron value must already be 1.
    """
    if spec.exact:
        roots = spec.rational_roots()
        if roots.get(Fraction(1), 0) < 1:
            raise PreconditionError("Perron value must be normalized to 1")
        others_exact = dict(roots)
        others_exact[Fraction(1)] -= 1
        rational_count = sum(others_exact.values())
        if rational_count == spec.degree - 1:
            moduli = [abs(r) for r, m in others_exact.items() if m > 0]
            gap: Any = 1 - max(moduli) if moduli else Fraction(1)
        else:
            gap = _numeric_gap(spec)
    else:
        gap = _numeric_gap(spec)
    if spec.degree <= 1 or horizon < 2:
        return LaffeyQuantities(gap, None, None)
    sums = power_sums(spec, horizon)
    at = min(range(2, horizon + 1), key=lambda n: sums[n - 1])
    return LaffeyQuantities(gap, sums[at - 1], at)


def _numeric_gap(spec: CandidateSpectrum) -> float:
    roots = spec.numeric_roots()
    if roots.size == 0:
        return 1.0
    top = int(np.argmin(np.abs(roots - 1.0)))
    if abs(roots[top] - 1.0) > 1e-6:
        raise PreconditionError("Perron value must be normalized to 1")
    others = np.delete(roots, top)
    return 1.0 - float(np.max(np.abs(others))) if others.size else 1.0


@dataclass(frozen=True)
class RealizationReport:
    spectrum: CandidateSpectrum
    conditions: SpectrumReport
    jll: Verdict

    @property
    def ok(self) -> bool:
        return self.conditions.ok and self.jll.ok

    def to_dict(self) -> dict[str, Any]:
        return {
            "ok": self.ok,
            "spectrum": self.spectrum.to_dict(),
            "conditions": self.conditions.to_dict(),
            "jll": self.jll.to_dict(),
        }


def realization_report(a: IntMatrix, horizon: int = 64) -> RealizationReport:
    """Run the nonzero spectrum of a nonnegative matrix through every check."""
    require_nonnegative(a, "realization report")
    spec = CandidateSpectrum.from_det_poly(det_one_minus_tA(a))
    max_m = max(1, min(horizon, 8))
    return RealizationReport(
        spec,
        check_conditions(spec, SpectrumRing.Z, horizon),
        jll_check(a, max_m, 4),
    )


__all__ = [
    "CandidateSpectrum",
    "power_sums",
    "PerronVerdict",
    "PerronCheck",
    "check_perron",
    "SpectrumRing",
    "LaffeyQuantities",
    "SpectrumReport",
    "check_conditions",
    "jll_check",
    "jll_min_size_bound",
    "CompanionRealization",
    "companion",
    "suleimanova_realize",
    "spectrum_pth_root_poly",
    "inflate_period",
    "eventually_positive",
    "laffey_quantities",
    "RealizationReport",
    "realization_report",
]
