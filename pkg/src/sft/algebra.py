"""Characteristic polynomials, trace sequences and zeta functions.

The characteristic polynomial is computed division free (Berkowitz), so the
same routine runs over Z, Q and Z[t].
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Optional, Sequence, TypeVar

import sympy

from sft.matrix import IntMatrix
from sft.poly import IntPoly
from sft.series import RationalSeries
from utils.errors import DomainError, MalformedInputError, NotRealizableError

R = TypeVar("R")


def berkowitz_coefficients(rows: Sequence[Sequence[R]], zero: R, one: R) -> list[R]:
    """Coefficients of det(tI - A), highest degree first (leading 1).

    ``rows`` may hold any commutative ring elements supporting ``+``, ``*`` and
    unary ``-``.
    """
    n = len(rows)
    p: list[R] = [one]
    for r in range(n):
        # T = [1, -a, -R.C, -R.M.C, ..., -R.M^(r-1).C]
        col: list[R] = [rows[i][r] for i in range(r)]
        toeplitz: list[R] = [one, -rows[r][r]]
        for _ in range(r):
            dot = zero
            for i in range(r):
                dot = dot + rows[r][i] * col[i]
            toeplitz.append(-dot)
            col = [_row_dot(rows[i], col, r, zero) for i in range(r)]
        nxt: list[R] = []
        for i in range(r + 2):
            acc = zero
            for j in range(min(i, r) + 1):
                acc = acc + toeplitz[i - j] * p[j]
            nxt.append(acc)
        p = nxt
    return p


def _row_dot(row: Sequence[R], vec: Sequence[R], r: int, zero: R) -> R:
    acc = zero
    for k in range(r):
        acc = acc + row[k] * vec[k]
    return acc


def generic_determinant(rows: Sequence[Sequence[R]], zero: R, one: R) -> R:
    n = len(rows)
    last = berkowitz_coefficients(rows, zero, one)[n]
    return last if n % 2 == 0 else -last  # type: ignore[operator]


def char_poly(a: IntMatrix) -> IntPoly:
    """Monic det(tI - A)."""
    a.require_square("characteristic polynomial")
    p = berkowitz_coefficients(a.to_rows(), 0, 1)
    return IntPoly(tuple(reversed(p)))


def det_one_minus_tA(a: IntMatrix) -> IntPoly:
    """det(I - tA), the reversed characteristic polynomial."""
    a.require_square("det(I - tA)")
    return IntPoly(tuple(berkowitz_coefficients(a.to_rows(), 0, 1)))


def determinant(a: IntMatrix) -> int:
    a.require_square("determinant")
    return int(generic_determinant(a.to_rows(), 0, 1))


def matrix_traces(a: IntMatrix, count: int) -> list[int]:
    """trace(A^1), ..., trace(A^count) by direct powering."""
    a.require_square("traces")
    out: list[int] = []
    power = a
    for k in range(count):
        if k:
            power = power @ a
        out.append(power.trace())
    return out


def traces_from_poly(p: IntPoly, count: int) -> list[int]:
    """Newton's identities: det(I - tA) to (trace A^1, ..., trace A^count)."""
    if p.constant_term != 1:
        raise MalformedInputError("det(I - tA) must have constant term 1")
    f = [0] + [-p.coeff(k) for k in range(1, p.degree + 1)] if p.degree > 0 else [0]
    taus: list[int] = [0]
    for k in range(1, count + 1):
        fk = f[k] if k < len(f) else 0
        tau = k * fk
        for i in range(1, min(k, len(f))):
            tau += f[i] * taus[k - i]
        taus.append(tau)
    return taus[1:]


def poly_from_traces(taus: Sequence[int], max_degree: Optional[int] = None) -> IntPoly:
    """Invert Newton's identities over Z.

    Raises ``NotRealizableError`` if a coefficient is non-integral, or if
    ``max_degree`` is given and the sequence needs a higher degree.
    """
    if not taus:
        raise DomainError("trace sequence is empty")
    t = [0] + [int(x) for x in taus]
    f = [0]
    for k in range(1, len(t)):
        num = t[k] - sum(f[i] * t[k - i] for i in range(1, k))
        if num % k:
            raise NotRealizableError(
                f"coefficient f_{k} = {Fraction(num, k)} is not an integer"
            )
        f.append(num // k)
    if max_degree is not None and any(f[k] for k in range(max_degree + 1, len(f))):
        raise NotRealizableError(
            f"trace sequence is not produced by a polynomial of degree <= {max_degree}"
        )
    return IntPoly(tuple([1] + [-c for c in f[1:]]))


def mobius(n: int) -> int:
    if n < 1:
        raise DomainError(f"mobius is defined for positive integers, got {n}")
    factors = sympy.factorint(n)
    if any(e > 1 for e in factors.values()):
        return 0
    return -1 if len(factors) % 2 else 1


def net_trace(taus: Sequence[Any], n: int) -> Any:
    """sum over d | n of mu(n/d) * taus[d-1]; exact for ints and Fractions."""
    if not 1 <= n <= len(taus):
        raise DomainError(f"net trace index {n} outside 1..{len(taus)}")
    total: Any = 0
    for d in sympy.divisors(n):
        mu = mobius(n // d)
        if mu:
            total += mu * taus[d - 1]
    return total


def net_traces(taus: Sequence[Any]) -> list[Any]:
    return [net_trace(taus, n) for n in range(1, len(taus) + 1)]


def zeta_series(a: IntMatrix, order: int) -> RationalSeries:
    """1/det(I - tA) modulo t^(order+1)."""
    p = det_one_minus_tA(a)
    return RationalSeries.of(list(p.coeffs), order).reciprocal()


def zeta_exp_side(a: IntMatrix, order: int) -> RationalSeries:
    """exp(sum trace(A^n) t^n / n) modulo t^(order+1)."""
    taus = matrix_traces(a, order)
    coeffs = [Fraction(0)] + [Fraction(tau, n) for n, tau in enumerate(taus, start=1)]
    return RationalSeries.of(coeffs, order).exp()


def polymatrix_det(
    rows: Sequence[Sequence[IntPoly]],
) -> IntPoly:
    """Determinant of a square matrix over Z[t]."""
    return generic_determinant(rows, IntPoly.zero(), IntPoly.one())


__all__ = [
    "berkowitz_coefficients",
    "generic_determinant",
    "char_poly",
    "det_one_minus_tA",
    "determinant",
    "matrix_traces",
    "traces_from_poly",
    "poly_from_traces",
    "mobius",
    "net_trace",
    "net_traces",
    "zeta_series",
    "zeta_exp_side",
    "polymatrix_det",
]
