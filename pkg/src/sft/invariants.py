"""Invariant reports and the 2x2 triangular family [[a, x], [0, b]].

Inside the family, similarity over Z and shift equivalence over Z reduce to
arithmetic on the residue of x modulo d = a - b:

* SIM-Z classes are the orbits of x -> -x;
* SE-Z classes are the components of the graph on residues generated by
  x -> -x and x -> q*x for every prime q dividing a*b.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Optional

import networkx as nx
import sympy

from sft.algebra import char_poly, det_one_minus_tA, matrix_traces
from sft.matrix import IntMatrix, unimodular_inverse
from sft.poly import IntPoly, factored_display
from sft.snf import FGAbelianGroup, cokernel
from sft.structure import is_irreducible, is_primitive, period
from utils.errors import (
    BudgetExceededError,
    DomainError,
    FamilyMismatchError,
    InapplicableError,
    VerificationError,
)
from utils.logging import get_logger

logger = get_logger(__name__)


# reports ------------------------------------------------------------------


@dataclass(frozen=True)
class InvariantReport:
    det_I_tA: IntPoly
    char_poly: IntPoly
    zero_multiplicity: int
    bowen_franks: FGAbelianGroup
    det_I_A: int
    traces: tuple[int, ...]
    primitive: Optional[bool]
    period: Optional[int]
    nonnegative: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "det_I_tA": self.det_I_tA.to_text(),
            "det_I_tA_factored": factored_display(self.det_I_tA),
            "char_poly": self.char_poly.to_text(),
            "zero_multiplicity": self.zero_multiplicity,
            "bowen_franks": self.bowen_franks.to_dict(),
            "det_I_A": self.det_I_A,
            "traces": list(self.traces),
            "primitive": self.primitive if self.nonnegative else "inapplicable",
            "period": self.period if self.nonnegative else "inapplicable",
        }

    def summary_lines(self) -> list[str]:
        lines = [
            f"det(I-tA) = {factored_display(self.det_I_tA)}",
            f"char poly = {self.char_poly}",
            f"zero eigenvalue multiplicity: {self.zero_multiplicity}",
            f"Bowen-Franks group: {self.bowen_franks}",
            f"det(I-A) = {self.det_I_A}",
            "traces: " + ", ".join(str(t) for t in self.traces),
        ]
        if not self.nonnegative:
            lines.append("primitive/period: inapplicable (negative entries)")
        else:
            lines.append(f"primitive: {'yes' if self.primitive else 'no'}")
            lines.append(
                f"period: {self.period}" if self.period is not None else "period: reducible"
            )
        return lines


def invariant_report(a: IntMatrix, count: int) -> InvariantReport:
    n = a.require_square("invariant report")
    p = det_one_minus_tA(a)
    nonneg = a.is_nonnegative()
    primitive: Optional[bool] = None
    per: Optional[int] = None
    if nonneg and n:
        primitive = is_primitive(a).primitive
        per = period(a) if is_irreducible(a) else None
    return InvariantReport(
        det_I_tA=p,
        char_poly=char_poly(a),
        zero_multiplicity=n - max(p.degree, 0),
        bowen_franks=cokernel(IntMatrix.identity(n) - a),
        det_I_A=p.evaluate(1),
        traces=tuple(matrix_traces(a, count)),
        primitive=primitive,
        period=per,
        nonnegative=nonneg,
    )


# triangular family ----------------------------------------------------------


@dataclass(frozen=True)
class TriangularFamily:
    """Matrices over Z with characteristic polynomial (t - a)(t - b)."""

    a: int
    b: int

    def __post_init__(self) -> None:
        if not self.a > abs(self.b) > 0:
            raise DomainError(f"family needs a > |b| > 0, got a={self.a}, b={self.b}")

    @property
    def modulus(self) -> int:
        return self.a - self.b

    @property
    def primes(self) -> list[int]:
        return [int(q) for q in sympy.primefactors(abs(self.a * self.b))]

    def matrix(self, x: int) -> IntMatrix:
        return IntMatrix.from_rows([[self.a, x], [0, self.b]])

    def char_poly(self) -> IntPoly:
        return IntPoly.of(-self.a, 1) * IntPoly.of(-self.b, 1)


def canonical_residue(fam: TriangularFamily, x: int) -> int:
    d = fam.modulus
    return min(x % d, (-x) % d)


@dataclass(frozen=True)
class TriangularReduction:
    u: IntMatrix
    x: int
    raw_x: int


def _shear(m: int) -> IntMatrix:
    return IntMatrix.from_rows([[1, m], [0, 1]])


def reduce_to_triangular(a: IntMatrix, fam: TriangularFamily) -> TriangularReduction:
    """Find unimodular U with U^-1 A U = [[a, x], [0, b]], x canonical."""
    if a.shape != (2, 2):
        raise FamilyMismatchError("the triangular family holds 2x2 matrices")
    if char_poly(a) != fam.char_poly():
        raise FamilyMismatchError(
            f"characteristic polynomial {char_poly(a)} is not (t - {fam.a})(t - {fam.b})"
        )
    (p, q), (r, s) = (a - IntMatrix.identity(2) * fam.a).to_rows()
    v1, v2 = (-q, p) if (p or q) else (-s, r)
    g = int(abs(sympy.igcd(v1, v2)))
    v1, v2 = v1 // g, v2 // g
    x_coef, y_coef, _ = sympy.igcdex(v1, v2)
    u = IntMatrix.from_rows([[v1, -int(y_coef)], [v2, int(x_coef)]])
    tri = unimodular_inverse(u) @ a @ u
    raw = tri[0, 1]
    d = fam.modulus
    target = canonical_residue(fam, raw)
    if (raw - target) % d == 0:
        u = u @ _shear((target - raw) // d)
    else:
        u = u @ IntMatrix.diag([1, -1]) @ _shear((target + raw) // d)
    if unimodular_inverse(u) @ a @ u != fam.matrix(target):
        raise VerificationError("triangular reduction failed to verify")
    return TriangularReduction(u=u, x=target, raw_x=raw)


def sim_z_equivalent(fam: TriangularFamily, x: int, y: int) -> bool:
    d = fam.modulus
    return (x - y) % d == 0 or (x + y) % d == 0


def se_graph(fam: TriangularFamily) -> nx.Graph:
    d = fam.modulus
    g = nx.Graph()
    g.add_nodes_from(range(d))
    for r in range(d):
        g.add_edge(r, (-r) % d)
        for q in fam.primes:
            g.add_edge(r, (q * r) % d)
    return g


def se_z_equivalent(fam: TriangularFamily, x: int, y: int) -> bool:
    d = fam.modulus
    return bool(nx.has_path(se_graph(fam), x % d, y % d))


def canonical_classes(fam: TriangularFamily) -> dict[str, list[list[int]]]:
    """SIM and SE classes as sorted residue lists."""
    d = fam.modulus
    sim: dict[int, list[int]] = {}
    for r in range(d):
        sim.setdefault(canonical_residue(fam, r), []).append(r)
    se = sorted(sorted(c) for c in nx.connected_components(se_graph(fam)))
    return {"sim": [sim[k] for k in sorted(sim)], "se": se}


def class_counts(fam: TriangularFamily) -> tuple[int, int]:
    classes = canonical_classes(fam)
    return len(classes["sim"]), len(classes["se"])


def transpose_partner(fam: TriangularFamily, x: int) -> int:
    """y with x*y = 1 mod d, so that the transpose of M_x is SE-Z to M_y."""
    d = fam.modulus
    if d == 1:
        return 0
    if sympy.igcd(x, d) != 1:
        raise InapplicableError(f"x = {x} is not invertible modulo {d}")
    return int(sympy.mod_inverse(x, d))


def transpose_se_test(fam: TriangularFamily, x: int) -> bool:
    return se_z_equivalent(fam, x, transpose_partner(fam, x))


# cross-checks ----------------------------------------------------------------


def similarity_oracle(
    a: IntMatrix, b: IntMatrix, bound: int, max_candidates: int = 5_000_000
) -> Optional[IntMatrix]:
    """Search unimodular U with entries in [-bound, bound] and U A = B U."""
    n = a.require_square("similarity search")
    if b.shape != a.shape:
        return None
    if (2 * bound + 1) ** (n * n) > max_candidates:
        raise BudgetExceededError(
            f"similarity search space exceeds {max_candidates} candidates"
        )
    for entries in itertools.product(range(-bound, bound + 1), repeat=n * n):
        u = IntMatrix(n, n, tuple(entries))
        if u @ a == b @ u and abs(u.det()) == 1:
            return u
    return None


def riedel_pair(k: int) -> tuple[IntMatrix, IntMatrix]:
    """A_k = [[k, 2], [1, k]] and B_k = [[k-1, 1], [1, k+1]]."""
    return (
        IntMatrix.from_rows([[k, 2], [1, k]]),
        IntMatrix.from_rows([[k - 1, 1], [1, k + 1]]),
    )


def shear_conjugate(fam: TriangularFamily, x: int) -> tuple[IntMatrix, IntMatrix]:
    """L M_x L^-1 with L = [[1, 0], [1, 1]], returned with L."""
    low = IntMatrix.from_rows([[1, 0], [1, 1]])
    low_inv = IntMatrix.from_rows([[1, 0], [-1, 1]])
    return low @ fam.matrix(x) @ low_inv, low


__all__ = [
    "InvariantReport",
    "invariant_report",
    "TriangularFamily",
    "TriangularReduction",
    "canonical_residue",
    "reduce_to_triangular",
    "sim_z_equivalent",
    "se_graph",
    "se_z_equivalent",
    "canonical_classes",
    "class_counts",
    "transpose_partner",
    "transpose_se_test",
    "similarity_oracle",
    "riedel_pair",
    "shear_conjugate",
]
