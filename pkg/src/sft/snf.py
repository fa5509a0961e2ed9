"""Smith normal form over Z and finitely generated abelian groups."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterator, Optional

from sft.matrix import IntMatrix
from utils.errors import DimensionError
from utils.logging import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class FGAbelianGroup:
    """Z^free_rank + Z/d_1 + ... + Z/d_k with d_i >= 2 and d_i | d_(i+1)."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.free_rank < 0:
            raise DimensionError("free rank must be nonnegative")
        for i, d in enumerate(self.torsion):
            if d < 2:
                raise DimensionError(f"invariant factor {d} is below 2")
            if i and d % self.torsion[i - 1]:
                raise DimensionError("invariant factors must form a divisibility chain")

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def order(self) -> Optional[int]:
        """Group order, or None when infinite."""
        if self.free_rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def __str__(self) -> str:
        parts: list[str] = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"

    def to_dict(self) -> dict[str, Any]:
        return {
            "free_rank": self.free_rank,
            "torsion": list(self.torsion),
            "display": str(self),
        }


@dataclass(frozen=True)
class SmithForm:
    """U * M * V = D with U, V unimodular."""

    u: IntMatrix
    d: IntMatrix
    v: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.d[i, i] for i in range(min(self.d.rows, self.d.cols))]

    def __iter__(self) -> Iterator[IntMatrix]:
        return iter((self.u, self.d, self.v))


def smith_normal_form(m: IntMatrix) -> SmithForm:
    """Smith normal form by smallest-absolute-value pivoting."""
    rows, cols = m.rows, m.cols
    d = m.to_rows()
    u = IntMatrix.identity(rows).to_rows()
    v = IntMatrix.identity(cols).to_rows()

    def swap_rows(a: int, b: int) -> None:
        d[a], d[b] = d[b], d[a]
        u[a], u[b] = u[b], u[a]

    def swap_cols(a: int, b: int) -> None:
        for row in d:
            row[a], row[b] = row[b], row[a]
        for row in v:
            row[a], row[b] = row[b], row[a]

    def add_row(target: int, source: int, q: int) -> None:
        d[target] = [x + q * y for x, y in zip(d[target], d[source])]
        u[target] = [x + q * y for x, y in zip(u[target], u[source])]

    def add_col(target: int, source: int, q: int) -> None:
        for row in d:
            row[target] += q * row[source]
        for row in v:
            row[target] += q * row[source]

    steps = 0
    for k in range(min(rows, cols)):
        while True:
            steps += 1
            pivot: Optional[tuple[int, int]] = None
            for i in range(k, rows):
                for j in range(k, cols):
                    if d[i][j] and (pivot is None or abs(d[i][j]) < abs(d[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                break
            swap_rows(k, pivot[0])
            swap_cols(k, pivot[1])
            p = d[k][k]
            clean = True
            for i in range(k + 1, rows):
                if d[i][k]:
                    add_row(i, k, -(d[i][k] // p))
                    clean = clean and d[i][k] == 0
            for j in range(k + 1, cols):
                if d[k][j]:
                    add_col(j, k, -(d[k][j] // p))
                    clean = clean and d[k][j] == 0
            if not clean:
                continue
            offender = next(
                (i for i in range(k + 1, rows) for j in range(k + 1, cols) if d[i][j] % p),
                None,
            )
            if offender is not None:
                add_row(k, offender, 1)
                continue
            break
        if d[k][k] < 0:
            d[k] = [-x for x in d[k]]
            u[k] = [-x for x in u[k]]

    logger.debug(
        "Smith normal form computed",
        extra={"rows": rows, "cols": cols, "pivot_rounds": steps},
    )
    return SmithForm(
        IntMatrix.from_rows(u, cols=rows),
        IntMatrix.from_rows(d, cols=cols),
        IntMatrix.from_rows(v, cols=cols),
    )


def invariant_factors(m: IntMatrix) -> list[int]:
    return [x for x in smith_normal_form(m).diagonal if x]


def cokernel(m: IntMatrix) -> FGAbelianGroup:
    """Z^n / image(M) for square M."""
    n = m.require_square("cokernel")
    diag = smith_normal_form(m).diagonal
    nonzero = [x for x in diag if x]
    return FGAbelianGroup(n - len(nonzero), tuple(x for x in nonzero if x >= 2))


__all__ = ["FGAbelianGroup", "SmithForm", "smith_normal_form", "invariant_factors", "cokernel"]
