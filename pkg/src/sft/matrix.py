"""Immutable integer matrices with exact arithmetic."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence, Union

from utils.errors import DimensionError


@dataclass(frozen=True)
class IntMatrix:
    """Rectangular matrix of Python ints, stored row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise DimensionError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    # construction -----------------------------------------------------

    @classmethod
    def from_rows(
        cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None
    ) -> "IntMatrix":
        """Build from nested rows; ``cols`` fixes the width of a 0-row matrix."""
        n = len(rows)
        m = len(rows[0]) if n else (cols or 0)
        flat: list[int] = []
        for i, row in enumerate(rows):
            if len(row) != m:
                raise DimensionError(f"row {i} has {len(row)} entries, expected {m}")
            flat.extend(int(x) for x in row)
        return cls(n, m, tuple(flat))

    @classmethod
    def zeros(cls, rows: int, cols: Optional[int] = None) -> "IntMatrix":
        cols = rows if cols is None else cols
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def diag(cls, values: Sequence[int]) -> "IntMatrix":
        n = len(values)
        return cls(
            n, n, tuple(values[i] if i == j else 0 for i in range(n) for j in range(n))
        )

    @classmethod
    def scalar(cls, value: int) -> "IntMatrix":
        return cls(1, 1, (value,))

    @classmethod
    def unit(cls, rows: int, cols: int, i: int, j: int) -> "IntMatrix":
        """Matrix unit e_ij."""
        data = [0] * (rows * cols)
        data[i * cols + j] = 1
        return cls(rows, cols, tuple(data))

    @classmethod
    def permutation(cls, perm: Sequence[int]) -> "IntMatrix":
        """P with P[i][perm[i]] = 1."""
        n = len(perm)
        return cls.from_rows(
            [[1 if j == perm[i] else 0 for j in range(n)] for i in range(n)]
        )

    @classmethod
    def random(
        cls,
        rng: random.Random,
        rows: int,
        cols: Optional[int] = None,
        low: int = 0,
        high: int = 2,
    ) -> "IntMatrix":
        cols = rows if cols is None else cols
        return cls(rows, cols, tuple(rng.randint(low, high) for _ in range(rows * cols)))

    @classmethod
    def block(cls, blocks: Sequence[Sequence["IntMatrix"]]) -> "IntMatrix":
        """Assemble a block matrix; block rows must agree in height."""
        out: list[list[int]] = []
        width: Optional[int] = None
        for brow in blocks:
            if not brow:
                continue
            height = brow[0].rows
            if any(b.rows != height for b in brow):
                raise DimensionError("blocks in one block row differ in height")
            row_width = sum(b.cols for b in brow)
            if width is None:
                width = row_width
            elif width != row_width:
                raise DimensionError("block rows differ in total width")
            for r in range(height):
                line: list[int] = []
                for b in brow:
                    line.extend(b.row(r))
                out.append(line)
        return cls.from_rows(out, cols=width or 0)

    # access -------------------------------------------------------------

    def __getitem__(self, index: tuple[int, int]) -> int:
        i, j = index
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"index ({i}, {j}) outside {self.rows}x{self.cols}")
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return (self.row(i) for i in range(self.rows))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def require_square(self, what: str = "operation") -> int:
        if not self.is_square:
            raise DimensionError(f"{what} needs a square matrix, got {self.rows}x{self.cols}")
        return self.rows

    def trace(self) -> int:
        n = self.require_square("trace")
        return sum(self.entries[i * n + i] for i in range(n))

    def is_nonnegative(self) -> bool:
        return all(x >= 0 for x in self.entries)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_positive(self) -> bool:
        return all(x > 0 for x in self.entries)

    def support(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(1 if x else 0 for x in self.entries))

    def det(self) -> int:
        from sft.algebra import determinant

        return determinant(self)

    def is_unimodular(self) -> bool:
        return self.is_square and abs(self.det()) == 1

    # arithmetic -----------------------------------------------------------

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._same_shape(other, "add")
        return IntMatrix(
            self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries))
        )

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        self._same_shape(other, "subtract")
        return IntMatrix(
            self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries))
        )

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def __mul__(self, other: Union["IntMatrix", int]) -> "IntMatrix":
        if isinstance(other, int):
            return IntMatrix(self.rows, self.cols, tuple(other * a for a in self.entries))
        return self.matmul(other)

    def __rmul__(self, other: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(other * a for a in self.entries))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        return self.matmul(other)

    def matmul(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        n, k, m = self.rows, self.cols, other.cols
        a, b = self.entries, other.entries
        out = [0] * (n * m)
        for i in range(n):
            for t in range(k):
                x = a[i * k + t]
                if x:
                    base = t * m
                    for j in range(m):
                        y = b[base + j]
                        if y:
                            out[i * m + j] += x * y
        return IntMatrix(n, m, tuple(out))

    def power(self, k: int) -> "IntMatrix":
        n = self.require_square("power")
        if k < 0:
            raise ValueError("negative matrix power")
        result = IntMatrix.identity(n)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def __pow__(self, k: int) -> "IntMatrix":
        return self.power(k)

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows(
            [list(self.col(j)) for j in range(self.cols)], cols=self.rows
        )

    @property
    def T(self) -> "IntMatrix":
        return self.transpose()

    def direct_sum(self, other: "IntMatrix") -> "IntMatrix":
        return IntMatrix.block(
            [
                [self, IntMatrix.zeros(self.rows, other.cols)],
                [IntMatrix.zeros(other.rows, self.cols), other],
            ]
        )

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "IntMatrix":
        rs, cs = list(rows), list(cols)
        return IntMatrix.from_rows([[self[i, j] for j in cs] for i in rs], cols=len(cs))

    def principal(self, indices: Sequence[int]) -> "IntMatrix":
        return self.submatrix(indices, indices)

    def permute(self, perm: Sequence[int]) -> "IntMatrix":
        """Reorder vertices: the result has entry (i, j) = self[perm[i], perm[j]]."""
        return self.principal(perm)

    def with_entry(self, i: int, j: int, value: int) -> "IntMatrix":
        data = list(self.entries)
        data[i * self.cols + j] = value
        return IntMatrix(self.rows, self.cols, tuple(data))

    def _same_shape(self, other: "IntMatrix", op: str) -> None:
        if self.shape != other.shape:
            raise DimensionError(
                f"cannot {op} {self.rows}x{self.cols} and {other.rows}x{other.cols}"
            )

    def __str__(self) -> str:
        if not self.rows or not self.cols:
            return f"[{self.rows}x{self.cols}]"
        width = max(len(str(x)) for x in self.entries)
        return "\n".join(" ".join(str(x).rjust(width) for x in r) for r in self)


def unimodular_inverse(u: IntMatrix) -> IntMatrix:
    """Exact inverse of a unimodular matrix via Cayley-Hamilton."""
    from sft.algebra import char_poly

    n = u.require_square("inverse")
    if n == 0:
        return u
    c = char_poly(u).coeffs
    c0 = c[0]
    if abs(c0) != 1:
        raise DimensionError("matrix is not unimodular")
    # u^{-1} = -(1/c0) (u^{n-1} + c_{n-1} u^{n-2} + ... + c_1 I)
    acc = IntMatrix.zeros(n)
    for k in range(n, 0, -1):
        acc = acc @ u + IntMatrix.identity(n) * (c[k] if k < len(c) else 0)
    return acc * (-c0)


__all__ = ["IntMatrix", "unimodular_inverse"]
