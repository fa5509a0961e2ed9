"""Truncated power series over Q."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from utils.errors import DomainError

Number = Union[int, Fraction]


@dataclass(frozen=True)
class RationalSeries:
    """Power series known modulo t^(order+1)."""

    order: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.order < 0:
            raise DomainError("series order must be nonnegative")
        padded = [Fraction(c) for c in self.coeffs[: self.order + 1]]
        padded += [Fraction(0)] * (self.order + 1 - len(padded))
        object.__setattr__(self, "coeffs", tuple(padded))

    @classmethod
    def of(cls, coeffs: Sequence[Number], order: int) -> "RationalSeries":
        return cls(order, tuple(Fraction(c) for c in coeffs))

    @classmethod
    def one(cls, order: int) -> "RationalSeries":
        return cls(order, (Fraction(1),))

    def __getitem__(self, n: int) -> Fraction:
        return self.coeffs[n]

    def _check(self, other: "RationalSeries") -> None:
        if self.order != other.order:
            raise DomainError(
                f"series orders differ ({self.order} vs {other.order})"
            )

    def __add__(self, other: "RationalSeries") -> "RationalSeries":
        self._check(other)
        return RationalSeries(
            self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __sub__(self, other: "RationalSeries") -> "RationalSeries":
        self._check(other)
        return RationalSeries(
            self.order, tuple(a - b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __mul__(self, other: "RationalSeries") -> "RationalSeries":
        self._check(other)
        n = self.order
        out = [Fraction(0)] * (n + 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j in range(n + 1 - i):
                    out[i + j] += a * other.coeffs[j]
        return RationalSeries(n, tuple(out))

    def reciprocal(self) -> "RationalSeries":
        """1/f for f with constant term 1."""
        if self.coeffs[0] != 1:
            raise DomainError("reciprocal needs constant term 1")
        f = self.coeffs
        g = [Fraction(1)]
        for n in range(1, self.order + 1):
            g.append(-sum((f[k] * g[n - k] for k in range(1, n + 1)), Fraction(0)))
        return RationalSeries(self.order, tuple(g))

    def exp(self) -> "RationalSeries":
        """exp(f) for f with zero constant term."""
        if self.coeffs[0] != 0:
            raise DomainError("exp needs zero constant term")
        f = self.coeffs
        g = [Fraction(1)]
        for n in range(1, self.order + 1):
            s = sum((k * f[k] * g[n - k] for k in range(1, n + 1)), Fraction(0))
            g.append(s / n)
        return RationalSeries(self.order, tuple(g))

    def log(self) -> "RationalSeries":
        """log(f) for f with constant term 1."""
        if self.coeffs[0] != 1:
            raise DomainError("log needs constant term 1")
        f = self.coeffs
        h = [Fraction(0)]
        for n in range(1, self.order + 1):
            s = n * f[n] - sum((k * h[k] * f[n - k] for k in range(1, n)), Fraction(0))
            h.append(s / n)
        return RationalSeries(self.order, tuple(h))

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def as_ints(self) -> list[int]:
        if not self.is_integral():
            raise DomainError("series has non-integral coefficients")
        return [int(c) for c in self.coeffs]

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]


__all__ = ["RationalSeries"]
