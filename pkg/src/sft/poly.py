"""Dense univariate integer polynomials.

Coefficients are stored in ascending order with trailing zeros stripped, so
equality of polynomials is equality of coefficient tuples. The textual grammar
is ``c0+c1*t+c2*t^2`` (no spaces); terms may come in any order, repeat, or use
a leading ``-``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import sympy

from utils.errors import MalformedInputError

_TERM = re.compile(r"([+-]?)(\d*)(\*?)(t(?:\^(\d+))?)?")


def _strip(coeffs: Iterable[int]) -> tuple[int, ...]:
    out = [int(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class IntPoly:
    """Polynomial over Z, index i holding the coefficient of t^i."""

    coeffs: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _strip(self.coeffs))

    # construction -----------------------------------------------------

    @classmethod
    def of(cls, *coeffs: int) -> "IntPoly":
        return cls(tuple(coeffs))

    @classmethod
    def constant(cls, c: int) -> "IntPoly":
        return cls((c,))

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> "IntPoly":
        if degree < 0:
            raise ValueError("degree must be nonnegative")
        return cls((0,) * degree + (coeff,))

    @classmethod
    def zero(cls) -> "IntPoly":
        return cls(())

    @classmethod
    def one(cls) -> "IntPoly":
        return cls((1,))

    @classmethod
    def parse(cls, text: str, line: int | None = None, column: int = 1) -> "IntPoly":
        """Parse the ``c0+c1*t+c2*t^2`` grammar.

        ``line``/``column`` locate ``text`` inside a larger document so errors
        point at the offending character.
        """
        if not text:
            raise MalformedInputError("empty polynomial", line, column)
        if any(ch.isspace() for ch in text):
            raise MalformedInputError("polynomial entries contain no spaces", line, column)
        coeffs: dict[int, int] = {}
        pos = 0
        while pos < len(text):
            match = _TERM.match(text, pos)
            if match is None or match.end() == pos:
                raise MalformedInputError(
                    f"unexpected character {text[pos]!r}", line, column + pos
                )
            sign, digits, star, var, power = match.groups()
            if pos > 0 and not sign:
                raise MalformedInputError("expected '+' or '-'", line, column + pos)
            if not digits and not var:
                raise MalformedInputError("dangling sign", line, column + pos)
            if star and not (digits and var):
                raise MalformedInputError("misplaced '*'", line, column + pos)
            if digits and var and not star:
                raise MalformedInputError(
                    "write coefficients as c*t^k", line, column + pos
                )
            value = int(digits) if digits else 1
            if sign == "-":
                value = -value
            degree = 0
            if var:
                degree = int(power) if power is not None else 1
            coeffs[degree] = coeffs.get(degree, 0) + value
            pos = match.end()
        top = max(coeffs) if coeffs else -1
        return cls(tuple(coeffs.get(i, 0) for i in range(top + 1)))

    # queries ------------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    @property
    def constant_term(self) -> int:
        return self.coeff(0)

    def is_nonnegative(self) -> bool:
        return all(c >= 0 for c in self.coeffs)

    def evaluate(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def monomial_units(self) -> list[int]:
        """Degrees with multiplicity, ascending (t^2+2t^3 -> [2, 3, 3])."""
        if not self.is_nonnegative():
            raise ValueError("monomial units need nonnegative coefficients")
        units: list[int] = []
        for degree, c in enumerate(self.coeffs):
            units.extend([degree] * c)
        return units

    # arithmetic -----------------------------------------------------------

    def __add__(self, other: Union["IntPoly", int]) -> "IntPoly":
        o = _coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return IntPoly(tuple(self.coeff(i) + o.coeff(i) for i in range(n)))

    __radd__ = __add__

    def __neg__(self) -> "IntPoly":
        return IntPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: Union["IntPoly", int]) -> "IntPoly":
        return self + (-_coerce(other))

    def __rsub__(self, other: Union["IntPoly", int]) -> "IntPoly":
        return _coerce(other) - self

    def __mul__(self, other: Union["IntPoly", int]) -> "IntPoly":
        o = _coerce(other)
        if self.is_zero() or o.is_zero():
            return IntPoly()
        out = [0] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    out[i + j] += a * b
        return IntPoly(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "IntPoly":
        result = IntPoly.one()
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return self.coeffs == _strip((other,))
        if isinstance(other, IntPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def compose_power(self, p: int) -> "IntPoly":
        """q(t^p)."""
        if p < 1:
            raise ValueError("p must be positive")
        out = [0] * (p * max(self.degree, 0) + 1)
        for i, c in enumerate(self.coeffs):
            out[i * p] = c
        return IntPoly(tuple(out))

    def reverse(self, n: int) -> "IntPoly":
        """t^n * p(1/t) for n >= degree."""
        if n < self.degree:
            raise ValueError("reverse length below degree")
        padded = list(self.coeffs) + [0] * (n + 1 - len(self.coeffs))
        return IntPoly(tuple(reversed(padded)))

    def strip_t(self) -> tuple[int, "IntPoly"]:
        """Split off the largest power of t: returns (k, p / t^k)."""
        k = 0
        while k < len(self.coeffs) and self.coeffs[k] == 0:
            k += 1
        return k, IntPoly(self.coeffs[k:])

    def derivative(self) -> "IntPoly":
        return IntPoly(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def shifted(self, k: int) -> "IntPoly":
        """t^k * p."""
        return IntPoly((0,) * k + self.coeffs)

    # formatting -----------------------------------------------------------

    def to_text(self) -> str:
        """Render in the file grammar, e.g. ``1-2*t+t^3``."""
        if self.is_zero():
            return "0"
        parts: list[str] = []
        for degree, c in enumerate(self.coeffs):
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if degree == 0:
                body = str(mag)
            else:
                var = "t" if degree == 1 else f"t^{degree}"
                body = var if mag == 1 else f"{mag}*{var}"
            parts.append(sign + body)
        text = "".join(parts)
        return text[1:] if text.startswith("+") else text

    def pretty(self) -> str:
        """Human form with spaces, ascending: ``1 - 11t + 39t^2``."""
        if self.is_zero():
            return "0"
        out = ""
        for degree, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = abs(c)
            if degree == 0:
                body = str(mag)
            else:
                var = "t" if degree == 1 else f"t^{degree}"
                body = var if mag == 1 else f"{mag}{var}"
            if not out:
                out = ("-" if c < 0 else "") + body
            else:
                out += (" - " if c < 0 else " + ") + body
        return out

    def __str__(self) -> str:
        return self.pretty()


def _coerce(value: Union[IntPoly, int]) -> IntPoly:
    if isinstance(value, IntPoly):
        return value
    if isinstance(value, int):
        return IntPoly((value,))
    raise TypeError(f"cannot combine IntPoly with {type(value).__name__}")


def product(polys: Iterable[IntPoly]) -> IntPoly:
    result = IntPoly.one()
    for p in polys:
        result = result * p
    return result


_T = sympy.Symbol("t")


def factored_display(p: IntPoly) -> str:
    """Factor over Z and print factors with positive constant terms.

    ``1 - 3t + 2t^2`` prints as ``(1 - 2t)(1 - t)``.
    """
    if p.is_zero():
        return "0"
    if p.degree == 0:
        return str(p.coeffs[0])
    poly = sympy.Poly(list(reversed(p.coeffs)), _T)
    content, factors = poly.factor_list()
    sign = 1 if int(content) > 0 else -1
    scale = abs(int(content))
    pieces: list[tuple[int, tuple[int, ...], int]] = []
    for factor, mult in factors:
        coeffs = [int(c) for c in reversed(factor.all_coeffs())]
        if coeffs[0] < 0 or (coeffs[0] == 0 and coeffs[-1] < 0):
            coeffs = [-c for c in coeffs]
            if mult % 2:
                sign = -sign
        pieces.append((len(coeffs) - 1, tuple(coeffs), mult))
    pieces.sort()
    body = ""
    for _, coeffs, mult in pieces:
        text = IntPoly(coeffs).pretty()
        body += f"({text})" + (f"^{mult}" if mult > 1 else "")
    prefix = ""
    if scale != 1:
        prefix = str(scale)
    if sign < 0:
        prefix = "-" + prefix
    return prefix + body


def from_roots(roots: Sequence[int]) -> IntPoly:
    """Monic product of (t - r)."""
    return product(IntPoly.of(-r, 1) for r in roots)


__all__ = ["IntPoly", "product", "factored_display", "from_roots"]
