"""Periodic points, sliding block codes and the conjugacy c(R, S).

Points of period n are closed edge paths of length n, written as tuples of
edge indices in the numbering of ``structure.edge_list``. The shift rotates a
word left by one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping, Optional, Sequence

from sft.equivalence import EsseWitness
from sft.matrix import IntMatrix
from sft.structure import edge_list, edge_words, nondegenerate_core, require_nonnegative
from utils.errors import (
    BudgetExceededError,
    DimensionError,
    NotAutomorphismError,
    PreconditionError,
)
from utils.logging import get_logger

logger = get_logger(__name__)

Word = tuple[int, ...]


def rotate(word: Word, r: int = 1) -> Word:
    """sigma^r applied to a cyclic word."""
    if not word:
        return word
    r %= len(word)
    return word[r:] + word[:r]


def least_rotation(word: Word) -> Word:
    return min(rotate(word, r) for r in range(len(word))) if word else word


def least_period(word: Word) -> int:
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and rotate(word, p) == word:
            return p
    return n


@dataclass(frozen=True)
class Orbit:
    representative: Word
    period: int


@dataclass(frozen=True)
class PeriodicOrbitTable:
    """All points of period n (not necessarily least) of the edge shift of A."""

    matrix: IntMatrix
    level: int
    points: tuple[Word, ...]
    orbits: tuple[Orbit, ...]

    def orbit_of(self, word: Word) -> Word:
        return least_rotation(word)

    def least_period_points(self, k: Optional[int] = None) -> list[Word]:
        k = self.level if k is None else k
        return [w for w in self.points if least_period(w) == k]

    def least_period_orbits(self, k: Optional[int] = None) -> list[Orbit]:
        k = self.level if k is None else k
        return [o for o in self.orbits if o.period == k]

    def counts(self) -> dict[str, int]:
        return {
            "points": len(self.points),
            "least_period_points": len(self.least_period_points()),
            "least_period_orbits": len(self.least_period_orbits()),
        }


def enumerate_periodic(
    a: IntMatrix, n: int, budget: Optional[int] = None
) -> PeriodicOrbitTable:
    """Closed edge paths of length n in lexicographic order."""
    size = require_nonnegative(a, "periodic point enumeration")
    if n < 1:
        raise PreconditionError("period level must be at least 1")
    count = a.power(n).trace()
    if budget is not None and count > budget:
        raise BudgetExceededError(f"trace(A^{n}) = {count} exceeds budget {budget}")
    edges = edge_list(a)
    out_edges: dict[int, list[int]] = {}
    for idx, (i, _, _) in enumerate(edges):
        out_edges.setdefault(i, []).append(idx)
    powers = [IntMatrix.identity(size)]
    for _ in range(n - 1):
        powers.append(powers[-1] @ a)

    points: list[Word] = []

    def extend(start: int, at: int, prefix: list[int]) -> None:
        remaining = n - len(prefix)
        if remaining == 0:
            if at == start:
                points.append(tuple(prefix))
            return
        for e in out_edges.get(at, []):
            target = edges[e][1]
            if powers[remaining - 1][target, start]:
                prefix.append(e)
                extend(start, target, prefix)
                prefix.pop()

    for v in range(size):
        extend(v, v, [])
    points.sort()
    reps = sorted({least_rotation(w) for w in points})
    orbits = tuple(Orbit(r, least_period(r)) for r in reps)
    logger.debug(
        "Periodic points enumerated", extra={"level": n, "points": len(points)}
    )
    return PeriodicOrbitTable(a, n, tuple(points), orbits)


# block codes ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BlockCode:
    """y_i = table[x_(i+j) ... x_(i+k)] for window (j, k)."""

    domain: IntMatrix
    range: IntMatrix
    window: tuple[int, int]
    table: Mapping[Word, int] = field(repr=False)

    def __post_init__(self) -> None:
        j, k = self.window
        if j > k:
            raise PreconditionError(f"window ({j}, {k}) needs j <= k")
        self._validate()

    @property
    def length(self) -> int:
        return self.window[1] - self.window[0] + 1

    def _validate(self) -> None:
        dom_words = edge_words(self.domain, self.length)
        missing = [w for w in dom_words if w not in self.table]
        if missing:
            raise PreconditionError(f"block code has no image for word {missing[0]}")
        range_edges = edge_list(self.range)
        for w in edge_words(self.domain, self.length + 1):
            y0, y1 = self.table[w[:-1]], self.table[w[1:]]
            if not (0 <= y0 < len(range_edges) and 0 <= y1 < len(range_edges)):
                raise PreconditionError(f"image symbol outside the range alphabet at {w}")
            if range_edges[y0][1] != range_edges[y1][0]:
                raise PreconditionError(f"images of {w} do not form a legal range word")

    def apply_cyclic(self, word: Word) -> Word:
        n = len(word)
        j = self.window[0]
        return tuple(
            self.table[tuple(word[(i + j + t) % n] for t in range(self.length))]
            for i in range(n)
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "window": list(self.window),
            "table": {",".join(map(str, w)): y for w, y in sorted(self.table.items())},
        }


def identity_code(a: IntMatrix) -> BlockCode:
    n_edges = len(edge_list(a))
    return BlockCode(a, a, (0, 0), {(e,): e for e in range(n_edges)})


def shift_code(a: IntMatrix) -> BlockCode:
    n_edges = len(edge_list(a))
    return BlockCode(a, a, (1, 1), {(e,): e for e in range(n_edges)})


def compose_codes(first: BlockCode, second: BlockCode) -> BlockCode:
    """second after first."""
    if first.range != second.domain:
        raise DimensionError("codes are not composable")
    j1, k1 = first.window
    j2, k2 = second.window
    window = (j1 + j2, k1 + k2)
    length = window[1] - window[0] + 1
    table: dict[Word, int] = {}
    for w in edge_words(first.domain, length):
        mid = tuple(first.table[w[t : t + first.length]] for t in range(second.length))
        table[w] = second.table[mid]
    return BlockCode(first.domain, second.range, window, table)


def is_identity_code(code: BlockCode) -> bool:
    j, k = code.window
    if code.domain != code.range or j > 0 or k < 0:
        return False
    return all(code.table[w] == w[-j] for w in edge_words(code.domain, code.length))


@dataclass(frozen=True, eq=False)
class Automorphism:
    """A block code with an inverse code, checked mutually inverse."""

    forward: BlockCode
    inverse: BlockCode

    def __post_init__(self) -> None:
        if self.forward.domain != self.forward.range:
            raise NotAutomorphismError("an automorphism maps a shift to itself")
        if not (
            is_identity_code(compose_codes(self.forward, self.inverse))
            and is_identity_code(compose_codes(self.inverse, self.forward))
        ):
            raise NotAutomorphismError("codes are not mutually inverse")

    @property
    def matrix(self) -> IntMatrix:
        return self.forward.domain

    def then(self, other: "Automorphism") -> "Automorphism":
        return Automorphism(
            compose_codes(self.forward, other.forward),
            compose_codes(other.inverse, self.inverse),
        )


def shift_automorphism(a: IntMatrix) -> Automorphism:
    n_edges = len(edge_list(a))
    inverse = BlockCode(a, a, (-1, -1), {(e,): e for e in range(n_edges)})
    return Automorphism(shift_code(a), inverse)


def simple_graph_symmetry(a: IntMatrix, perm: Sequence[int]) -> Automorphism:
    """Range-0 automorphism from a permutation of parallel edges."""
    require_nonnegative(a, "graph symmetry")
    edges = edge_list(a)
    if sorted(perm) != list(range(len(edges))):
        raise PreconditionError("edge map is not a permutation of the edges")
    for e, image in enumerate(perm):
        if edges[e][:2] != edges[image][:2]:
            raise PreconditionError(f"edge {e} is sent to non-parallel edge {image}")
    inverse = [0] * len(perm)
    for e, image in enumerate(perm):
        inverse[image] = e
    return Automorphism(
        BlockCode(a, a, (0, 0), {(e,): perm[e] for e in range(len(edges))}),
        BlockCode(a, a, (0, 0), {(e,): inverse[e] for e in range(len(edges))}),
    )


def symbol_permutation_code(n: int, perm: Sequence[int]) -> Automorphism:
    """Symbol permutation of the full n-shift."""
    if n < 1:
        raise PreconditionError("the full shift needs at least one symbol")
    return simple_graph_symmetry(IntMatrix.scalar(n), perm)


# induced maps on periodic points --------------------------------------------


@dataclass(frozen=True, eq=False)
class PeriodicMap:
    """A map between period-n point tables."""

    source: PeriodicOrbitTable
    target: PeriodicOrbitTable
    images: Mapping[Word, Word]

    @property
    def level(self) -> int:
        return self.source.level

    def __call__(self, word: Word) -> Word:
        return self.images[word]

    def is_bijective(self) -> bool:
        values = set(self.images.values())
        return (
            len(self.images) == len(self.source.points)
            and len(values) == len(self.images)
            and values == set(self.target.points)
        )

    def commutes_with_shift(self) -> bool:
        return all(self.images[rotate(w)] == rotate(y) for w, y in self.images.items())

    def orbit_map(self) -> dict[Word, Word]:
        return {o.representative: least_rotation(self.images[o.representative])
                for o in self.source.orbits}


def apply_code_periodic(
    code: BlockCode,
    table: PeriodicOrbitTable,
    automorphism: bool = False,
    target: Optional[PeriodicOrbitTable] = None,
) -> PeriodicMap:
    """Slide the code around every period-n point."""
    if code.domain != table.matrix:
        raise PreconditionError("code domain does not match the table's matrix")
    if target is None:
        target = table if code.range == table.matrix else enumerate_periodic(
            code.range, table.level
        )
    images = {w: code.apply_cyclic(w) for w in table.points}
    out = PeriodicMap(table, target, images)
    if automorphism and not out.is_bijective():
        raise NotAutomorphismError(f"code is not bijective on period-{table.level} points")
    return out


def identity_map(table: PeriodicOrbitTable) -> PeriodicMap:
    return PeriodicMap(table, table, {w: w for w in table.points})


def rotate_orbit(table: PeriodicOrbitTable, representative: Word, r: int = 1) -> PeriodicMap:
    """sigma^r on the orbit of ``representative``, identity elsewhere."""
    rep = least_rotation(representative)
    if rep not in {o.representative for o in table.orbits}:
        raise PreconditionError(f"{representative} is not a point of period {table.level}")
    images = {w: rotate(w, r) if least_rotation(w) == rep else w for w in table.points}
    return PeriodicMap(table, table, images)


def compose_periodic_maps(first: PeriodicMap, second: PeriodicMap) -> PeriodicMap:
    """second after first."""
    if first.target.points != second.source.points:
        raise DimensionError("periodic maps are not composable")
    return PeriodicMap(
        first.source, second.target, {w: second(first(w)) for w in first.source.points}
    )


# the conjugacy c(R, S) ------------------------------------------------------


def _factor_pairs(
    left: IntMatrix, right: IntMatrix
) -> dict[tuple[int, int], list[tuple[tuple[int, int, int], tuple[int, int, int]]]]:
    """For each (i, j), the pairs (left edge i->k, right edge k->j).

    Pairs are sorted by (k, left copy, right copy).
    """
    pairs: dict[tuple[int, int], list[Any]] = {}
    for i in range(left.rows):
        for j in range(right.cols):
            found = []
            for k in range(left.cols):
                for a in range(left[i, k]):
                    for b in range(right[k, j]):
                        found.append(((k, a, b), (i, k, a), (k, j, b)))
            found.sort()
            pairs[(i, j)] = [(x, y) for _, x, y in found]
    return pairs


def conjugacy_from_esse(r: IntMatrix, s: IntMatrix) -> BlockCode:
    """c(R, S): X_RS -> X_SR with y_0 determined by x_0 x_1.

    A-edges split as (R-edge, S-edge) ordered by (vertex, R copy, S copy);
    B-edges split as (S-edge, R-edge) ordered by (vertex, S copy, R copy).
    """
    w = EsseWitness(r, s)
    if not w.is_nonnegative():
        raise PreconditionError("c(R, S) needs R and S over Z+")
    a, b = w.source, w.target
    _, kept = nondegenerate_core(a)
    if len(kept) != a.rows:
        raise PreconditionError("RS is degenerate; pass its nondegenerate core")
    a_edges, b_edges = edge_list(a), edge_list(b)
    alpha = _factor_pairs(r, s)
    beta = _factor_pairs(s, r)
    split = [alpha[(i, j)][c] for i, j, c in a_edges]
    b_index = {beta[(k, h)][c]: idx for idx, (k, h, c) in enumerate(b_edges)}
    table: dict[Word, int] = {}
    for x0, x1 in edge_words(a, 2):
        s0 = split[x0][1]
        r1 = split[x1][0]
        table[(x0, x1)] = b_index[(s0, r1)]
    return BlockCode(a, b, (0, 1), table)


__all__ = [
    "Word",
    "rotate",
    "least_rotation",
    "least_period",
    "Orbit",
    "PeriodicOrbitTable",
    "enumerate_periodic",
    "BlockCode",
    "identity_code",
    "shift_code",
    "compose_codes",
    "is_identity_code",
    "Automorphism",
    "shift_automorphism",
    "simple_graph_symmetry",
    "symbol_permutation_code",
    "PeriodicMap",
    "apply_code_periodic",
    "identity_map",
    "rotate_orbit",
    "compose_periodic_maps",
    "conjugacy_from_esse",
]
