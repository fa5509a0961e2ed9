"""Structure of nonnegative matrices as presentations of edge shifts.

Vertices are 0-based throughout. A nonnegative matrix is an ``IntMatrix`` that
passed ``require_nonnegative``; the support digraph has an edge i -> j when
A[i, j] > 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import networkx as nx

from sft.algebra import matrix_traces, net_traces
from sft.matrix import IntMatrix
from utils.errors import (
    BudgetExceededError,
    DomainError,
    NotIrreducibleError,
)
from utils.logging import get_logger

logger = get_logger(__name__)


def require_nonnegative(a: IntMatrix, what: str = "operation") -> int:
    n = a.require_square(what)
    if not a.is_nonnegative():
        raise DomainError(f"{what} needs a nonnegative matrix")
    return n


def support_graph(a: IntMatrix) -> nx.DiGraph:
    n = a.require_square("support graph")
    g = nx.DiGraph()
    g.add_nodes_from(range(n))
    g.add_edges_from((i, j) for i in range(n) for j in range(n) if a[i, j])
    return g


# nondegenerate core -------------------------------------------------------


def nondegenerate_core(a: IntMatrix) -> tuple[IntMatrix, list[int]]:
    """Strip zero rows and columns until none remain.

    Returns the core and the surviving original indices; the core may be 0x0.
    """
    require_nonnegative(a, "nondegenerate core")
    kept = list(range(a.rows))
    while True:
        drop = [
            v
            for v in kept
            if not any(a[v, w] for w in kept) or not any(a[w, v] for w in kept)
        ]
        if not drop:
            break
        kept = [v for v in kept if v not in drop]
    return a.principal(kept), kept


# irreducibility, period, primitivity -------------------------------------


def _reach_positive(g: nx.DiGraph, v: int) -> set[int]:
    """Vertices reachable from v by a path of length >= 1."""
    out: set[int] = set()
    for s in g.successors(v):
        out.add(s)
        out |= nx.descendants(g, s)
    return out


def is_irreducible(a: IntMatrix) -> bool:
    """Strongly connected support with at least one edge."""
    n = require_nonnegative(a, "irreducibility")
    if n == 0 or a.is_zero():
        return False
    return bool(nx.is_strongly_connected(support_graph(a)))


def _levels_period(g: nx.DiGraph, root: int) -> tuple[dict[int, int], int]:
    levels: dict[int, int] = nx.single_source_shortest_path_length(g, root)
    p = 0
    for u, v in g.edges():
        if u in levels and v in levels:
            p = math.gcd(p, levels[u] + 1 - levels[v])
    return levels, abs(p)


def period(a: IntMatrix) -> int:
    """gcd of cycle lengths of an irreducible matrix."""
    if not is_irreducible(a):
        raise NotIrreducibleError("period is defined for irreducible matrices")
    _, p = _levels_period(support_graph(a), 0)
    return p


@dataclass(frozen=True)
class PrimitivityResult:
    primitive: bool
    exponent: Optional[int] = None
    period: Optional[int] = None
    unreachable: Optional[tuple[int, int]] = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "primitive": self.primitive,
            "exponent": self.exponent,
            "period": self.period,
            "unreachable": list(self.unreachable) if self.unreachable else None,
        }


def wielandt_bound(n: int) -> int:
    return n * n - 2 * n + 2 if n > 1 else 1


def is_primitive(a: IntMatrix) -> PrimitivityResult:
    """Decide primitivity; a positive answer carries the least k with A^k > 0."""
    n = require_nonnegative(a, "primitivity")
    if n == 0:
        return PrimitivityResult(False, unreachable=None)
    g = support_graph(a)
    for i in range(n):
        reach = _reach_positive(g, i)
        if len(reach) < n:
            missing = min(set(range(n)) - reach)
            return PrimitivityResult(False, unreachable=(i, missing))
    p = period(a)
    if p > 1:
        return PrimitivityResult(False, period=p)
    full = (1 << n) - 1
    step = [sum(1 << j for j in range(n) if a[i, j]) for i in range(n)]
    current = list(step)
    for k in range(1, wielandt_bound(n) + 1):
        if all(row == full for row in current):
            return PrimitivityResult(True, exponent=k, period=1)
        nxt = []
        for row in current:
            acc = 0
            j = 0
            while row:
                if row & 1:
                    acc |= step[j]
                row >>= 1
                j += 1
            nxt.append(acc)
        current = nxt
    # unreachable for aperiodic irreducible matrices
    raise AssertionError("primitive exponent exceeded the Wielandt bound")


# cyclic block form --------------------------------------------------------


@dataclass(frozen=True)
class CyclicBlockForm:
    """Vertices reordered class by class so A is a cyclic block matrix.

    ``permutation[r]`` is the original vertex placed at position r;
    ``blocks[i]`` maps class i to class i+1 (mod period) and ``products[i]``
    is A_i A_(i+1) ... A_(i+p-1).
    """

    permutation: tuple[int, ...]
    period: int
    class_sizes: tuple[int, ...]
    blocks: tuple[IntMatrix, ...]
    products: tuple[IntMatrix, ...] = field(default=())

    def permuted(self, a: IntMatrix) -> IntMatrix:
        return a.permute(self.permutation)

    def assemble(self) -> IntMatrix:
        """Rebuild the permuted matrix from the blocks."""
        p = self.period
        grid: list[list[IntMatrix]] = []
        for i in range(p):
            row = []
            for j in range(p):
                if j == (i + 1) % p:
                    row.append(self.blocks[i])
                else:
                    row.append(IntMatrix.zeros(self.class_sizes[i], self.class_sizes[j]))
            grid.append(row)
        if p == 1:
            return self.blocks[0]
        return IntMatrix.block(grid)


def cyclic_block_form(a: IntMatrix) -> CyclicBlockForm:
    if not is_irreducible(a):
        raise NotIrreducibleError("cyclic block form needs an irreducible matrix")
    levels, p = _levels_period(support_graph(a), 0)
    cls = {v: levels[v] % p for v in range(a.rows)}
    perm = tuple(sorted(range(a.rows), key=lambda v: (cls[v], v)))
    members = [[v for v in perm if cls[v] == c] for c in range(p)]
    blocks = tuple(
        a.submatrix(members[i], members[(i + 1) % p]) for i in range(p)
    )
    products = []
    for i in range(p):
        prod = blocks[i]
        for step in range(1, p):
            prod = prod @ blocks[(i + step) % p]
        products.append(prod)
    return CyclicBlockForm(
        permutation=perm,
        period=p,
        class_sizes=tuple(len(m) for m in members),
        blocks=blocks,
        products=tuple(products),
    )


@dataclass(frozen=True)
class ComponentInfo:
    vertices: tuple[int, ...]
    irreducible: bool
    period: Optional[int]


def strongly_connected_classes(a: IntMatrix) -> list[ComponentInfo]:
    """Strong components of the support graph in topological order."""
    require_nonnegative(a, "component decomposition")
    g = support_graph(a)
    dag = nx.condensation(g)
    out: list[ComponentInfo] = []
    for node in nx.topological_sort(dag):
        members = tuple(sorted(dag.nodes[node]["members"]))
        sub = a.principal(members)
        if is_irreducible(sub):
            out.append(ComponentInfo(members, True, period(sub)))
        else:
            out.append(ComponentInfo(members, False, None))
    return out


# higher block presentations ----------------------------------------------


def edge_list(a: IntMatrix) -> list[tuple[int, int, int]]:
    """Edges (source, target, copy) numbered row-major then by copy."""
    return [
        (i, j, c)
        for i in range(a.rows)
        for j in range(a.cols)
        for c in range(a[i, j])
    ]


def edge_words(a: IntMatrix, length: int, limit: Optional[int] = None) -> list[tuple[int, ...]]:
    """All paths of ``length`` edges as tuples of edge indices, lexicographic."""
    edges = edge_list(a)
    by_source: dict[int, list[int]] = {}
    for idx, (i, _, _) in enumerate(edges):
        by_source.setdefault(i, []).append(idx)
    words: list[tuple[int, ...]] = [(e,) for e in range(len(edges))]
    for _ in range(length - 1):
        grown: list[tuple[int, ...]] = []
        for w in words:
            tail = edges[w[-1]][1]
            grown.extend(w + (e,) for e in by_source.get(tail, []))
            if limit is not None and len(grown) > limit:
                raise BudgetExceededError(
                    f"more than {limit} words of length {length}"
                )
        words = grown
    return words if length > 0 else []


def higher_block(a: IntMatrix, k: int, limit: Optional[int] = None) -> IntMatrix:
    """A^[k]: vertices are (k-1)-edge words, edges are k-edge words."""
    require_nonnegative(a, "higher block presentation")
    if k < 1:
        raise DomainError("block length must be at least 1")
    if k == 1:
        return a
    words = edge_words(a, k - 1, limit)
    index = {w: r for r, w in enumerate(words)}
    out = [[0] * len(words) for _ in words]
    edges = edge_list(a)
    for w in words:
        tail = edges[w[-1]][1]
        for e, (i, _, _) in enumerate(edges):
            if i == tail:
                out[index[w]][index[w[1:] + (e,)]] += 1
    logger.debug("Higher block presentation built", extra={"k": k, "states": len(words)})
    return IntMatrix.from_rows(out, cols=len(words))


# path and period counts ---------------------------------------------------


def path_count(a: IntMatrix, i: int, j: int, n: int) -> int:
    size = require_nonnegative(a, "path count")
    if not (0 <= i < size and 0 <= j < size):
        raise DomainError(f"vertex index outside 0..{size - 1}")
    if n < 0:
        raise DomainError("path length must be nonnegative")
    return a.power(n)[i, j]


@dataclass(frozen=True)
class PeriodData:
    """fix_counts[n-1] = trace(A^n); least_period_counts[n-1] = q_n."""

    fix_counts: tuple[int, ...]
    least_period_counts: tuple[int, ...]

    @property
    def orbit_counts(self) -> tuple[int, ...]:
        return tuple(q // n for n, q in enumerate(self.least_period_counts, start=1))

    def to_dict(self) -> dict[str, Any]:
        return {
            "fix_counts": list(self.fix_counts),
            "least_period_counts": list(self.least_period_counts),
            "orbit_counts": list(self.orbit_counts),
        }


def least_period_counts(taus: Sequence[int]) -> list[int]:
    return [int(q) for q in net_traces(taus)]


def fix_counts(a: IntMatrix, count: int) -> PeriodData:
    require_nonnegative(a, "periodic point counts")
    taus = matrix_traces(a, count)
    return PeriodData(tuple(taus), tuple(least_period_counts(taus)))


# named examples -------------------------------------------------------------


def ashley_eight_by_eight() -> IntMatrix:
    """Sum of the permutation matrices of (12345678) and (1)(8)(263754)."""
    cycle = [1, 2, 3, 4, 5, 6, 7, 0]
    other = [0, 5, 6, 1, 3, 2, 4, 7]
    return IntMatrix.permutation(cycle) + IntMatrix.permutation(other)


__all__ = [
    "require_nonnegative",
    "support_graph",
    "nondegenerate_core",
    "is_irreducible",
    "period",
    "PrimitivityResult",
    "wielandt_bound",
    "is_primitive",
    "CyclicBlockForm",
    "cyclic_block_form",
    "ComponentInfo",
    "strongly_connected_classes",
    "edge_list",
    "edge_words",
    "higher_block",
    "path_count",
    "PeriodData",
    "least_period_counts",
    "fix_counts",
    "ashley_eight_by_eight",
]
