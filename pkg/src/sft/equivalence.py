"""Strong shift equivalence, shift equivalence and their certificates.

Orientation convention for chain edges: ``+1`` means the edge verifies
A_(i-1) = R S and A_i = S R; ``-1`` swaps the two roles.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterator, Optional, Sequence

from sft.matrix import IntMatrix, unimodular_inverse
from sft.verdict import Verdict
from utils.errors import (
    BudgetExceededError,
    DimensionError,
    DomainError,
    PreconditionError,
    VerificationError,
)
from utils.logging import get_logger

logger = get_logger(__name__)


class Ring(str, Enum):
    ZPLUS = "Zplus"
    Z = "Z"


@dataclass(frozen=True)
class EsseWitness:
    """R (m x n) and S (n x m) with source R S and target S R."""

    r: IntMatrix
    s: IntMatrix
    ring: Ring = Ring.ZPLUS

    def __post_init__(self) -> None:
        if self.r.rows != self.s.cols or self.r.cols != self.s.rows:
            raise DimensionError(
                f"R is {self.r.rows}x{self.r.cols} but S is {self.s.rows}x{self.s.cols}"
            )

    @property
    def source(self) -> IntMatrix:
        return self.r @ self.s

    @property
    def target(self) -> IntMatrix:
        return self.s @ self.r

    def reversed(self) -> "EsseWitness":
        return EsseWitness(self.s, self.r, self.ring)

    def is_nonnegative(self) -> bool:
        return self.r.is_nonnegative() and self.s.is_nonnegative()


@dataclass(frozen=True)
class ChainEdge:
    witness: EsseWitness
    orientation: int = 1

    def __post_init__(self) -> None:
        if self.orientation not in (1, -1):
            raise DomainError("edge orientation must be +1 or -1")

    @property
    def forward(self) -> EsseWitness:
        """The witness read in the direction of travel."""
        return self.witness if self.orientation == 1 else self.witness.reversed()

    @property
    def endpoints(self) -> tuple[IntMatrix, IntMatrix]:
        f = self.forward
        return f.source, f.target


@dataclass(frozen=True)
class SseChain:
    edges: tuple[ChainEdge, ...]
    ring: Ring = Ring.ZPLUS
    start: Optional[IntMatrix] = None

    @classmethod
    def of(
        cls,
        pairs: Sequence[tuple[IntMatrix, IntMatrix, int]],
        ring: Ring = Ring.ZPLUS,
        start: Optional[IntMatrix] = None,
    ) -> "SseChain":
        return cls(
            tuple(ChainEdge(EsseWitness(r, s, ring), o) for r, s, o in pairs),
            ring,
            start,
        )

    @property
    def lag(self) -> int:
        return len(self.edges)

    def reversed(self) -> "SseChain":
        edges = tuple(ChainEdge(e.witness, -e.orientation) for e in reversed(self.edges))
        end = self.edges[-1].endpoints[1] if self.edges else self.start
        return SseChain(edges, self.ring, end)

    def then(self, other: "SseChain") -> "SseChain":
        ring = Ring.Z if Ring.Z in (self.ring, other.ring) else Ring.ZPLUS
        return SseChain(self.edges + other.edges, ring, self.start)


@dataclass(frozen=True)
class SeWitness:
    """A^lag den^2 = R S, B^lag den^2 = S R, A R = R B, S A = B S.

    Integral witnesses have ``denominator`` 1; rational ones store integer
    numerators over a common positive denominator.
    """

    r: IntMatrix
    s: IntMatrix
    lag: int
    ring: Ring = Ring.Z
    denominator: int = 1

    def __post_init__(self) -> None:
        if self.lag < 1:
            raise DomainError("shift equivalence lag must be at least 1")
        if self.denominator < 1:
            raise DomainError("denominator must be positive")
        if self.r.rows != self.s.cols or self.r.cols != self.s.rows:
            raise DimensionError("R and S have incompatible shapes")


@dataclass(frozen=True)
class ChainCheck:
    ok: bool
    lag: int
    source: Optional[IntMatrix] = None
    target: Optional[IntMatrix] = None
    failed_index: Optional[int] = None
    detail: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict[str, Any]:
        return {
            "ok": self.ok,
            "lag": self.lag,
            "source": self.source.to_rows() if self.source is not None else None,
            "target": self.target.to_rows() if self.target is not None else None,
            "failed_index": self.failed_index,
            "detail": self.detail,
        }


# verification ---------------------------------------------------------------


def _ring_violation(ring: Ring, *mats: IntMatrix) -> bool:
    return ring is Ring.ZPLUS and not all(m.is_nonnegative() for m in mats)


def verify_esse(a: IntMatrix, b: IntMatrix, w: EsseWitness) -> Verdict:
    """Check A = R S and B = S R; shape problems raise, equation failures do not."""
    if a.shape != (w.r.rows, w.r.rows) or b.shape != (w.r.cols, w.r.cols):
        raise DimensionError(
            f"A is {a.rows}x{a.cols}, B is {b.rows}x{b.cols}, "
            f"R is {w.r.rows}x{w.r.cols}"
        )
    if _ring_violation(w.ring, w.r, w.s):
        return Verdict.failed("negative entry in a Z+ witness", equation="ring")
    if w.r @ w.s != a:
        return Verdict.failed("A != RS", equation="A = RS")
    if w.s @ w.r != b:
        return Verdict.failed("B != SR", equation="B = SR")
    return Verdict.passed()


def verify_sse_chain(chain: SseChain, end: Optional[IntMatrix] = None) -> ChainCheck:
    """Verify edge by edge; a failure names the first bad edge (0-based).

    When ``end`` is given the last target must equal it; a mismatch is
    reported against the last edge.
    """
    if not chain.edges:
        if chain.start is None:
            return ChainCheck(False, 0, detail="empty chain without a start matrix")
        if end is not None and end != chain.start:
            return ChainCheck(False, 0, chain.start, chain.start,
                              detail="chain does not end at the declared matrix")
        return ChainCheck(True, 0, chain.start, chain.start)
    previous = chain.start
    source: Optional[IntMatrix] = None
    for index, edge in enumerate(chain.edges):
        if _ring_violation(chain.ring, edge.witness.r, edge.witness.s):
            return ChainCheck(False, chain.lag, failed_index=index,
                              detail="negative entry in a Z+ witness")
        x, y = edge.endpoints
        if previous is not None and x != previous:
            return ChainCheck(False, chain.lag, failed_index=index,
                              detail="edge source does not match the previous target")
        if source is None:
            source = x
        previous = y
    if end is not None and previous != end:
        return ChainCheck(False, chain.lag, source, previous,
                          failed_index=chain.lag - 1,
                          detail="chain does not end at the declared matrix")
    logger.debug("Chain verified", extra={"lag": chain.lag})
    return ChainCheck(True, chain.lag, source, previous)


def verify_se(
    a: IntMatrix, b: IntMatrix, w: SeWitness, rational: bool = False
) -> Verdict:
    """Check the four shift equivalence equations exactly."""
    m, n = a.require_square("shift equivalence"), b.require_square("shift equivalence")
    if w.r.shape != (m, n):
        raise DimensionError(f"R must be {m}x{n}, got {w.r.rows}x{w.r.cols}")
    r, s, den = w.r, w.s, w.denominator
    if den != 1 and not rational:
        if any(x % den for x in r.entries + s.entries):
            return Verdict.failed(
                "witness is not integral", equation="integrality", denominator=den
            )
        r = IntMatrix(r.rows, r.cols, tuple(x // den for x in r.entries))
        s = IntMatrix(s.rows, s.cols, tuple(x // den for x in s.entries))
        den = 1
    if _ring_violation(w.ring, r, s):
        return Verdict.failed("negative entry in a Z+ witness", equation="ring")
    scale = den * den
    if a.power(w.lag) * scale != r @ s:
        return Verdict.failed("A^lag != RS", equation="A^l = RS")
    if b.power(w.lag) * scale != s @ r:
        return Verdict.failed("B^lag != SR", equation="B^l = SR")
    if a @ r != r @ b:
        return Verdict.failed("AR != RB", equation="AR = RB")
    if s @ a != b @ s:
        return Verdict.failed("SA != BS", equation="SA = BS")
    return Verdict.passed(lag=w.lag)


def compress_sse_to_se(chain: SseChain) -> SeWitness:
    """R = R_1...R_l and S = S_l...S_1 after orienting every edge forward."""
    check = verify_sse_chain(chain)
    if not check:
        raise VerificationError(check.detail or "chain failed", index=check.failed_index)
    if not chain.edges:
        raise DomainError("an empty chain has no shift equivalence of positive lag")
    forward = [e.forward for e in chain.edges]
    r = forward[0].r
    s = forward[0].s
    for w in forward[1:]:
        r = r @ w.r
        s = w.s @ s
    ring = Ring.ZPLUS if chain.ring is Ring.ZPLUS else Ring.Z
    out = SeWitness(r, s, chain.lag, ring)
    assert check.source is not None and check.target is not None
    verdict = verify_se(check.source, check.target, out)
    if not verdict:
        raise VerificationError(
            f"compressed witness failed: {verdict.detail}",
            equation=verdict.data.get("equation"),
        )
    return out


def compose_se(w1: SeWitness, w2: SeWitness) -> SeWitness:
    """Compose A -> B and B -> C into A -> C."""
    ring = Ring.ZPLUS if w1.ring is w2.ring is Ring.ZPLUS else Ring.Z
    return SeWitness(
        w1.r @ w2.r,
        w2.s @ w1.s,
        w1.lag + w2.lag,
        ring,
        w1.denominator * w2.denominator,
    )


# constructions --------------------------------------------------------------


@dataclass(frozen=True)
class MallerShub:
    u: IntMatrix
    m1: IntMatrix
    m2: IntMatrix


def maller_shub_witness(w: EsseWitness) -> MallerShub:
    """U [[A, R], [0, 0]] = [[0, R], [0, B]] U with U = [[I, 0], [S, I]]."""
    m, n = w.r.rows, w.r.cols
    a, b = w.source, w.target
    u = IntMatrix.block(
        [[IntMatrix.identity(m), IntMatrix.zeros(m, n)], [w.s, IntMatrix.identity(n)]]
    )
    m1 = IntMatrix.block([[a, w.r], [IntMatrix.zeros(n, m), IntMatrix.zeros(n)]])
    m2 = IntMatrix.block([[IntMatrix.zeros(m), w.r], [IntMatrix.zeros(n, m), b]])
    if u @ m1 != m2 @ u:
        raise VerificationError("similarity of zero extensions failed", equation="UM1 = M2U")
    return MallerShub(u, m1, m2)


@dataclass(frozen=True)
class Extension:
    matrix: IntMatrix
    witness: Optional[EsseWitness] = None


def _check_side(side: str) -> None:
    if side not in ("left", "right"):
        raise DomainError(f"side must be 'left' or 'right', got {side!r}")


def zero_extension(a: IntMatrix, x: IntMatrix, side: str = "left") -> Extension:
    """[[A, X], [0, 0]] (left) or [[A, 0], [X, 0]] (right), with its ESSE to A.

    The witness has the extension as R S and A as S R.
    """
    _check_side(side)
    n = a.require_square("zero extension")
    if side == "left":
        if x.rows != n:
            raise DimensionError("X must have as many rows as A")
        k = x.cols
        mat = IntMatrix.block([[a, x], [IntMatrix.zeros(k, n), IntMatrix.zeros(k)]])
        r = IntMatrix.block([[IntMatrix.identity(n)], [IntMatrix.zeros(k, n)]])
        s = IntMatrix.block([[a, x]])
    else:
        if x.cols != n:
            raise DimensionError("X must have as many columns as A")
        k = x.rows
        mat = IntMatrix.block([[a, IntMatrix.zeros(n, k)], [x, IntMatrix.zeros(k)]])
        r = IntMatrix.block([[a], [x]])
        s = IntMatrix.block([[IntMatrix.identity(n), IntMatrix.zeros(n, k)]])
    ring = Ring.ZPLUS if a.is_nonnegative() and x.is_nonnegative() else Ring.Z
    return Extension(mat, EsseWitness(r, s, ring))


def nilpotency_index(n_mat: IntMatrix) -> Optional[int]:
    """Least m >= 1 with N^m = 0, or None."""
    n = n_mat.require_square("nilpotency")
    power = n_mat
    for m in range(1, max(n, 1) + 1):
        if power.is_zero():
            return m
        power = power @ n_mat
    return None


def sse_zero_lag_lower_bound(n_mat: IntMatrix) -> int:
    m = nilpotency_index(n_mat)
    if m is None:
        raise PreconditionError("matrix is not nilpotent")
    return max(m - 1, 0)


def nilpotent_extension(
    a: IntMatrix, x: IntMatrix, nil: IntMatrix, side: str = "left"
) -> IntMatrix:
    """[[A, X], [0, N]] (left) or [[A, 0], [X, N]] (right) for nilpotent N."""
    _check_side(side)
    n = a.require_square("nilpotent extension")
    k = nil.require_square("nilpotent extension")
    if nilpotency_index(nil) is None:
        raise PreconditionError("N is not nilpotent")
    if side == "left":
        if x.shape != (n, k):
            raise DimensionError(f"X must be {n}x{k}")
        return IntMatrix.block([[a, x], [IntMatrix.zeros(k, n), nil]])
    if x.shape != (k, n):
        raise DimensionError(f"X must be {k}x{n}")
    return IntMatrix.block([[a, IntMatrix.zeros(n, k)], [x, nil]])


@dataclass(frozen=True)
class AmalgamationMove:
    witness: EsseWitness
    result: IntMatrix
    merged: tuple[int, ...]


def _equal_groups(vectors: Sequence[tuple[int, ...]]) -> list[list[int]]:
    groups: dict[tuple[int, ...], list[int]] = {}
    for idx, v in enumerate(vectors):
        groups.setdefault(v, []).append(idx)
    return [g for g in groups.values() if len(g) > 1]


def column_amalgamation_moves(c: IntMatrix) -> list[AmalgamationMove]:
    """Every merge of a set of identical columns into one.

    R is C with the merged columns after the first deleted; S is the 0-1
    matrix sending each old column to its new column, so C = R S and the
    amalgamated matrix is D = S R.
    """
    n = c.require_square("amalgamation")
    moves: list[AmalgamationMove] = []
    for group in _equal_groups([c.col(j) for j in range(n)]):
        for size in range(2, len(group) + 1):
            for subset in itertools.combinations(group, size):
                keep = [j for j in range(n) if j not in subset[1:]]
                new_index = {j: keep.index(j) for j in keep}
                for j in subset[1:]:
                    new_index[j] = new_index[subset[0]]
                r = c.submatrix(range(n), keep)
                s = IntMatrix.from_rows(
                    [[1 if new_index[j] == row else 0 for j in range(n)]
                     for row in range(len(keep))]
                )
                moves.append(AmalgamationMove(EsseWitness(r, s), s @ r, subset))
    return moves


def row_amalgamation_moves(c: IntMatrix) -> list[AmalgamationMove]:
    """Dual of the column moves, again with C = R S and D = S R."""
    moves = []
    for mv in column_amalgamation_moves(c.transpose()):
        w = EsseWitness(mv.witness.s.transpose(), mv.witness.r.transpose())
        moves.append(AmalgamationMove(w, mv.result.transpose(), mv.merged))
    return moves


def esse_from_similarity(a: IntMatrix, u: IntMatrix) -> tuple[EsseWitness, IntMatrix]:
    """B = U^-1 A U as an ESSE over Z with R = U and S = U^-1 A."""
    u_inv = unimodular_inverse(u)
    s = u_inv @ a
    return EsseWitness(u, s, Ring.Z), s @ u


def rational_lag_two_witness(q: int, x: int, y: int) -> tuple[IntMatrix, IntMatrix, SeWitness]:
    """Lag 2 shift equivalence over Q between M_x and M_y.

    M_z = [[q-z, z], [q-z-1, 1+z]] has eigenvectors (1, 1) for q and
    (-z, q-z-1) for 1; U = P_y P_x^-1 conjugates M_x to M_y, and the witness
    is R = M_x U^-1, S = M_y U over the denominator q - 1.
    """
    if q < 2:
        raise DomainError("q must be at least 2")

    def m_of(z: int) -> IntMatrix:
        return IntMatrix.from_rows([[q - z, z], [q - z - 1, 1 + z]])

    def p_of(z: int) -> IntMatrix:
        return IntMatrix.from_rows([[1, -z], [1, q - z - 1]])

    def adj_p(z: int) -> IntMatrix:
        return IntMatrix.from_rows([[q - z - 1, z], [-1, 1]])

    mx, my = m_of(x), m_of(y)
    u_num = p_of(y) @ adj_p(x)
    u_inv_num = p_of(x) @ adj_p(y)
    witness = SeWitness(mx @ u_inv_num, my @ u_num, 2, Ring.Z, q - 1)
    return mx, my, witness


# bounded neighbour search ---------------------------------------------------


def esse_factorizations(
    a: IntMatrix,
    max_inner: int,
    max_entry: int,
    budget: Optional[int] = None,
) -> Iterator[EsseWitness]:
    """All A = R S with R n x k, S k x n, k <= max_inner, entries in [0, max_entry]."""
    n = a.require_square("factorization search")
    values = range(max_entry + 1)
    columns = [a.col(j) for j in range(n)]
    seen = 0
    for k in range(1, max_inner + 1):
        candidates = list(itertools.product(values, repeat=k))
        for r_entries in itertools.product(values, repeat=n * k):
            seen += 1
            if budget is not None and seen > budget:
                raise BudgetExceededError(
                    f"factorization search examined more than {budget} candidates"
                )
            r = IntMatrix(n, k, tuple(r_entries))
            images: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
            for vec in candidates:
                img = tuple(
                    sum(r_entries[i * k + t] * vec[t] for t in range(k)) for i in range(n)
                )
                images.setdefault(img, []).append(vec)
            options = [images.get(col, []) for col in columns]
            if any(not o for o in options):
                continue
            for chosen in itertools.product(*options):
                s = IntMatrix.from_rows(
                    [[chosen[j][t] for j in range(n)] for t in range(k)], cols=n
                )
                yield EsseWitness(r, s, Ring.ZPLUS)


def _iso_key(b: IntMatrix) -> tuple[Any, ...]:
    return (
        b.rows,
        b.trace(),
        tuple(sorted(sum(row) for row in b)),
        tuple(sorted(sum(b.col(j)) for j in range(b.cols))),
        tuple(sorted(b.entries)),
    )


def permutation_isomorphic(b1: IntMatrix, b2: IntMatrix) -> bool:
    """Equal up to simultaneous row/column permutation (exhaustive for size <= 5)."""
    if b1.shape != b2.shape:
        return False
    if b1 == b2:
        return True
    if b1.rows > 5:
        return False
    return any(b2.permute(perm) == b1 for perm in itertools.permutations(range(b1.rows)))


@dataclass(frozen=True)
class Neighbor:
    witness: EsseWitness
    matrix: IntMatrix
    multiplicity: int = field(default=1, compare=False)


def esse_neighbors(
    a: IntMatrix,
    max_inner: int,
    max_entry: int,
    budget: Optional[int] = None,
) -> list[Neighbor]:
    """Distinct S R over all bounded factorizations, up to vertex relabelling."""
    buckets: dict[tuple[Any, ...], list[list[Any]]] = {}
    try:
        for w in esse_factorizations(a, max_inner, max_entry, budget):
            b = w.target
            bucket = buckets.setdefault(_iso_key(b), [])
            for entry in bucket:
                if permutation_isomorphic(entry[1], b):
                    entry[2] += 1
                    break
            else:
                bucket.append([w, b, 1])
    except BudgetExceededError as exc:
        partial = _collect(buckets)
        raise BudgetExceededError(str(exc), partial=partial) from exc
    out = _collect(buckets)
    logger.debug(
        "Neighbour search finished", extra={"neighbors": len(out), "size": a.rows}
    )
    return out


def _collect(buckets: dict[tuple[Any, ...], list[list[Any]]]) -> list[Neighbor]:
    found = [Neighbor(w, b, count) for bucket in buckets.values() for w, b, count in bucket]
    found.sort(key=lambda nb: (nb.matrix.rows, nb.matrix.entries))
    return found


__all__ = [
    "Ring",
    "EsseWitness",
    "ChainEdge",
    "SseChain",
    "SeWitness",
    "ChainCheck",
    "verify_esse",
    "verify_sse_chain",
    "verify_se",
    "compress_sse_to_se",
    "compose_se",
    "MallerShub",
    "maller_shub_witness",
    "Extension",
    "zero_extension",
    "nilpotency_index",
    "sse_zero_lag_lower_bound",
    "nilpotent_extension",
    "AmalgamationMove",
    "column_amalgamation_moves",
    "row_amalgamation_moves",
    "esse_from_similarity",
    "rational_lag_two_witness",
    "esse_factorizations",
    "permutation_isomorphic",
    "Neighbor",
    "esse_neighbors",
]
