"""Gyration, orbit sign, SGCC and the sgc2 invariant of SSE(Z) paths."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Sequence

from sft.blockcode import (
    Automorphism,
    PeriodicMap,
    Word,
    apply_code_periodic,
    enumerate_periodic,
    least_rotation,
    rotate,
)
from sft.equivalence import Ring, SseChain, verify_sse_chain
from sft.matrix import IntMatrix
from sft.verdict import Verdict
from utils.errors import DimensionError, NotAutomorphismError, VerificationError

LevelMap = Callable[[int], PeriodicMap]


def _least_period_action(
    pmap: PeriodicMap, representatives: Optional[Mapping[Word, Word]]
) -> tuple[list[Word], dict[Word, Word], dict[Word, int]]:
    """Orbits of least period k, xi on them and the rotation amounts r(alpha, i)."""
    k = pmap.level
    orbits = [o.representative for o in pmap.source.least_period_orbits(k)]
    chosen = {rep: (representatives or {}).get(rep, rep) for rep in orbits}
    xi: dict[Word, Word] = {}
    shifts: dict[Word, int] = {}
    for rep in orbits:
        image = pmap(chosen[rep])
        target = least_rotation(image)
        if target not in chosen:
            raise NotAutomorphismError(
                f"image of {chosen[rep]} does not have least period {k}"
            )
        xi[rep] = target
        base = chosen[target]
        shifts[rep] = next(r for r in range(k) if rotate(base, r) == image)
    if len(set(xi.values())) != len(xi):
        raise NotAutomorphismError(f"map is not a bijection of period-{k} orbits")
    return orbits, xi, shifts


def gyration(
    pmap: PeriodicMap, representatives: Optional[Mapping[Word, Word]] = None
) -> int:
    """g_k in Z/k: the total rotation needed to land on chosen representatives.

    ``representatives`` maps a canonical orbit representative to any point of
    its orbit; the result does not depend on the choice.
    """
    _, _, shifts = _least_period_action(pmap, representatives)
    return sum(shifts.values()) % pmap.level


def orbit_sign(pmap: PeriodicMap) -> int:
    """Parity of the permutation of least-period orbits, in {0, 1}."""
    orbits, xi, _ = _least_period_action(pmap, None)
    seen: set[Word] = set()
    cycles = 0
    for rep in orbits:
        if rep in seen:
            continue
        cycles += 1
        cur = rep
        while cur not in seen:
            seen.add(cur)
            cur = xi[cur]
    return (len(orbits) - cycles) % 2


def sgcc(level_map: LevelMap, m: int) -> int:
    """g_m + (m/2) * sum of sign xi_(m/2^j) over j >= 1, in Z/m."""
    total = gyration(level_map(m))
    signs = 0
    d = m
    while d % 2 == 0:
        d //= 2
        signs += orbit_sign(level_map(d))
    return (total + (m // 2) * signs) % m


def code_level_map(auto: Automorphism, budget: Optional[int] = None) -> LevelMap:
    """Per-level point maps of a block-code automorphism, cached."""
    cache: dict[int, PeriodicMap] = {}

    def at(k: int) -> PeriodicMap:
        if k not in cache:
            table = enumerate_periodic(auto.matrix, k, budget)
            cache[k] = apply_code_periodic(auto.forward, table, automorphism=True)
        return cache[k]

    return at


def sgc2(r: IntMatrix, s: IntMatrix) -> int:
    """The mod 2 invariant of one ESSE over Z."""
    m, n = r.rows, r.cols
    if s.shape != (n, m):
        raise DimensionError(f"S must be {n}x{m}, got {s.rows}x{s.cols}")
    total = 0
    for i in range(m):
        for j in range(i + 1, m):
            for k in range(n):
                for h in range(k + 1):
                    if k > h:
                        total += r[i, k] * s[k, i] * r[j, h] * s[h, j]
                    total += r[i, k] * s[k, j] * r[j, h] * s[h, i]
    for i in range(m):
        for j in range(n):
            x = r[i, j]
            total += (x * (x - 1) // 2) * s[j, i] ** 2
    return total % 2


def sse_path(
    edges: Sequence[tuple[IntMatrix, IntMatrix, int]], start: Optional[IntMatrix] = None
) -> SseChain:
    """A path of ESSEs over Z with orientations +1/-1."""
    return SseChain.of(edges, Ring.Z, start)


def path_sgc2(path: SseChain) -> int:
    """Signed sum of sgc2 over the edges, mod 2."""
    check = verify_sse_chain(path)
    if not check:
        raise VerificationError(check.detail or "path failed", index=check.failed_index)
    return sum(e.orientation * sgc2(e.witness.r, e.witness.s) for e in path.edges) % 2


@dataclass(frozen=True)
class Triangle:
    """R1 R2 = R3, R2 S3 = S1 and S3 R1 = S2."""

    r1: IntMatrix
    s1: IntMatrix
    r2: IntMatrix
    s2: IntMatrix
    r3: IntMatrix
    s3: IntMatrix

    def cocycle_defect(self) -> int:
        return (sgc2(self.r1, self.s1) + sgc2(self.r2, self.s2) - sgc2(self.r3, self.s3)) % 2


def verify_triangle(t: Triangle) -> Verdict:
    m, n, p = t.r1.rows, t.r1.cols, t.r2.cols
    shapes = {
        "R1": (t.r1.shape, (m, n)),
        "S1": (t.s1.shape, (n, m)),
        "R2": (t.r2.shape, (n, p)),
        "S2": (t.s2.shape, (p, n)),
        "R3": (t.r3.shape, (m, p)),
        "S3": (t.s3.shape, (p, m)),
    }
    for name, (got, want) in shapes.items():
        if got != want:
            raise DimensionError(f"{name} is {got[0]}x{got[1]}, expected {want[0]}x{want[1]}")
    checks = [
        ("R1R2 = R3", t.r1 @ t.r2 == t.r3),
        ("R2S3 = S1", t.r2 @ t.s3 == t.s1),
        ("S3R1 = S2", t.s3 @ t.r1 == t.s2),
        ("R1S1 = R3S3", t.r1 @ t.s1 == t.r3 @ t.s3),
        ("S1R1 = R2S2", t.s1 @ t.r1 == t.r2 @ t.s2),
        ("S2R2 = S3R3", t.s2 @ t.r2 == t.s3 @ t.r3),
    ]
    for name, ok in checks:
        if not ok:
            return Verdict.failed(f"{name} fails", equation=name)
    return Verdict.passed()


def triangle_from(r1: IntMatrix, r2: IntMatrix, s3: IntMatrix) -> Triangle:
    return Triangle(r1, r2 @ s3, r2, s3 @ r1, r1 @ r2, s3)


def random_triangle(
    rng: random.Random, max_size: int = 3, low: int = -2, high: int = 2
) -> Triangle:
    """Free R1 (m x n), R2 (n x p), S3 (p x m) with the rest derived."""
    m, n, p = (rng.randint(1, max_size) for _ in range(3))
    return triangle_from(
        IntMatrix.random(rng, m, n, low, high),
        IntMatrix.random(rng, n, p, low, high),
        IntMatrix.random(rng, p, m, low, high),
    )


__all__ = [
    "LevelMap",
    "gyration",
    "orbit_sign",
    "sgcc",
    "code_level_map",
    "sgc2",
    "sse_path",
    "path_sgc2",
    "Triangle",
    "verify_triangle",
    "triangle_from",
    "random_triangle",
]
