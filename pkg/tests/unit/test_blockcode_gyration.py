"""Unit tests for periodic points, block codes, gyration and sgc2."""

import itertools

import pytest

from sft.blockcode import (
    Automorphism,
    BlockCode,
    apply_code_periodic,
    compose_codes,
    compose_periodic_maps,
    conjugacy_from_esse,
    enumerate_periodic,
    identity_code,
    identity_map,
    is_identity_code,
    least_period,
    least_rotation,
    rotate,
    rotate_orbit,
    shift_automorphism,
    shift_code,
    simple_graph_symmetry,
    symbol_permutation_code,
)
from sft.gyration import (
    Triangle,
    code_level_map,
    gyration,
    orbit_sign,
    path_sgc2,
    random_triangle,
    sgc2,
    sgcc,
    sse_path,
    verify_triangle,
)
from sft.equivalence import esse_factorizations
from sft.matrix import IntMatrix
from sft.structure import nondegenerate_core
from utils.errors import (
    BudgetExceededError,
    DimensionError,
    NotAutomorphismError,
    PreconditionError,
    VerificationError,
)

TWO = IntMatrix.scalar(2)
THREE = IntMatrix.scalar(3)


def _random_nondegenerate(rng, size):
    while True:
        a = IntMatrix.random(rng, size, low=0, high=1)
        if len(nondegenerate_core(a)[1]) == size:
            return a


class TestWords:
    def test_rotation(self):
        assert rotate((0, 1, 2)) == (1, 2, 0)
        assert rotate((0, 1, 2), -1) == (2, 0, 1)
        assert least_rotation((1, 0, 1)) == (0, 1, 1)

    def test_least_period(self):
        assert least_period((0, 1, 0, 1)) == 2
        assert least_period((0, 0, 1)) == 3
        assert least_period((1,)) == 1


class TestPeriodicPoints:
    """Enumeration of closed paths."""

    def test_two_shift_level_three(self):
        table = enumerate_periodic(TWO, 3)
        assert len(table.points) == 8
        assert [o.representative for o in table.orbits] == [
            (0, 0, 0),
            (0, 0, 1),
            (0, 1, 1),
            (1, 1, 1),
        ]
        assert table.counts() == {
            "points": 8,
            "least_period_points": 6,
            "least_period_orbits": 2,
        }

    def test_count_matches_trace(self, golden_mean, nonplussed):
        for a in (golden_mean, nonplussed):
            for n in range(1, 6):
                assert len(enumerate_periodic(a, n).points) == a.power(n).trace()

    def test_budget(self):
        with pytest.raises(BudgetExceededError):
            enumerate_periodic(TWO, 10, budget=100)

    def test_level_must_be_positive(self):
        with pytest.raises(PreconditionError):
            enumerate_periodic(TWO, 0)


class TestBlockCodes:
    def test_missing_word(self):
        with pytest.raises(PreconditionError):
            BlockCode(TWO, TWO, (0, 0), {(0,): 0})

    def test_illegal_image(self, golden_mean):
        # edges of the golden mean graph: 0 = (0,0), 1 = (0,1), 2 = (1,0)
        with pytest.raises(PreconditionError):
            BlockCode(golden_mean, golden_mean, (0, 0), {(0,): 2, (1,): 1, (2,): 2})

    def test_shift_then_inverse_is_identity(self, golden_mean):
        auto = shift_automorphism(golden_mean)
        assert is_identity_code(compose_codes(auto.forward, auto.inverse))
        assert not is_identity_code(shift_code(golden_mean))
        assert is_identity_code(identity_code(golden_mean))

    def test_composed_window(self, golden_mean):
        twice = shift_automorphism(golden_mean).then(shift_automorphism(golden_mean))
        assert twice.forward.window == (2, 2)

    def test_non_inverse_pair(self, golden_mean):
        with pytest.raises(NotAutomorphismError):
            Automorphism(shift_code(golden_mean), shift_code(golden_mean))

    def test_symmetries(self, golden_mean):
        swap = symbol_permutation_code(2, [1, 0])
        assert swap.forward.table == {(0,): 1, (1,): 0}
        with pytest.raises(PreconditionError):
            symbol_permutation_code(2, [0, 0])
        with pytest.raises(PreconditionError):
            simple_graph_symmetry(golden_mean, [1, 0, 2])

    def test_to_dict(self):
        doc = shift_code(TWO).to_dict()
        assert doc == {"window": [1, 1], "table": {"0": 0, "1": 1}}


class TestConjugacyFromEsse:
    """c(R, S) between the edge shifts of RS and SR."""

    @pytest.mark.parametrize("n", range(1, 7))
    def test_identity_factor_gives_identity(self, golden_mean, n):
        code = conjugacy_from_esse(IntMatrix.identity(2), golden_mean)
        table = enumerate_periodic(golden_mean, n)
        pmap = apply_code_periodic(code, table)
        assert all(pmap(w) == w for w in table.points)

    @pytest.mark.parametrize("n", range(1, 7))
    def test_identity_second_factor_gives_shift(self, golden_mean, n):
        code = conjugacy_from_esse(golden_mean, IntMatrix.identity(2))
        table = enumerate_periodic(golden_mean, n)
        pmap = apply_code_periodic(code, table)
        assert all(pmap(w) == rotate(w) for w in table.points)

    @pytest.mark.parametrize("n", range(1, 6))
    def test_split_is_bijective(self, n):
        code = conjugacy_from_esse(IntMatrix.from_rows([[1], [1]]), IntMatrix.from_rows([[1, 1]]))
        table = enumerate_periodic(code.domain, n)
        pmap = apply_code_periodic(code, table)
        assert pmap.is_bijective()
        assert pmap.commutes_with_shift()

    def test_identity_factors_on_random_matrices(self, rng):
        for _ in range(20):
            a = _random_nondegenerate(rng, rng.randint(1, 3))
            ident = IntMatrix.identity(a.rows)
            left = conjugacy_from_esse(ident, a)
            right = conjugacy_from_esse(a, ident)
            for n in range(1, 7):
                table = enumerate_periodic(a, n)
                fixed = apply_code_periodic(left, table)
                shifted = apply_code_periodic(right, table)
                assert all(fixed(w) == w for w in table.points)
                assert all(shifted(w) == rotate(w) for w in table.points)

    def test_round_trip_is_the_shift(self, rng):
        found = 0
        while found < 20:
            k, n = rng.randint(1, 3), rng.randint(1, 3)
            r = IntMatrix.random(rng, k, n, 0, 1)
            s = IntMatrix.random(rng, n, k, 0, 1)
            a, b = r @ s, s @ r
            if len(nondegenerate_core(a)[1]) != k or len(nondegenerate_core(b)[1]) != n:
                continue
            both = compose_codes(conjugacy_from_esse(r, s), conjugacy_from_esse(s, r))
            for level in range(1, 7):
                table = enumerate_periodic(a, level)
                pmap = apply_code_periodic(both, table)
                assert all(pmap(w) == rotate(w) for w in table.points)
            found += 1

    def test_degenerate_product_rejected(self):
        with pytest.raises(PreconditionError):
            conjugacy_from_esse(IntMatrix.from_rows([[1], [0]]), IntMatrix.from_rows([[1, 1]]))

    def test_negative_rejected(self):
        with pytest.raises(PreconditionError):
            conjugacy_from_esse(IntMatrix.scalar(-1), IntMatrix.scalar(-1))


class TestPeriodicMaps:
    def test_rotate_orbit_and_compose(self):
        table = enumerate_periodic(TWO, 6)
        rot = rotate_orbit(table, (0, 0, 0, 0, 0, 1))
        both = compose_periodic_maps(identity_map(table), rot)
        assert both((0, 0, 0, 0, 1, 0)) == (0, 0, 0, 1, 0, 0)
        assert both((0, 0, 0, 0, 1, 1)) == (0, 0, 0, 0, 1, 1)

    def test_rotate_orbit_needs_point(self):
        table = enumerate_periodic(TWO, 6)
        with pytest.raises(PreconditionError):
            rotate_orbit(table, (0, 1))

    def test_compose_needs_matching_levels(self):
        with pytest.raises(DimensionError):
            compose_periodic_maps(
                identity_map(enumerate_periodic(TWO, 2)),
                identity_map(enumerate_periodic(TWO, 3)),
            )


class TestGyration:
    """Gyration numbers and SGCC on the 2-shift."""

    def test_shift_gyration(self):
        level = code_level_map(shift_automorphism(TWO))
        assert gyration(level(6)) == 3
        assert gyration(level(2)) == 1
        assert sgcc(level, 6) == 3

    def test_single_orbit_rotation(self):
        rot = rotate_orbit(enumerate_periodic(TWO, 6), (0, 0, 0, 0, 0, 1))

        def level(k):
            return rot if k == 6 else identity_map(enumerate_periodic(TWO, k))

        assert gyration(rot) == 1
        assert sgcc(level, 6) == 1

    def test_representatives_do_not_matter(self):
        pmap = code_level_map(shift_automorphism(TWO))(4)
        reps = {(0, 0, 0, 1): (0, 1, 0, 0), (0, 0, 1, 1): (1, 1, 0, 0)}
        assert gyration(pmap, reps) == gyration(pmap)

    def test_symbol_swap(self):
        level = code_level_map(symbol_permutation_code(2, [1, 0]))
        assert orbit_sign(level(1)) == 1
        assert gyration(level(1)) == 0
        assert gyration(level(2)) == 1
        assert orbit_sign(level(2)) == 0
        assert sgcc(level, 2) == 0

    @pytest.mark.parametrize(
        "autos",
        [
            [shift_automorphism(TWO), symbol_permutation_code(2, [1, 0])],
            [
                shift_automorphism(THREE),
                symbol_permutation_code(3, [1, 2, 0]),
                symbol_permutation_code(3, [1, 0, 2]),
            ],
        ],
        ids=["2-shift", "3-shift"],
    )
    def test_sgcc_is_additive(self, autos):
        for alpha, beta in itertools.product(autos, repeat=2):
            composed = code_level_map(alpha.then(beta))
            first, second = code_level_map(alpha), code_level_map(beta)
            for m in (1, 2, 3, 4, 6):
                assert sgcc(composed, m) == (sgcc(first, m) + sgcc(second, m)) % m

    def test_identity_is_trivial(self):
        level = code_level_map(Automorphism(identity_code(TWO), identity_code(TWO)))
        assert all(gyration(level(k)) == 0 for k in range(1, 7))
        assert all(orbit_sign(level(k)) == 0 for k in range(1, 7))


class TestSgc2:
    """The mod 2 invariant of elementary equivalences over Z."""

    def test_one_by_one(self):
        assert sgc2(TWO, IntMatrix.scalar(1)) == 1
        assert sgc2(IntMatrix.scalar(1), TWO) == 0

    def test_split(self):
        assert sgc2(IntMatrix.from_rows([[1, 1]]), IntMatrix.from_rows([[1], [1]])) == 0

    def test_shape(self):
        with pytest.raises(DimensionError):
            sgc2(TWO, IntMatrix.from_rows([[1, 1]]))

    def test_path_sum(self):
        there = sse_path([(TWO, IntMatrix.scalar(1), 1)])
        assert path_sgc2(there) == 1
        loop = sse_path([(TWO, IntMatrix.scalar(1), 1), (TWO, IntMatrix.scalar(1), -1)])
        assert path_sgc2(loop) == 0

    def test_broken_path(self):
        path = sse_path([(TWO, IntMatrix.scalar(1), 1), (IntMatrix.scalar(1), IntMatrix.scalar(3), 1)])
        with pytest.raises(VerificationError):
            path_sgc2(path)

    def test_cocycle_on_random_triangles(self, rng):
        for _ in range(1000):
            tri = random_triangle(rng)
            assert verify_triangle(tri)
            assert tri.cocycle_defect() == 0

    def test_vanishes_on_nonnegative_edges_without_short_cycles(self):
        # trace(A) = trace(A^2) = 0
        sources = [
            IntMatrix.from_rows([[0, 1, 0], [0, 0, 1], [1, 0, 0]]),
            IntMatrix.from_rows([[0, 1, 1], [0, 0, 1], [0, 0, 0]]),
        ]
        edges = 0
        for a in sources:
            assert a.trace() == (a @ a).trace() == 0
            for w in esse_factorizations(a, 3, 1):
                assert sgc2(w.r, w.s) == 0
                edges += 1
        assert edges >= 50

    def test_triangle_shape_check(self):
        one = IntMatrix.scalar(1)
        bad = Triangle(one, one, one, one, IntMatrix.from_rows([[1, 1]]), one)
        with pytest.raises(DimensionError):
            verify_triangle(bad)
