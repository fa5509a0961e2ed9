"""Unit tests for exact integer matrices, polynomials, series and Smith forms."""

from fractions import Fraction

import pytest

from sft.algebra import (
    char_poly,
    det_one_minus_tA,
    determinant,
    matrix_traces,
    mobius,
    net_trace,
    net_traces,
    poly_from_traces,
    traces_from_poly,
    zeta_exp_side,
    zeta_series,
)
from sft.invariants import riedel_pair
from sft.matrix import IntMatrix, unimodular_inverse
from sft.poly import IntPoly, factored_display, from_roots
from sft.series import RationalSeries
from sft.snf import FGAbelianGroup, cokernel, smith_normal_form
from utils.errors import DimensionError, DomainError, MalformedInputError, NotRealizableError


class TestIntMatrix:
    """Construction, arithmetic and inverses."""

    def test_from_rows_rejects_ragged_rows(self):
        with pytest.raises(DimensionError):
            IntMatrix.from_rows([[1, 2], [3]])

    def test_product_and_power(self, golden_mean):
        assert golden_mean @ golden_mean == IntMatrix.from_rows([[2, 1], [1, 1]])
        assert golden_mean.power(5) == IntMatrix.from_rows([[8, 5], [5, 3]])
        assert golden_mean.power(0) == IntMatrix.identity(2)

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            IntMatrix.zeros(2, 3) @ IntMatrix.zeros(2, 3)

    def test_block_and_direct_sum(self):
        a = IntMatrix.scalar(2)
        b = IntMatrix.from_rows([[1, 1], [0, 1]])
        assert a.direct_sum(b) == IntMatrix.from_rows([[2, 0, 0], [0, 1, 1], [0, 0, 1]])
        assert IntMatrix.block([[a, IntMatrix.zeros(1, 2)]]).shape == (1, 3)

    def test_permutation_convention(self):
        p = IntMatrix.permutation([1, 2, 0])
        assert p.to_rows() == [[0, 1, 0], [0, 0, 1], [1, 0, 0]]

    def test_unimodular_inverse(self):
        u = IntMatrix.from_rows([[2, 1], [1, 1]])
        assert u @ unimodular_inverse(u) == IntMatrix.identity(2)

    def test_inverse_rejects_non_unimodular(self):
        with pytest.raises(DimensionError):
            unimodular_inverse(IntMatrix.from_rows([[2, 0], [0, 1]]))

    def test_str_right_justifies(self):
        assert str(IntMatrix.from_rows([[10, 1], [2, 3]])) == "10  1\n 2  3"


class TestIntPoly:
    """Parsing and printing in the file grammar."""

    @pytest.mark.parametrize(
        "text,coeffs",
        [
            ("1+2*t^3", (1, 0, 0, 2)),
            ("t", (0, 1)),
            ("-t^2+3", (3, 0, -1)),
            ("0", ()),
            ("2*t-t", (0, 1)),
        ],
    )
    def test_parse(self, text, coeffs):
        assert IntPoly.parse(text).coeffs == coeffs

    @pytest.mark.parametrize("text", ["", "1 + t", "2t", "1+", "t^", "1**t", "x"])
    def test_parse_rejects(self, text):
        with pytest.raises(MalformedInputError):
            IntPoly.parse(text)

    def test_parse_error_points_at_column(self):
        with pytest.raises(MalformedInputError) as exc:
            IntPoly.parse("1+2t", line=4, column=7)
        assert exc.value.line == 4
        assert exc.value.column == 8

    def test_text_round_trip(self):
        p = IntPoly.of(1, -2, 0, 1)
        assert p.to_text() == "1-2*t+t^3"
        assert IntPoly.parse(p.to_text()) == p

    def test_pretty(self):
        assert IntPoly.of(1, -11, 39, -45).pretty() == "1 - 11t + 39t^2 - 45t^3"

    def test_factored_display(self):
        assert factored_display(IntPoly.of(1, -3, 2)) == "(1 - 2t)(1 - t)"
        assert factored_display(IntPoly.of(1, -11, 39, -45)) == "(1 - 5t)(1 - 3t)^2"
        assert factored_display(IntPoly.one()) == "1"

    def test_compose_power_and_monomials(self):
        q = IntPoly.of(1, -2)
        assert q.compose_power(3) == IntPoly.of(1, 0, 0, -2)
        assert IntPoly.of(0, 0, 1, 2).monomial_units() == [2, 3, 3]


class TestCharacteristicPolynomials:
    """char_poly and det(I - tA)."""

    def test_diagonal_example(self):
        p = det_one_minus_tA(IntMatrix.diag([3, 3, 5, 0]))
        assert p == IntPoly.of(1, -11, 39, -45)

    def test_ashley_has_the_spectrum_of_the_two_shift(self, ashley):
        assert det_one_minus_tA(ashley) == IntPoly.of(1, -2)

    def test_nilpotent(self):
        n = IntMatrix.from_rows([[0, 1, 0], [0, 0, 1], [0, 0, 0]])
        assert char_poly(n) == IntPoly.monomial(3)
        assert det_one_minus_tA(n) == IntPoly.one()

    def test_char_poly_is_reversed_det(self, rng):
        for _ in range(30):
            a = IntMatrix.random(rng, rng.randint(1, 4), low=-3, high=3)
            assert det_one_minus_tA(a) == char_poly(a).reverse(a.rows)

    @pytest.mark.parametrize("k", range(1, 11))
    def test_riedel_pairs_share_char_poly(self, k):
        a, b = riedel_pair(k)
        expected = IntPoly.of(k * k - 2, -2 * k, 1)
        assert char_poly(a) == expected
        assert char_poly(b) == expected

    def test_determinant_matches_constant_term(self, rng):
        for _ in range(20):
            a = IntMatrix.random(rng, 3, low=-4, high=4)
            sign = -1 if a.rows % 2 else 1
            assert determinant(a) == sign * char_poly(a).constant_term

    def test_non_square(self):
        with pytest.raises(DimensionError):
            char_poly(IntMatrix.zeros(2, 3))


class TestTracesAndZeta:
    """Newton identities, net traces and the zeta identity."""

    def test_traces_of_golden_mean(self, golden_mean):
        assert matrix_traces(golden_mean, 6) == [1, 3, 4, 7, 11, 18]

    def test_newton_round_trip(self, rng):
        for _ in range(500):
            degree = rng.randint(0, 6)
            p = IntPoly((1,) + tuple(rng.randint(-5, 5) for _ in range(degree)))
            taus = traces_from_poly(p, 6)
            assert poly_from_traces(taus, max_degree=6) == p

    def test_traces_from_poly_match_matrix(self, nonplussed):
        p = det_one_minus_tA(nonplussed)
        assert traces_from_poly(p, 8) == matrix_traces(nonplussed, 8)

    def test_poly_from_traces_rejects_fractional(self):
        with pytest.raises(NotRealizableError):
            poly_from_traces([1, 0])

    def test_poly_from_traces_rejects_excess_degree(self):
        with pytest.raises(NotRealizableError):
            poly_from_traces([2, 4, 8, 16, 32], max_degree=0)

    def test_mobius(self):
        assert [mobius(n) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]
        with pytest.raises(DomainError):
            mobius(0)

    def test_net_traces_of_two_shift(self):
        taus = [2**n for n in range(1, 7)]
        assert net_traces(taus) == [2, 2, 6, 12, 30, 54]
        assert net_trace(taus, 4) == 12

    def test_net_trace_works_on_fractions(self):
        taus = [Fraction(1, 2), Fraction(3, 4)]
        assert net_trace(taus, 2) == Fraction(1, 4)

    def test_zeta_identity_random_sweep(self, rng):
        for _ in range(200):
            a = IntMatrix.random(rng, rng.randint(1, 4), low=0, high=3)
            assert zeta_series(a, 10) == zeta_exp_side(a, 10)

    def test_zeta_of_two_shift(self):
        series = zeta_series(IntMatrix.scalar(2), 5)
        assert series.as_ints() == [1, 2, 4, 8, 16, 32]


class TestRationalSeries:
    def test_exp_log_inverse(self):
        s = RationalSeries.of([0, 1, Fraction(1, 2)], 6)
        assert s.exp().log() == s

    def test_reciprocal(self):
        s = RationalSeries.of([1, -1], 5)
        assert s.reciprocal().as_ints() == [1, 1, 1, 1, 1, 1]

    def test_orders_must_match(self):
        with pytest.raises(DomainError):
            RationalSeries.one(3) + RationalSeries.one(4)


class TestSmithForm:
    """Smith normal form and cokernels."""

    def test_unimodular_transforms(self, rng):
        for _ in range(40):
            m = IntMatrix.random(rng, rng.randint(1, 4), rng.randint(1, 4), -6, 6)
            u, d, v = smith_normal_form(m)
            assert u @ m @ v == d
            assert abs(u.det()) == 1 and abs(v.det()) == 1
            diag = [x for x in smith_normal_form(m).diagonal if x]
            assert all(x > 0 for x in diag)
            assert all(diag[i + 1] % diag[i] == 0 for i in range(len(diag) - 1))

    def test_one_by_one(self):
        assert smith_normal_form(IntMatrix.scalar(-2)).diagonal == [2]

    def test_identity(self):
        assert smith_normal_form(IntMatrix.identity(3)).d == IntMatrix.identity(3)

    @pytest.mark.parametrize(
        "rows_,display",
        [
            ([[-1]], "0"),
            ([[-2]], "Z/2"),
            ([[0, 0], [0, 0]], "Z^2"),
            ([[2, 0], [0, 4]], "Z/2 + Z/4"),
            ([[0, 0], [0, 4]], "Z + Z/4"),
        ],
    )
    def test_cokernel(self, rows_, display):
        assert str(cokernel(IntMatrix.from_rows(rows_))) == display

    def test_group_validation(self):
        with pytest.raises(DimensionError):
            FGAbelianGroup(0, (4, 2))
        assert FGAbelianGroup(0, (2, 6)).order == 12
        assert FGAbelianGroup(1).order is None

    def test_from_roots_helper(self):
        assert from_roots([2, 1]) == IntPoly.of(2, -3, 1)
