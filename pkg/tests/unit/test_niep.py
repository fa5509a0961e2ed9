"""Unit tests for spectrum conditions, JLL bounds and realizations."""

import math
from fractions import Fraction

import numpy as np
import pytest

from sft.algebra import det_one_minus_tA, matrix_traces
from sft.matrix import IntMatrix
from sft.niep import (
    CandidateSpectrum,
    PerronVerdict,
    SpectrumRing,
    check_conditions,
    check_perron,
    companion,
    eventually_positive,
    inflate_period,
    jll_check,
    jll_min_size_bound,
    laffey_quantities,
    power_sums,
    realization_report,
    spectrum_pth_root_poly,
    suleimanova_realize,
)
from sft.poly import IntPoly
from sft.structure import is_primitive
from utils.errors import DomainError, PreconditionError

SMALL_GAP = CandidateSpectrum.from_rational(
    [Fraction(-9, 20), Fraction(9, 20), -1, 1]
)
# (t - 2)(t - 1)(t^2 + 1)^2
GAUSSIAN = CandidateSpectrum.from_poly(IntPoly.of(2, -3, 5, -6, 4, -3, 1))


class TestCandidateSpectrum:
    def test_from_roots(self):
        spec = CandidateSpectrum.from_roots([3, -1, -1])
        assert spec.coeffs == tuple(Fraction(c) for c in (-3, -5, -1, 1))
        assert spec.is_integral()
        assert spec.rational_roots() == {Fraction(3): 1, Fraction(-1): 2}

    def test_from_det_poly(self, nonplussed):
        spec = CandidateSpectrum.from_det_poly(det_one_minus_tA(nonplussed))
        assert spec.degree == 2
        assert power_sums(spec, 8) == matrix_traces(nonplussed, 8)

    def test_rejections(self):
        with pytest.raises(DomainError):
            CandidateSpectrum.from_roots([0, 1])
        with pytest.raises(DomainError):
            CandidateSpectrum.from_rational([1, 2])
        with pytest.raises(DomainError):
            CandidateSpectrum.from_det_poly(IntPoly.of(2, 1))

    def test_float_power_sums(self):
        spec = CandidateSpectrum.from_floats([2.0, -1.0])
        assert power_sums(spec, 3) == pytest.approx([1.0, 5.0, 7.0])
        assert not spec.exact


class TestPerron:
    """The dominant root test."""

    def test_passes(self):
        check = check_perron(CandidateSpectrum.from_roots([3, -1, -1]))
        assert check.verdict is PerronVerdict.PASS
        assert check.exact_value == 3
        assert check.gap == pytest.approx(2.0)

    @pytest.mark.parametrize(
        "roots,detail",
        [
            ([1, -2], "another root has larger modulus"),
            ([2, -2], "-lambda is also a root"),
            ([2, 2], "dominant root is repeated"),
            ([-1], "no positive real root"),
        ],
    )
    def test_fails(self, roots, detail):
        check = check_perron(CandidateSpectrum.from_roots(roots))
        assert check.verdict is PerronVerdict.FAIL
        assert check.detail == detail

    def test_uncertain_for_floats(self):
        check = check_perron(CandidateSpectrum.from_floats([1.0, -1.0]))
        assert check.verdict is PerronVerdict.UNCERTAIN

    @pytest.mark.parametrize(
        "coeffs,detail",
        [
            # (t^2 - 2)^2
            ((4, 0, -4, 0, 1), "dominant root is repeated"),
            ((-2, 0, 1), "-lambda is also a root"),
        ],
    )
    def test_irrational_dominant_root_decided_exactly(self, coeffs, detail):
        check = check_perron(CandidateSpectrum.from_poly(IntPoly.of(*coeffs)))
        assert check.verdict is PerronVerdict.FAIL
        assert check.detail == detail
        assert check.value == pytest.approx(math.sqrt(2))
        assert check.exact_value is None

    def test_irrational_dominant_root_passes(self):
        # t^2 - 2t - 1 has roots 1 +- sqrt(2)
        check = check_perron(CandidateSpectrum.from_poly(IntPoly.of(-1, -2, 1)))
        assert check.verdict is PerronVerdict.PASS
        assert check.value == pytest.approx(1 + math.sqrt(2))
        assert check.gap == pytest.approx(2.0)

    def test_repeated_roots_do_not_split(self):
        roots = CandidateSpectrum.from_poly(IntPoly.of(4, 0, -4, 0, 1)).numeric_roots()
        assert sorted(roots.real) == pytest.approx([-math.sqrt(2)] * 2 + [math.sqrt(2)] * 2)
        assert float(np.max(np.abs(roots.imag))) < 1e-12


class TestConditions:
    """Trace, net trace and positivity conditions."""

    def test_gaussian_fails_net_trace_over_z(self):
        report = check_conditions(GAUSSIAN, SpectrumRing.Z, horizon=16)
        assert not report.ok
        assert report.net_trace_violation == (2, -2)
        assert report.net_traces_ok_to == 1
        assert "net trace condition: fail at n = 2 (net trace -2)" in report.summary_lines()

    def test_gaussian_passes_dense(self):
        report = check_conditions(GAUSSIAN, SpectrumRing.DENSE, horizon=16)
        assert report.ok
        assert report.positivity_violation is None
        assert "positivity condition: pass up to n = 16" in report.summary_lines()

    def test_small_gap_needs_ten_vertices(self):
        assert jll_min_size_bound(SMALL_GAP, 8) == 10
        report = check_conditions(SMALL_GAP, SpectrumRing.DENSE, horizon=24)
        assert report.ok
        assert report.jll_min_size == 10

    def test_small_gap_not_integral(self):
        report = check_conditions(SMALL_GAP, SpectrumRing.Z, horizon=8)
        assert not report.coefficients_ok
        assert not report.ok

    def test_negative_trace(self):
        report = check_conditions(CandidateSpectrum.from_roots([1, -2]), SpectrumRing.DENSE, 4)
        assert report.trace_violation == (1, -1)
        assert report.to_dict()["trace_violation"] == [1, "-1"]

    def test_positivity_violation(self):
        # (t - 1)(t^2 + 1/2): s_1 = 1 but s_2 = 0
        spec = CandidateSpectrum.from_rational([Fraction(-1, 2), Fraction(1, 2), -1, 1])
        report = check_conditions(spec, SpectrumRing.DENSE, horizon=8)
        assert report.trace_violation is None
        assert report.positivity_violation == (1, 2)
        assert not report.ok

    def test_passing_report(self):
        report = check_conditions(CandidateSpectrum.from_roots([3, -1, -1]), horizon=32)
        assert report.ok
        assert report.traces_ok_to == 32
        assert report.net_traces_ok_to == 32
        assert report.laffey.gap == Fraction(2, 3)

    def test_horizon(self):
        with pytest.raises(DomainError):
            check_conditions(SMALL_GAP, horizon=0)


class TestLaffey:
    def test_quantities(self):
        spec = CandidateSpectrum.from_roots([1, Fraction(-1, 3), Fraction(-1, 3)])
        q = laffey_quantities(spec, 12)
        assert q.gap == Fraction(2, 3)
        assert q.tracial_floor == Fraction(25, 27)
        assert q.floor_at == 3
        assert q.to_dict()["M"] == "25/27"

    def test_needs_normalization(self):
        with pytest.raises(PreconditionError):
            laffey_quantities(CandidateSpectrum.from_roots([3, -1]), 8)


class TestJll:
    def test_nonnegative_matrix_passes(self, nonplussed):
        assert jll_check(nonplussed, 4, 4)

    def test_needs_nonnegative(self):
        with pytest.raises(DomainError):
            jll_check(IntMatrix.from_rows([[1, -1], [1, 1]]), 2, 2)


class TestRealizations:
    """Companion and cyclic constructions."""

    def test_suleimanova(self):
        out = suleimanova_realize([5, -1, -2])
        assert out.rows[-1] == (Fraction(10), Fraction(13), Fraction(2))
        assert out.is_nonnegative()
        assert det_one_minus_tA(out.as_int_matrix()) == IntPoly.of(1, -2, -13, -10)

    @pytest.mark.parametrize("values", [[-1, -2], [5, 1], [1, -2]])
    def test_suleimanova_preconditions(self, values):
        with pytest.raises(PreconditionError):
            suleimanova_realize(values)

    def test_companion_layout(self):
        comp = companion(CandidateSpectrum.from_roots([2, 1]))
        assert comp.rows == ((0, 1), (-2, 3))

    def test_pth_root(self):
        q = IntPoly.of(1, -8) * IntPoly.of(1, -7) * IntPoly.of(1, -7)
        assert spectrum_pth_root_poly(q, 3) == q.compose_power(3)
        assert spectrum_pth_root_poly(q, 3) == (
            IntPoly.of(1, 0, 0, -8) * IntPoly.of(1, 0, 0, -7) * IntPoly.of(1, 0, 0, -7)
        )
        with pytest.raises(DomainError):
            spectrum_pth_root_poly(q, 0)

    def test_inflate_period(self):
        a = inflate_period(IntMatrix.scalar(2), 3)
        assert a == IntMatrix.from_rows([[0, 2, 0], [0, 0, 1], [1, 0, 0]])
        assert det_one_minus_tA(a) == IntPoly.of(1, 0, 0, -2)

    def test_inflate_period_on_random_primitive(self, rng):
        checked = 0
        while checked < 50:
            d = IntMatrix.random(rng, rng.randint(1, 3), low=0, high=2)
            if not is_primitive(d).primitive:
                continue
            p = rng.randint(1, 5)
            a = inflate_period(d, p)
            assert a.shape == (d.rows * p, d.rows * p)
            assert det_one_minus_tA(a) == det_one_minus_tA(d).compose_power(p)
            checked += 1

    def test_eventually_positive(self, golden_mean):
        assert eventually_positive(golden_mean, 5) == 2
        assert eventually_positive(IntMatrix.from_rows([[0, 1], [1, 0]]), 10) is None

    def test_realization_report(self, nonplussed):
        report = realization_report(nonplussed, horizon=16)
        assert report.ok
        assert report.to_dict()["spectrum"]["coeffs"] == ["2", "-3", "1"]
