"""Singular series, local densities, and window-statistic tests."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from koblitz.errors import DomainError
from koblitz.twinseries import (
    F_local,
    F_mult,
    TwinWindow,
    bdh_statistic,
    error_E,
    psi,
    rho,
    singular_series,
    singular_series_mod,
)

# Hardy-Littlewood twin prime constant C2, literature value
TWIN_PRIME_C2 = 0.6601618158468695739


class TestSingularSeries:
    def test_zero_at_odd(self):
        assert singular_series(3).value == 0.0
        assert singular_series(-7).value == 0.0

    def test_domain(self):
        with pytest.raises(DomainError):
            singular_series(0)

    def test_power_of_two_invariance(self):
        assert singular_series(4).value == singular_series(2).value
        assert singular_series(-2).value == singular_series(2).value

    def test_odd_prime_factor_ratio(self):
        assert singular_series(6).value / singular_series(2).value == pytest.approx(
            2.0, rel=1e-12
        )
        assert singular_series(10).value / singular_series(2).value == pytest.approx(
            4.0 / 3.0, rel=1e-12
        )

    def test_against_literature_constant(self):
        got = singular_series(2).value
        assert got == pytest.approx(2.0 * TWIN_PRIME_C2, abs=2e-6)
        assert got >= 2.0 * TWIN_PRIME_C2  # omitted factors are all < 1
        assert abs(got - 2.0 * TWIN_PRIME_C2) <= singular_series(2).error_bound


class TestRho:
    def test_examples(self):
        assert rho(2, 3) == 1
        assert rho(3, 3) == 2
        assert rho(2, 15) == 3
        assert rho(5, 1) == 1

    def test_domain(self):
        with pytest.raises(DomainError):
            rho(2, 0)

    @given(
        st.integers(min_value=-60, max_value=60),
        st.integers(min_value=1, max_value=300),
    )
    @settings(max_examples=300, deadline=None)
    def test_enumeration_oracle(self, r, q):
        enum = sum(
            1
            for a in range(q)
            if math.gcd(a, q) == 1 and math.gcd(a - r, q) == 1
        )
        assert rho(r, q) == enum


class TestSingularSeriesMod:
    def test_examples(self):
        assert singular_series_mod(2, 3, 1).value == pytest.approx(
            singular_series(2).value, rel=1e-12
        )
        assert singular_series_mod(2, 3, 2).value == 0.0
        assert singular_series_mod(1, 7, 2).value == 0.0  # odd r

    def test_non_coprime_class_is_zero(self):
        assert singular_series_mod(2, 6, 3).value == 0.0

    def test_domain(self):
        with pytest.raises(DomainError):
            singular_series_mod(0, 3, 1)
        with pytest.raises(DomainError):
            singular_series_mod(2, 0, 1)


def _oracle_F(s, r, q, a):
    """Direct complex double sum, independent of the multiplicative route."""
    total = 0.0 + 0.0j
    g = math.gcd(q, s)
    for b in range(1, s + 1):
        if math.gcd(b, s) != 1:
            continue
        for c in range(1, s + 1):
            if math.gcd(c, s) != 1 or (c - a) % g != 0:
                continue
            total += cmath.exp(2j * cmath.pi * (b * c - r * b) / s)
    out = round(total.real)
    assert abs(total.real - out) < 1e-6 and abs(total.imag) < 1e-6
    return out


class TestF:
    def test_case_examples(self):
        assert F_local(5, 2, 1, 1) == 1
        assert F_local(3, 3, 1, 1) == -2
        assert F_local(3, 1, 3, 1) == 2
        assert F_local(3, 1, 3, 2) == -1
        assert F_local(3, 1, 6, 3) == 0  # a not invertible mod q

    def test_local_domain(self):
        with pytest.raises(DomainError):
            F_local(6, 1, 1, 1)

    def test_mult_domain(self):
        with pytest.raises(DomainError):
            F_mult(12, 1, 1, 1)
        with pytest.raises(DomainError):
            F_mult(0, 1, 1, 1)

    def test_against_exponential_sum(self):
        for s in (1, 2, 3, 5, 6, 10, 15, 21, 30):
            for r in (-3, 0, 1, 2, 5):
                for q, a in ((1, 1), (2, 1), (3, 2), (6, 1), (6, 4), (4, 3)):
                    assert F_mult(s, r, q, a) == _oracle_F(s, r, q, a), (s, r, q, a)

    @given(
        st.sampled_from([1, 2, 3, 5, 6, 7, 10, 13, 14, 15, 21, 22, 26, 33, 35]),
        st.integers(min_value=-15, max_value=15),
        st.integers(min_value=-15, max_value=15),
        st.sampled_from([1, 2, 3, 4, 5, 6, 9, 12]),
    )
    @settings(max_examples=200, deadline=None)
    def test_exponential_sum_property(self, s, r, a, q):
        assert F_mult(s, r, q, a) == _oracle_F(s, r, q, a)


class TestPsi:
    def test_window_validation(self):
        with pytest.raises(DomainError):
            TwinWindow(X=-1, Y=10)
        with pytest.raises(DomainError):
            TwinWindow(X=0, Y=0)

    def test_hand_enumeration_r2(self):
        # twin pairs (p, p-2) with p <= 20: (5,3), (7,5), (13,11), (19,17)
        expected = sum(math.log(p) * math.log(p - 2) for p in (5, 7, 13, 19))
        got = psi(TwinWindow(X=0, Y=20), 2, 1, 0)
        assert got == pytest.approx(expected, rel=1e-12)

    def test_odd_r_catches_single_pair(self):
        # r = 1: only (3, 2)
        got = psi(TwinWindow(X=0, Y=50), 1, 1, 0)
        assert got == pytest.approx(math.log(3) * math.log(2), rel=1e-12)

    def test_even_class_empty(self):
        assert psi(TwinWindow(X=3, Y=100), 2, 2, 0) == 0.0

    def test_residue_class_split(self):
        w = TwinWindow(X=0, Y=200)
        total = psi(w, 2, 1, 0)
        parts = sum(psi(w, 2, 3, a) for a in range(3))
        assert parts == pytest.approx(total, rel=1e-12)

    def test_negative_r(self):
        # r = -2 pairs (p, p+2): p in {3, 5, 11, 17, 29} for p <= 30
        expected = sum(math.log(p) * math.log(p + 2) for p in (3, 5, 11, 17, 29))
        got = psi(TwinWindow(X=0, Y=30), -2, 1, 0)
        assert got == pytest.approx(expected, rel=1e-12)

    def test_error_is_psi_minus_expected(self):
        w = TwinWindow(X=100, Y=400)
        e = error_E(w, 2, 3, 1)
        expected = singular_series_mod(2, 3, 1).value * w.Y
        assert e == pytest.approx(psi(w, 2, 3, 1) - expected, rel=1e-12)


class TestBdhStatistic:
    def test_hand_oracle_small(self):
        w = TwinWindow(X=0, Y=10)
        res = bdh_statistic(10, 2, 1, w)
        direct = sum(error_E(w, r, 1, 0) ** 2 for r in (-2, -1, 1, 2))
        assert res.S == pytest.approx(direct, rel=1e-12)
        assert res.normalized == pytest.approx(direct / (2 * 100.0), rel=1e-12)

    def test_per_q_marginals_sum_to_total(self):
        w = TwinWindow(X=0, Y=500)
        res = bdh_statistic(500, 5, 3, w)
        assert sum(res.per_q.values()) == pytest.approx(res.S, rel=1e-12)

    def test_matches_error_E_per_row(self):
        w = TwinWindow(X=50, Y=300)
        res = bdh_statistic(400, 4, 3, w, collect_rows=True)
        for r, q, a, psi_v, exp_v, err in res.rows:
            assert err == pytest.approx(error_E(w, r, q, a), abs=1e-9)
            assert psi_v == pytest.approx(psi(w, r, q, a), abs=1e-9)

    def test_domain(self):
        with pytest.raises(DomainError):
            bdh_statistic(10, 2, 1, TwinWindow(X=5, Y=10))
        with pytest.raises(DomainError):
            bdh_statistic(100, 0, 1, TwinWindow(X=0, Y=50))
