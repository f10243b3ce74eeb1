import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from thuemorse.entropy import (
    KAPPA,
    _sum_partial_richardson,
    _sum_resummed,
    energy_exponent,
    entropy_series,
    eta,
    eta_empirical,
    eta_table,
    information_dimension,
)

H_REF = mpmath.mpf("0.50638399544731967430")


def test_eta_examples():
    assert eta(0) == 1
    assert eta(1) == Fraction(-1, 3)
    assert eta(3) == Fraction(1, 3)


@given(st.integers(0, 20_000))
def test_eta_renormalisation(j):
    assert eta(2 * j) == eta(j)
    assert eta(2 * j + 1) == -(eta(j) + eta(j + 1)) / 2
    assert abs(eta(j)) <= 1


@given(st.integers(1, 5000))
def test_eta_denominators_are_2_3_smooth(j):
    d = eta(j).denominator
    while d % 2 == 0:
        d //= 2
    while d % 3 == 0:
        d //= 3
    assert d == 1


def test_eta_matches_empirical_autocorrelation():
    table = eta_table(64)
    emp = np.array([eta_empirical(j, 22) for j in range(65)])
    assert np.max(np.abs(np.array([float(x) for x in table]) - emp)) <= 2e-5
    assert eta_empirical(0, 20) == 1.0
    assert eta_empirical(1, 22) == pytest.approx(-1 / 3, abs=1e-5)


def test_eta_empirical_rejects_long_lags():
    with pytest.raises(ValueError):
        eta_empirical(16, 4)


def test_entropy_value():
    r = entropy_series(10)
    assert abs(r.h - H_REF) < 1e-10
    assert r.digits_validated >= 10
    with mpmath.workdps(40):
        assert abs(r.h - (2 * mpmath.log(2) + 2 * r.S)) < mpmath.mpf(10) ** -30
    assert float(r.S) == pytest.approx((0.50638399544731967 - 2 * math.log(2)) / 2, abs=1e-12)
    assert r.h_decimal.startswith("0.5063839954")


def test_entropy_low_target():
    assert float(entropy_series(3).h) == pytest.approx(0.506, abs=5e-4)


def test_entropy_target_range():
    with pytest.raises(ValueError):
        entropy_series(15)


def test_schemes_are_independent_and_converge():
    with mpmath.workdps(40):
        coarse = _sum_partial_richardson(K=12)
        fine = _sum_partial_richardson(K=18)
        r3 = _sum_resummed(levels=3)
        r5 = _sum_resummed(levels=5)
    assert abs(coarse - fine) < 1e-12
    assert abs(r3 - r5) < 1e-15
    assert abs(fine - r5) < 1e-18


def test_derived_constants():
    r = entropy_series(10)
    d1 = information_dimension(r)
    assert d1 == pytest.approx(0.7305, abs=5e-4)
    assert d1 * math.log(2) == pytest.approx(float(r.h), rel=1e-15)
    assert KAPPA == pytest.approx(1.2808, abs=1e-4)
    assert energy_exponent() == pytest.approx(0.6427, abs=5e-4)
    assert d1 > energy_exponent()
