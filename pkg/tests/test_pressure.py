import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thuemorse.measure import ResourceError
from thuemorse.potential import LOG2, LOG32, psi_n
from thuemorse.pressure import (
    birkhoff_spectrum,
    cylinder_sup_pressure,
    default_t_grid,
    dimension_spectrum,
    discrete_second_differences,
    legendre,
    midpoint_table,
    PressureCurve,
    pressure_approx,
    pressure_curve,
    pressure_slope_at_zero,
    restricted_pressure,
    restricted_table,
    slope_at_zero_closed_form,
)
from thuemorse.symbolic import count_words


def _brute_pressure(n, t):
    x = (2 * np.arange(1, 2 ** (n - 2) + 1) - 1) / 2.0**n
    s = np.sum((np.exp(psi_n(x, n)) / 2.0) ** t)
    return math.log(s) / (n - 2)


@pytest.mark.parametrize("n,t", [(5, 0.0), (6, 0.7), (8, 2.5), (10, 5.0)])
def test_pressure_against_direct_sum(n, t):
    assert pressure_approx(n, t) == pytest.approx(_brute_pressure(n, t), abs=1e-12)


@pytest.mark.parametrize("n", [3, 4, 9, 16])
def test_normalisations(n):
    assert pressure_approx(n, 0.0) == pytest.approx(LOG2, abs=1e-12)
    assert pressure_approx(n, 1.0) == pytest.approx(LOG2, abs=1e-9)


def test_midpoints_are_never_singular():
    assert np.all(np.isfinite(midpoint_table(14)))


def test_domain_and_caps():
    with pytest.raises(ValueError):
        pressure_approx(10, -0.1)
    with pytest.raises(ValueError):
        pressure_curve(10, [0.2, 0.1])
    with pytest.raises(ValueError):
        pressure_approx(2, 1.0)
    with pytest.raises(ResourceError):
        pressure_approx(40, 1.0)


def test_curve_convex_and_between_asymptotes():
    c = pressure_curve(16, default_t_grid(20.0, 0.25))
    assert c.is_convex(tol=1e-9)
    assert np.all(c.p >= c.t * LOG32)
    assert np.all(c.p <= (1 + c.t) * LOG2 + 1e-12)


def test_asymptotic_offset_decreases_with_n():
    offs = [pressure_approx(n, 8.0) - 8 * LOG32 for n in (12, 16, 20)]
    assert offs[0] > offs[1] > offs[2] > 0


@pytest.mark.parametrize("n", [4, 5, 10, 18])
def test_slope_at_zero(n):
    assert pressure_slope_at_zero(n) == pytest.approx(slope_at_zero_closed_form(n), abs=1e-12)
    h = 1e-6
    fd = (pressure_approx(n, h) - pressure_approx(n, 0.0)) / h
    assert fd == pytest.approx(pressure_slope_at_zero(n), abs=1e-4)


def test_slope_values():
    assert pressure_slope_at_zero(20) == pytest.approx(-0.6546, abs=1e-4)
    assert pressure_slope_at_zero(4) == pytest.approx(-0.4332, abs=1e-4)


def test_restricted_zero_temperature_counts_words():
    for m in (1, 2, 3):
        assert restricted_pressure(m, 12, 0.0) == pytest.approx(math.log(count_words(12, m)) / 12, abs=1e-12)


def test_restricted_representatives_are_admissible_points():
    # psi is bounded on X_m, so the table is finite
    assert np.all(np.isfinite(restricted_table(2, 14)))
    with pytest.raises(ValueError):
        restricted_table(5, 5)


@settings(max_examples=25, deadline=None)
@given(st.floats(-3.0, 3.0))
def test_restricted_monotone_in_m(t):
    vals = [restricted_pressure(m, 14, t) for m in (1, 2, 3, 4, 6)]
    assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))


def test_restricted_curve_allows_negative_t():
    from thuemorse.pressure import restricted_pressure_curve

    c = restricted_pressure_curve(2, 12, [-2.0, -1.0, 0.0, 1.0])
    assert c.kind == "restricted" and c.m == 2
    assert c.is_convex(tol=1e-9)


def test_cylinder_sup_pressure_small_n():
    t = np.array([0.0, 1.0, 3.0])
    sup = cylinder_sup_pressure(8, t)
    assert sup[0] == pytest.approx(LOG2, abs=1e-12)
    # sup-based sums dominate the value at any admissible point
    assert np.all(sup >= np.array([restricted_pressure(3, 8, s) for s in t]) - 1e-12)
    with pytest.raises(ValueError):
        cylinder_sup_pressure(17, t)


def test_legendre_of_a_line():
    t = np.linspace(0, 10, 101)
    curve = PressureCurve("full", 0, t, 2.0 - 0.5 * t)
    lt = legendre(curve, [-1.0, -0.5, 0.0])
    assert lt.value[0] == pytest.approx(-2.0)
    assert lt.value[1] == pytest.approx(-2.0)
    assert lt.unbounded[2] and lt.value[2] == math.inf


@settings(max_examples=20, deadline=None)
@given(st.lists(st.floats(-1.0, 0.6), min_size=1, max_size=20))
def test_spectrum_is_a_dimension(alpha):
    c = pressure_curve(14, default_t_grid(20.0, 0.2))
    b = birkhoff_spectrum(14, alpha, curve=c).value
    assert np.all((b >= 0) & (b <= 1))
    assert np.all(b[np.asarray(alpha) > LOG32] == 0)


def test_spectrum_endpoints_and_concavity():
    c = pressure_curve(18, default_t_grid())
    alpha = np.linspace(-LOG2, LOG32, 201)
    b = birkhoff_spectrum(18, alpha, curve=c).value
    assert b[0] == pytest.approx(1.0)
    assert b[-1] < 0.06
    assert discrete_second_differences(alpha, b).max() <= 1e-8


def test_dimension_spectrum_reparametrises():
    c = pressure_curve(12, default_t_grid())
    a = np.linspace(0.3, 2.0, 50)
    f = dimension_spectrum(12, a, curve=c)
    b = birkhoff_spectrum(12, LOG2 * (1 - a), curve=c)
    assert np.array_equal(f.value, b.value)
    assert f.kind == "dimension"


def test_second_differences_of_quadratic():
    x = np.linspace(0, 1, 11)
    assert np.allclose(discrete_second_differences(x, 3 * x**2), 6.0)
