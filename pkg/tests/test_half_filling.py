import math

import numpy as np
import pytest
import scipy.integrate
import scipy.special
from hypothesis import given, settings, strategies as st

from hubbard_ent.entanglement import populations, von_neumann_entropy
from hubbard_ent.errors import ConvergenceError, DomainError
from hubbard_ent.half_filling import (
    SeriesRegime,
    double_occupancy_integral,
    half_filling_entropy,
    local_entanglement_half_filling,
    series_double_occupancy,
    series_entanglement,
    series_entanglement_from_w,
)
from hubbard_ent.special import QuadratureSpec

ZETA3 = 1.2020569031595942854
ZETA5 = 1.0369277551433699263


def simpson_oracle(U, upper=None, tol=1e-13):
    """Adaptive Simpson on [0, upper] with scipy's Bessel functions.

    Independent of the package: different quadrature rule, different Bessel
    implementation, explicit truncation far beyond the exponential tail.
    """
    if upper is None:
        upper = 80.0 / U

    def f(t):
        return scipy.special.j0(t) * scipy.special.j1(t) / (1.0 + math.cosh(U * t / 2.0))

    def simpson(a, fa, b, fb, m, fm):
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def rec(a, fa, b, fb, m, fm, whole, eps, depth):
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = simpson(a, fa, m, fm, lm, flm)
        right = simpson(m, fm, b, fb, rm, frm)
        if depth <= 0 or abs(left + right - whole) <= 15 * eps:
            return left + right + (left + right - whole) / 15.0
        return (rec(a, fa, m, fm, lm, flm, left, eps / 2, depth - 1)
                + rec(m, fm, b, fb, rm, frm, right, eps / 2, depth - 1))

    pieces = np.linspace(0.0, upper, 65)
    total = []
    for a, b in zip(pieces[:-1], pieces[1:]):
        m = 0.5 * (a + b)
        fa, fb, fm = f(a), f(b), f(m)
        total.append(rec(a, fa, b, fb, m, fm, simpson(a, fa, b, fb, m, fm), tol / 64, 40))
    return math.fsum(total)


def test_zero_coupling():
    assert double_occupancy_integral(0.0) == pytest.approx(0.25, abs=1e-12)
    assert local_entanglement_half_filling(0.0) == pytest.approx(2.0, abs=1e-12)


@pytest.mark.parametrize("U", [1.0, 4.0, 9.5])
def test_against_independent_oracle(U):
    assert double_occupancy_integral(U) == pytest.approx(simpson_oracle(U), abs=1e-9)


def test_against_scipy_quad():
    U = 4.0
    f = lambda t: scipy.special.j0(t) * scipy.special.j1(t) / (1.0 + math.cosh(U * t / 2))
    ref, _ = scipy.integrate.quad(f, 0, 40, limit=400, epsabs=1e-14, epsrel=1e-14)
    assert double_occupancy_integral(U) == pytest.approx(ref, abs=1e-10)


def test_large_coupling():
    assert 0 <= double_occupancy_integral(1e6) < 1e-10
    assert local_entanglement_half_filling(1e6) == pytest.approx(1.0, abs=1e-8)


def test_negative_mirror_exact():
    for U in (0.3, 1.0, 4.0, 12.0):
        assert double_occupancy_integral(-U) == 0.5 - double_occupancy_integral(U)


def test_monotone_and_bounded_on_grid():
    grid = np.arange(-8.0, 8.0001, 0.25)
    w = np.array([double_occupancy_integral(U) for U in grid])
    ev = np.array([local_entanglement_half_filling(U) for U in grid])
    assert np.all(np.diff(w) < 0)
    assert np.all((w >= 0) & (w <= 0.5))
    assert np.all((ev >= 1 - 1e-12) & (ev <= 2 + 1e-12))
    assert grid[np.argmax(ev)] == 0.0


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=0.01, max_value=50.0))
def test_evenness(U):
    a = local_entanglement_half_filling(U)
    b = local_entanglement_half_filling(-U)
    assert abs(a - b) <= 1e-10


def test_entropy_matches_general_formula():
    for U in (0.5, 2.0, 6.0):
        w = double_occupancy_integral(U)
        rho = populations(w, 0.5, 0.5)
        assert half_filling_entropy(w) == pytest.approx(von_neumann_entropy(rho), abs=1e-14)


def test_quadrature_budget_exhaustion():
    with pytest.raises(ConvergenceError) as info:
        double_occupancy_integral(0.01, QuadratureSpec(max_panels=2))
    assert info.value.partial is not None


@pytest.mark.parametrize("bad", [math.inf, -math.inf, math.nan])
def test_non_finite_coupling(bad):
    with pytest.raises(DomainError):
        double_occupancy_integral(bad)


def test_strong_series_examples():
    U = 20.0
    expected = 4 * math.log(2) / U**2 - 27 * ZETA3 / U**4 + 375 * ZETA5 / U**6
    assert series_double_occupancy(U, SeriesRegime.STRONG) == pytest.approx(expected, rel=1e-15)
    assert abs(double_occupancy_integral(20.0) - series_double_occupancy(20.0, "strong_coupling")) <= 1e-6
    assert abs(double_occupancy_integral(40.0) - series_double_occupancy(40.0, "strong_coupling")) <= 1e-8


@pytest.mark.parametrize("U", [0.1, 0.25, 0.5])
def test_weak_series_window(U):
    expected = 0.25 - 7 * ZETA3 * U / (8 * math.pi**3) - 93 * ZETA5 * U**3 / (512 * math.pi**5)
    assert series_double_occupancy(U, SeriesRegime.WEAK) == pytest.approx(expected, rel=1e-15)
    assert abs(double_occupancy_integral(U) - expected) <= 1e-4


def test_series_windows_enforced():
    with pytest.raises(DomainError):
        series_double_occupancy(4.0, SeriesRegime.STRONG)
    with pytest.raises(DomainError):
        series_double_occupancy(2.0, SeriesRegime.WEAK)
    with pytest.raises(ValueError):
        series_double_occupancy(2.0, "medium")


def test_printed_entropy_expansions():
    U = 20.0
    assert series_entanglement(U, SeriesRegime.STRONG) == pytest.approx(1 + 16 * math.log(U) / U**2)
    U = 0.2
    x = 7 * ZETA3 * U / (2 * math.pi**3)
    assert series_entanglement(U, SeriesRegime.WEAK) == pytest.approx(2 - x * x / math.log(2), abs=1e-15)
    assert series_entanglement(U, SeriesRegime.WEAK) == pytest.approx(2 - 1.063e-3, abs=1e-6)


def test_entropy_from_series_w_tracks_integral():
    for U in (20.0, 40.0):
        exact = local_entanglement_half_filling(U)
        assert series_entanglement_from_w(U, SeriesRegime.STRONG) == pytest.approx(exact, abs=1e-5)
    for U in (0.1, 0.5):
        exact = local_entanglement_half_filling(U)
        assert series_entanglement_from_w(U, SeriesRegime.WEAK) == pytest.approx(exact, abs=1e-6)
