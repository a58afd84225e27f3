"""Unit tests for the closed-form oracles and fitting helpers."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bichrome.analytic import (
    AnalyticParams,
    fit_asymmetry,
    fit_peak_ratio,
    jc_eigenvalues,
    phonon_occupation,
    polariton_peaks,
    rho_ee_second_order,
    transmission_analytic,
)
from bichrome.errors import NoSplittingError
from bichrome.params import TWO_PI


def test_jc_eigenvalues_resonant():
    p = AnalyticParams(g=2.0, nu_c=5.0, delta_qd_cavity=0.0)
    up, lo = jc_eigenvalues(1, p)
    assert np.isclose(up / TWO_PI, 7.0)
    assert np.isclose(lo / TWO_PI, 3.0)
    up2, lo2 = jc_eigenvalues(2, p)
    # sqrt(n) scaling of the manifold splitting
    assert np.isclose((up2 - lo2) / (up - lo), np.sqrt(2.0))


def test_jc_eigenvalues_rejects_vacuum_manifold():
    with pytest.raises(ValueError):
        jc_eigenvalues(0, AnalyticParams(g=1.0))


def test_transmission_symmetric_on_resonance():
    p = AnalyticParams(g=30.0, kappa=3.0, gamma=1.0, j1=0.1)
    w = np.linspace(0.1, 40.0, 50)
    left = np.array([transmission_analytic(-x, p) for x in w])
    right = np.array([transmission_analytic(x, p) for x in w])
    assert np.allclose(left, right)


def test_transmission_peaks_match_polariton_formula():
    p = AnalyticParams(g=30.0, kappa=3.0, gamma=1.0, j1=0.1)
    w_plus, w_minus = polariton_peaks(p)
    # frozen from the closed form at the reference parameters
    assert np.isclose(w_plus, 30.049893981681418)
    assert np.isclose(w_minus, -w_plus)
    grid = np.linspace(0.0, 40.0, 400001)
    vals = np.array([transmission_analytic(x, p) for x in grid])
    assert abs(grid[np.argmax(vals)] - w_plus) < 1e-3


def test_no_splitting_below_strong_coupling():
    with pytest.raises(NoSplittingError):
        polariton_peaks(AnalyticParams(g=0.1, kappa=3.0, gamma=1.0, j1=0.0))


def test_rho_ee_limits():
    p = AnalyticParams(g=0.0, gamma=1.0, gamma_d=3.0, j1=1.75, j2=0.35)
    base = 1.75**2 / (2 * 1.75**2 + 1.0 * 4.0)
    # far-detuned probe has no effect; probe-free formula is the base value
    assert np.isclose(rho_ee_second_order(1e9, p), base)
    p0 = AnalyticParams(g=0.0, gamma=1.0, gamma_d=3.0, j1=1.75, j2=0.0)
    assert np.isclose(rho_ee_second_order(0.7, p0), base)
    # even function of the pump-probe detuning
    d = np.linspace(0.1, 10.0, 37)
    assert np.allclose(rho_ee_second_order(d, p), rho_ee_second_order(-d, p))


def test_phonon_occupation_reference_point():
    # Bose-Einstein occupancy of 136 GHz phonons at 10 K
    assert np.isclose(phonon_occupation(136.0, 10.0), 1.0861134534478885)
    assert phonon_occupation(-136.0, 10.0) == phonon_occupation(136.0, 10.0)
    with pytest.raises(ValueError):
        phonon_occupation(136.0, 0.0)
    with pytest.raises(ZeroDivisionError):
        phonon_occupation(0.0, 10.0)


@settings(max_examples=20, deadline=None)
@given(
    st.floats(min_value=0.1, max_value=5.0),
    st.floats(min_value=1.0, max_value=50.0),
)
def test_fit_asymmetry_recovers_exact_model(c, alpha):
    pts = [(g, d, c * g * g / (alpha + d))
           for g in (1.0, 2.0, 3.0, 4.0, 5.0) for d in (60.0, 120.0, 180.0)]
    c_fit, a_fit, rms = fit_asymmetry(pts)
    assert np.isclose(c_fit, c, rtol=1e-6)
    assert np.isclose(a_fit, alpha, rtol=1e-5, atol=1e-6)
    assert rms < 1e-10 * max(p[2] for p in pts)


def test_fit_asymmetry_zero_data():
    pts = [(g, d, 0.0) for g in (1.0, 2.0) for d in (10.0, 20.0)]
    c_fit, _, rms = fit_asymmetry(pts)
    assert c_fit == 0.0 and rms == 0.0


def test_fit_asymmetry_rejects_degenerate_design():
    with pytest.raises(ValueError):
        fit_asymmetry([(2.0, 10.0, 0.5)] * 4)


def test_fit_peak_ratio_recovers_exact_model():
    a, b = 0.8, 0.3
    x = np.linspace(0.02, 0.5, 12)
    pts = [(xv, 2 * a * xv / (1 + b - a * xv)) for xv in x]
    a_fit, b_fit, rms = fit_peak_ratio(pts)
    # (alpha, beta) carry a common scale gauge; only alpha/(1+beta) is
    # identifiable from the curve
    assert np.isclose(a_fit / (1 + b_fit), a / (1 + b), rtol=1e-6)
    assert rms < 1e-10


def test_fit_peak_ratio_rejects_pole_in_range():
    # data forcing 1 + beta - alpha x through zero inside the range
    x = np.array([0.1, 0.5, 0.9, 0.95])
    y = np.array([0.3, 3.0, -4.0, -2.5])
    with pytest.raises(ValueError):
        fit_peak_ratio(np.column_stack([x, y]))
