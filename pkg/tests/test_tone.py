"""Tone correlation, grid-plus-ascent frequency search, chirp dechirping."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cmf import (ChirpSpec, FrequencyBand, InvalidParameterError, RngSpec,
                 SearchWindow, ToneMeasurements, ToneTrace, concave_refine,
                 dechirp, estimate_chirp_toa, estimate_tone, nyquist_grid,
                 synthesize_chirp_samples, synthesize_tone_measurements,
                 tone_acf_estimate, tone_autocorrelation, tone_process)
from cmf.sampling import TRUTH_STREAM, draw_times
from cmf.tone import _refine_interval, default_tone_tol

TWO_PI = 2.0 * math.pi
WINDOW = SearchWindow(-1.0, 1.0)
BAND = FrequencyBand(50.0)
SPACING = TWO_PI / WINDOW.length


def _tone(omega0, amp, sigma, m, seed, window=WINDOW):
    rng = RngSpec(seed, 0)
    times = draw_times(window, m, rng)
    return synthesize_tone_measurements(omega0, amp, sigma, times, window, rng)


def test_tone_process_matches_brute_force_loop():
    meas = _tone(12.5, 0.7 + 0.4j, 0.3, 7, seed=11)
    for w in (-20.0, 0.0, 12.5, 41.0):
        want = sum(complex(yk) * cmath.exp(-1j * w * tk)
                   for tk, yk in zip(meas.times, meas.y))
        assert tone_process(meas, w) == pytest.approx(want, rel=1e-12)


def test_noiseless_peak_magnitude_is_scaled_window():
    # |R~(w0)| = 2 pi |A| |T| exactly: every term in X(w0) is A
    amp = 1.3 - 0.2j
    meas = _tone(-7.25, amp, 0.0, 25, seed=3)
    trace = tone_acf_estimate(meas, np.array([-8.0, -7.25, -7.0]))
    want = TWO_PI * abs(amp) * WINDOW.length
    assert abs(trace.values[1]) == pytest.approx(want, rel=1e-12)
    assert abs(trace.values[1]) ** 2 == pytest.approx(want ** 2, rel=1e-12)
    assert trace.scale == TWO_PI * WINDOW.length / meas.m


def test_tone_autocorrelation_closed_form():
    assert tone_autocorrelation(0.0, WINDOW) == TWO_PI * WINDOW.length
    # zeros at nonzero multiples of the grid spacing
    vals = tone_autocorrelation(SPACING * np.arange(1, 6), WINDOW)
    assert np.allclose(vals, 0.0, atol=1e-12)
    w = 0.83
    want = TWO_PI * WINDOW.length * np.sinc(WINDOW.length * w / TWO_PI)
    assert tone_autocorrelation(w, WINDOW) == pytest.approx(want, rel=1e-15)


def test_nyquist_grid_example():
    band = FrequencyBand(600.0)
    window = SearchWindow(0.0, 2.0)
    grid = nyquist_grid(band, window)
    assert len(grid) == 383
    assert grid[0] == -600.0 and grid[-1] == 600.0
    steps = np.diff(grid)
    assert np.allclose(steps[:-1], math.pi, rtol=1e-12)
    assert steps[-1] <= math.pi * (1.0 + 1e-12)


@given(st.floats(0.5, 1000.0), st.floats(0.05, 20.0))
def test_nyquist_grid_covers_band(omega_max, length):
    band = FrequencyBand(omega_max)
    grid = nyquist_grid(band, SearchWindow(0.0, length))
    spacing = TWO_PI / length
    assert grid[0] == -omega_max and grid[-1] == omega_max
    steps = np.diff(grid)
    assert np.all(steps > 0.0)
    # no gap exceeds the spacing, so any band frequency is within half
    assert float(np.max(steps)) <= spacing * (1.0 + 1e-9)


@given(st.floats(-1.0, 1.0))
def test_refine_interval_pins_quadratic_peak(center):
    value = lambda w: -((w - center) ** 2)
    slope = lambda w: -2.0 * (w - center)
    got = _refine_interval(value, slope, -2.0, 2.0, 1e-13, 1.0)
    assert got == pytest.approx(center, abs=1e-13)


def test_refine_interval_monotone_edges():
    value = lambda w: -((w - 5.0) ** 2)
    slope = lambda w: -2.0 * (w - 5.0)
    assert _refine_interval(value, slope, -2.0, 2.0, 1e-13, 1.0) == 2.0
    value = lambda w: -((w + 5.0) ** 2)
    slope = lambda w: -2.0 * (w + 5.0)
    assert _refine_interval(value, slope, -2.0, 2.0, 1e-13, 1.0) == -2.0


def test_concave_refine_pins_noiseless_tone():
    omega0 = 17.3
    meas = _tone(omega0, 1.0, 0.0, 50, seed=7)
    tol = default_tone_tol(WINDOW)
    got = concave_refine(meas, omega0 + 0.5, radius=0.7, tol=tol)
    assert got == pytest.approx(omega0, abs=tol)


def test_concave_refine_validation():
    meas = _tone(0.0, 1.0, 0.0, 10, seed=1)
    max_radius = math.pi / (2.0 * WINDOW.length)
    with pytest.raises(InvalidParameterError):
        concave_refine(meas, 0.0, radius=max_radius * 1.01)
    with pytest.raises(InvalidParameterError):
        concave_refine(meas, 0.0, radius=0.0)
    with pytest.raises(InvalidParameterError):
        concave_refine(meas, 0.0, radius=0.1, tol=0.0)


def test_estimate_tone_noiseless_recovers_frequency():
    amp = 2.0 - 1.0j
    for trial in range(20):
        rng = RngSpec(1000 + trial, 0)
        omega0 = float(rng.generator(TRUTH_STREAM).uniform(
            -BAND.omega_max, BAND.omega_max))
        times = draw_times(WINDOW, 30, rng)
        meas = synthesize_tone_measurements(omega0, amp, 0.0, times, WINDOW,
                                            rng)
        est = estimate_tone(meas, BAND)
        assert abs(est.grid_point - omega0) <= SPACING * (1.0 + 1e-9)
        assert abs(est.omega_hat - omega0) <= 1e-9 * SPACING
        assert est.a_hat == pytest.approx(amp, rel=1e-9)
        assert len(est.ascent_starts) == 4


def test_estimate_tone_near_band_edge():
    omega0 = BAND.omega_max - 1e-3
    meas = _tone(omega0, 1.0, 0.0, 40, seed=5)
    est = estimate_tone(meas, BAND)
    assert abs(est.omega_hat - omega0) <= 1e-9 * SPACING


def test_tone_shift_equivariance():
    meas = _tone(4.0, 1.0, 0.2, 20, seed=9)
    delta = 2.5
    shifted = ToneMeasurements(times=meas.times,
                               y=meas.y * np.exp(1j * delta * meas.times),
                               window=WINDOW, omega0=None, seed=None)
    probe = np.linspace(-10.0, 10.0, 41)
    lhs = tone_process(shifted, probe)
    rhs = tone_process(meas, probe - delta)
    assert np.allclose(lhs, rhs, rtol=1e-10)


def test_dechirp_leaves_residual_tone():
    chirp = ChirpSpec(omega_c=30.0, alpha=100.0, t0=0.37, amp=0.8 + 0.3j)
    rng = RngSpec(13, 0)
    times = draw_times(WINDOW, 40, rng)
    samples = synthesize_chirp_samples(chirp, times, 0.0, rng)
    meas = dechirp(times, samples, chirp, WINDOW)
    assert meas.omega0 == -chirp.alpha * chirp.t0
    # the dechirped samples really are a tone at -alpha t0
    peak = tone_process(meas, meas.omega0)
    assert abs(peak) == pytest.approx(meas.m * abs(chirp.amp), rel=1e-12)


def test_estimate_chirp_toa_noiseless():
    band = FrequencyBand(110.0)
    for trial in range(5):
        rng = RngSpec(2000 + trial, 0)
        t0 = float(rng.generator(TRUTH_STREAM).uniform(0.0, 1.0))
        chirp = ChirpSpec(omega_c=30.0, alpha=100.0, t0=t0)
        times = draw_times(WINDOW, 40, rng)
        samples = synthesize_chirp_samples(chirp, times, 0.0, rng)
        t0_hat = estimate_chirp_toa(times, samples, 30.0, 100.0, band, WINDOW)
        assert t0_hat == pytest.approx(t0, abs=1e-10)
    with pytest.raises(InvalidParameterError):
        estimate_chirp_toa(times, samples, 30.0, 0.0, band, WINDOW)
    with pytest.raises(InvalidParameterError):
        ChirpSpec(omega_c=30.0, alpha=0.0, t0=0.1)


def test_tone_trace_csv_and_validation(tmp_path):
    omegas = np.array([-1.0, 0.0, 2.0])
    values = np.array([0.5 - 1.0j, 2.0 + 0.0j, -0.25 + 0.125j])
    trace = ToneTrace(omegas=omegas, values=values, scale=1.0)
    path = tmp_path / "tone.csv"
    trace.to_csv(path)
    lines = path.read_text().strip().split("\n")
    assert lines[0] == "omega,re,im,abs"
    assert [float(line.split(",")[3]) for line in lines[1:]] == \
        [abs(v) for v in values]
    with pytest.raises(InvalidParameterError):
        ToneTrace(omegas=omegas, values=values[:2], scale=1.0)
    with pytest.raises(InvalidParameterError):
        ToneTrace(omegas=omegas[::-1], values=values, scale=1.0)


def test_default_tone_tol():
    assert default_tone_tol(WINDOW) == 1e-12 * SPACING
