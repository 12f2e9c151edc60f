"""Template constructors, spectral metrics, autocorrelation.

The Gaussian pulse has closed-form norms on a truncated band (erf
integrals), which makes it the main oracle here; flat templates are
piecewise constant and everything about them is elementary. Quadrature
results are cross-checked against an adaptive integrator from scipy.
"""

import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad, trapezoid
from scipy.special import erf

from cmf import (FrequencyBand, InvalidParameterError, QuadratureSpec,
                 SearchWindow, ZeroEnergyError, autocorrelation,
                 compute_metrics, lobe_profile, make_custom_template,
                 make_flat_band, make_gaussian_pulse, template_from_json)

TWO_PI = 2.0 * math.pi

A = 1.0 / 200.0
BAND = FrequencyBand(600.0)  # [-3/a, 3/a]
GAUSS = make_gaussian_pulse(A)

# closed forms for the Gaussian spectrum sqrt(2a) pi^(1/4) e^{-(a w)^2 / 2}
# integrated over [-3/a, 3/a]
GAUSS_PEAK = 0.13313353638003897
GAUSS_L2SQ = TWO_PI * erf(3.0)
GAUSS_L4_4 = 2.0 * math.sqrt(2.0) * A * math.pi ** 1.5 * erf(3.0 * math.sqrt(2.0))
GAUSS_LINF = 2.0 * A * math.sqrt(math.pi)

# |sinc| maximum past its second zero, from a bounded scalar minimization
# of the closed form (x = 2.4590240209835827)
SINC_SECOND_LOBE = 0.12837455352589905


def test_gaussian_spectrum_peak():
    assert math.sqrt(2.0 * A) * math.pi ** 0.25 == GAUSS_PEAK
    assert complex(GAUSS.spectrum(0.0)) == GAUSS_PEAK
    assert GAUSS.case == "real"


def test_gaussian_metrics_match_erf_closed_forms():
    m = compute_metrics(GAUSS, BAND)
    assert m.l2sq == pytest.approx(GAUSS_L2SQ, rel=1e-9)
    assert m.l4_4 == pytest.approx(GAUSS_L4_4, rel=1e-9)
    assert m.linf_sq == GAUSS_LINF
    assert m.mu1 == pytest.approx(
        math.sqrt(BAND.width) * math.sqrt(GAUSS_L4_4) / GAUSS_L2SQ, rel=1e-9)
    assert m.mu2 == pytest.approx(
        BAND.width * GAUSS_LINF / GAUSS_L2SQ, rel=1e-9)
    # the published working values for this pulse
    assert abs(m.l2sq - TWO_PI) <= 1.4e-4
    assert 1.0 < m.mu1 <= 1.6
    assert m.mu2 <= 3.4
    assert m.eta(1.0) == pytest.approx(erf(3.0), abs=1e-9)
    assert m.eta(2.5) == pytest.approx(2.5 * m.l2sq / TWO_PI, rel=1e-15)


def test_gaussian_metrics_match_adaptive_quadrature():
    # independent integrator, independent code path
    mag2 = lambda w: GAUSS_PEAK ** 2 * math.exp(-(A * w) ** 2)
    l2sq, _ = quad(mag2, -BAND.omega_max, BAND.omega_max, epsabs=1e-13)
    l4_4, _ = quad(lambda w: mag2(w) ** 2, -BAND.omega_max, BAND.omega_max,
                   epsabs=1e-13)
    m = compute_metrics(GAUSS, BAND)
    assert m.l2sq == pytest.approx(l2sq, rel=1e-10)
    assert m.l4_4 == pytest.approx(l4_4, rel=1e-10)


def test_flat_full_band_metrics_are_unity():
    m = compute_metrics(make_flat_band(1.0, BAND), BAND)
    assert m.mu1 == pytest.approx(1.0, abs=1e-9)
    assert m.mu2 == pytest.approx(1.0, abs=1e-9)
    assert m.l2sq == BAND.width


def test_flat_quarter_band_metrics():
    # support covering 1/4 of the band: mu1 = sqrt(4) = 2, mu2 = 4
    sub = make_flat_band(2.0, BAND, support=(-150.0, 150.0))
    m = compute_metrics(sub, BAND)
    assert m.mu1 == pytest.approx(2.0, abs=1e-9)
    assert m.mu2 == pytest.approx(4.0, abs=1e-9)
    assert m.l2sq == 4.0 * 300.0


def test_flat_case_follows_support_symmetry():
    assert make_flat_band(1.0, BAND).case == "real"
    assert make_flat_band(1.0, BAND, support=(-20.0, 20.0)).case == "real"
    assert make_flat_band(1.0, BAND, support=(10.0, 60.0)).case == "complex"


def test_autocorrelation_at_zero_is_energy_over_two_pi():
    for tpl in (GAUSS, make_flat_band(1.0, BAND),
                make_flat_band(1.5, BAND, support=(10.0, 60.0))):
        m = compute_metrics(tpl, BAND)
        r0 = autocorrelation(tpl, BAND, 0.0)
        assert r0.real == pytest.approx(m.l2sq / TWO_PI, rel=1e-12)
        assert abs(r0.imag) <= 1e-12 * r0.real


def test_flat_autocorrelation_matches_exponential_difference():
    # independent closed form: (1/2pi) int_lo^hi e^{iwt} dw
    #   = (e^{i hi t} - e^{i lo t}) / (2 pi i t)
    lo, hi, level = -40.0, 250.0, 1.3
    tpl = make_flat_band(level, BAND, support=(lo, hi))
    taus = np.array([-0.73, -0.2, 0.011, 0.31, 1.7])
    got = autocorrelation(tpl, BAND, taus)
    want = level ** 2 * (np.exp(1j * hi * taus) - np.exp(1j * lo * taus)) \
        / (TWO_PI * 1j * taus)
    assert np.allclose(got, want, rtol=1e-12, atol=0.0)


def test_gaussian_autocorrelation_matches_dense_trapezoid():
    # same integral on an unrelated grid resolution
    w = np.linspace(-BAND.omega_max, BAND.omega_max, 200001)
    mag2 = np.abs(GAUSS.spectrum(w)) ** 2
    for tau in (0.0, 0.003, 0.02, 0.4):
        want = trapezoid(mag2 * np.exp(1j * w * tau), w) / TWO_PI
        got = autocorrelation(GAUSS, BAND, tau)
        # abs floor for deep-tail lags where the integral nearly cancels
        assert got == pytest.approx(want, rel=1e-8, abs=1e-10)


def test_autocorrelation_shapes_and_conjugate_symmetry():
    taus = np.array([[0.0, 0.1], [0.2, 0.3]])
    vals = autocorrelation(GAUSS, BAND, taus)
    assert vals.shape == taus.shape
    assert isinstance(autocorrelation(GAUSS, BAND, 0.1), complex)
    # |s_hat|^2 is real, so R(-tau) = conj(R(tau))
    tpl = make_flat_band(1.0, BAND, support=(10.0, 60.0))
    fwd = autocorrelation(tpl, BAND, np.array([0.1, 0.25]))
    bwd = autocorrelation(tpl, BAND, np.array([-0.1, -0.25]))
    assert np.allclose(bwd, np.conj(fwd), rtol=1e-12)


def test_quadrature_doubling_leaves_metrics_put():
    base = compute_metrics(GAUSS, BAND, QuadratureSpec(nodes=1 << 16))
    fine = compute_metrics(GAUSS, BAND, QuadratureSpec(nodes=1 << 17))
    for name in ("l2sq", "l4_4", "mu1", "mu2"):
        assert getattr(base, name) == pytest.approx(getattr(fine, name),
                                                    rel=1e-8)


def test_gaussian_lobe_profile_near_published_value():
    alpha1 = lobe_profile(GAUSS, BAND, 3.0 * A, scan_limit=1.0)
    assert alpha1 == pytest.approx(0.1054, abs=1e-3)


def test_flat_lobe_profile_is_second_sidelobe():
    # past tau = 4 pi / |Omega| the profile is |sinc| beyond its second
    # zero; a dense scan must land on the known lobe value
    tpl = make_flat_band(1.0, BAND)
    alpha2 = TWO_PI / BAND.omega_max
    alpha1 = lobe_profile(tpl, BAND, alpha2, scan_limit=10 * math.pi / 600.0,
                          scan_points=40001)
    assert alpha1 == pytest.approx(SINC_SECOND_LOBE, abs=1e-6)
    assert alpha1 <= 0.217


def test_lobe_profile_validation():
    with pytest.raises(InvalidParameterError):
        lobe_profile(GAUSS, BAND, 0.0, scan_limit=1.0)
    with pytest.raises(InvalidParameterError):
        lobe_profile(GAUSS, BAND, 0.5, scan_limit=0.5)
    with pytest.raises(InvalidParameterError):
        lobe_profile(GAUSS, BAND, 0.1, scan_limit=1.0, scan_points=1)


def test_custom_template_interpolates_and_infers_case():
    tpl = make_custom_template([-2.0, 0.0, 2.0], [0.0, 1.0, 0.0])
    assert tpl.case == "real"
    assert float(tpl.spectrum(1.0)) == 0.5
    assert float(tpl.spectrum(5.0)) == 0.0
    skew = make_custom_template([-2.0, 0.0, 2.0], [0.0, 1.0, 0.5])
    assert skew.case == "complex"


def test_custom_template_validation():
    with pytest.raises(InvalidParameterError):
        make_custom_template([0.0], [1.0])
    with pytest.raises(InvalidParameterError):
        make_custom_template([0.0, 0.0], [1.0, 1.0])
    with pytest.raises(InvalidParameterError):
        make_custom_template([0.0, 1.0], [1.0, -1.0])
    with pytest.raises(InvalidParameterError):
        make_custom_template([0.0, 1.0], [1.0, math.nan])


def test_zero_energy_rejected():
    dead = make_custom_template([-1.0, 1.0], [0.0, 0.0])
    with pytest.raises(ZeroEnergyError):
        compute_metrics(dead, BAND)
    outside = make_flat_band(1.0, FrequencyBand(100.0), support=(50.0, 80.0))
    with pytest.raises(ZeroEnergyError):
        compute_metrics(outside, FrequencyBand(40.0))


def test_constructor_validation():
    with pytest.raises(InvalidParameterError):
        make_gaussian_pulse(0.0)
    with pytest.raises(InvalidParameterError):
        make_flat_band(0.0, BAND)
    with pytest.raises(InvalidParameterError):
        make_flat_band(1.0, BAND, support=(-700.0, 0.0))
    with pytest.raises(InvalidParameterError):
        make_flat_band(1.0, BAND, support=(10.0, 10.0))
    with pytest.raises(InvalidParameterError):
        FrequencyBand(0.0)
    with pytest.raises(InvalidParameterError):
        SearchWindow(1.0, 1.0)
    with pytest.raises(InvalidParameterError):
        QuadratureSpec(nodes=1)


def test_template_from_json_round_trip():
    tpl = template_from_json({"kind": "gaussian", "a": A})
    assert tpl.params == {"a": A}
    tpl = template_from_json(json.dumps(
        {"kind": "flat", "level": 2.0, "support": [10, 60]}), BAND)
    assert (tpl.params["lo"], tpl.params["hi"]) == (10.0, 60.0)
    tpl = template_from_json(
        {"kind": "custom", "omega": [-1, 0, 1], "mag": [0, 1, 0]})
    assert tpl.kind == "custom"


def test_template_from_json_validation():
    with pytest.raises(InvalidParameterError):
        template_from_json({"kind": "gaussian"})
    with pytest.raises(InvalidParameterError):
        template_from_json({"kind": "flat", "level": 1.0})  # no band
    with pytest.raises(InvalidParameterError):
        template_from_json({"kind": "custom", "omega": [0, 1]})
    with pytest.raises(InvalidParameterError):
        template_from_json({"kind": "boxcar"})


def _random_custom(seed):
    gen = np.random.default_rng(seed)
    n = int(gen.integers(2, 12))
    knots = np.sort(gen.uniform(-500.0, 500.0, size=n))
    knots += np.arange(n) * 1e-6  # keep strictly increasing
    mags = gen.uniform(0.0, 3.0, size=n)
    mags[int(gen.integers(0, n))] += 0.5  # at least one positive value
    return make_custom_template(knots, mags)


@given(st.integers(0, 10 ** 6))
def test_metric_chain_holds_for_arbitrary_templates(seed):
    # 1 <= mu1^2 <= mu2 is a weighted Cauchy-Schwarz chain and must
    # survive quadrature up to rounding
    m = compute_metrics(_random_custom(seed), BAND,
                        QuadratureSpec(nodes=4096))
    assert m.mu1 ** 2 >= 1.0 - 1e-9
    assert m.mu1 ** 2 <= m.mu2 * (1.0 + 1e-9)


@given(st.integers(0, 10 ** 6))
def test_autocorrelation_peaks_at_zero(seed):
    tpl = _random_custom(seed)
    quad_spec = QuadratureSpec(nodes=4096)
    taus = np.linspace(-1.0, 1.0, 1000)
    vals = autocorrelation(tpl, BAND, taus, quad_spec)
    r0 = autocorrelation(tpl, BAND, 0.0, quad_spec).real
    assert float(np.max(np.abs(vals))) <= r0 * (1.0 + 1e-12)


@given(st.floats(1e-4, 1.0), st.floats(0.1, 1000.0))
def test_gaussian_metrics_scale_free(a, omega_max):
    # metrics depend only on a * omega_max, so rescaling both is a no-op
    band = FrequencyBand(omega_max)
    m1 = compute_metrics(make_gaussian_pulse(a), band)
    m2 = compute_metrics(make_gaussian_pulse(a * 7.0),
                         FrequencyBand(omega_max / 7.0))
    assert m1.mu1 == pytest.approx(m2.mu1, rel=1e-9)
    assert m1.mu2 == pytest.approx(m2.mu2, rel=1e-9)
