"""Pure-tone frequency estimation from random time samples.

This is the dual of the delay problem: observations y[k] = A e^{i w0 t_k}
are correlated against test tones psi_w[k] = e^{i w t_k}, and the scaled
process (2 pi |T| / m) X(w) estimates A R(w - w0) where
R(w) = 2 pi |T| sinc(|T| w / 2). The grid search runs at spacing
2 pi / |T|, then a handful of golden-section ascents exploit concavity of
|R~|^2 near the peak to refine the winner. A chirp with known rate turns
into this problem after multiplication by the conjugate reference chirp.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import InvalidParameterError, NumericError
from .sampling import NOISE_STREAM, RngSpec, ToneMeasurements, complex_noise
from .templates import TWO_PI, FrequencyBand, SearchWindow

_CHUNK_ELEMS = 1 << 22
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True, eq=False)
class ToneTrace:
    """Scaled tone correlation on a frequency grid; scale = 2 pi |T| / m."""

    omegas: np.ndarray
    values: np.ndarray
    scale: float

    def __post_init__(self):
        if len(self.omegas) != len(self.values) or len(self.omegas) < 2:
            raise InvalidParameterError("trace needs matching grids of length >= 2")
        if np.any(np.diff(self.omegas) <= 0):
            raise InvalidParameterError("frequency grid must be strictly increasing")

    def magnitudes(self) -> np.ndarray:
        return np.abs(self.values)

    def to_csv(self, path) -> None:
        from .core import _write_trace_csv
        _write_trace_csv(path, "omega", self.omegas, self.values)


@dataclass(frozen=True)
class ToneEstimate:
    """Refined frequency estimate with its search provenance.

    ``grid_point`` is the pre-refinement grid winner and ``ascent_starts``
    the start frequencies the local maximizations ran from.
    """

    omega_hat: float
    a_hat: complex
    grid_point: float
    ascent_starts: Tuple[float, ...]


@dataclass(frozen=True)
class ChirpSpec:
    """Linear chirp A exp(j (w_c (t - t0) + (alpha/2)(t - t0)^2)).

    ``t0`` is the time of arrival; it is the unknown in experiments and is
    carried here as ground truth. alpha = 0 would make t0 unidentifiable.
    """

    omega_c: float
    alpha: float
    t0: float
    amp: complex = 1.0 + 0.0j

    def __post_init__(self):
        if self.alpha == 0.0:
            raise InvalidParameterError("chirp rate alpha must be nonzero")
        object.__setattr__(self, "amp", complex(self.amp))


def tone_process(meas: ToneMeasurements, omega):
    """Correlation X(w) = <y, psi_w> = sum_k y[k] e^{-i w t_k}.

    Args:
        meas: tone measurements.
        omega: scalar or array of probe frequencies.

    Returns:
        Complex correlation value(s) with the shape of ``omega``.
    """
    omegas = np.asarray(omega, dtype=float)
    scalar = omegas.ndim == 0
    flat = np.atleast_1d(omegas).ravel()
    out = np.empty(flat.size, dtype=complex)
    step = max(1, _CHUNK_ELEMS // max(1, meas.m))
    for i in range(0, flat.size, step):
        block = flat[i:i + step]
        out[i:i + step] = np.exp(-1j * block[:, None] * meas.times[None, :]) @ meas.y
    if scalar:
        return complex(out[0])
    return out.reshape(np.atleast_1d(omegas).shape)


def tone_acf_estimate(meas: ToneMeasurements, grid) -> ToneTrace:
    """Scaled process (2 pi |T| / m) X(w) on a frequency grid.

    Unbiased for A R(w - w0) when the sampling window is centered at zero;
    the magnitude statements hold for any window placement.
    """
    grid = np.asarray(grid, dtype=float)
    scale = TWO_PI * meas.window.length / meas.m
    return ToneTrace(omegas=grid, values=scale * tone_process(meas, grid),
                     scale=scale)


def tone_autocorrelation(omega, window: SearchWindow):
    """Ideal tone autocorrelation R(w) = 2 pi |T| sinc(|T| w / 2)."""
    w = np.asarray(omega, dtype=float)
    out = TWO_PI * window.length * np.sinc(window.length * w / TWO_PI)
    if w.ndim == 0:
        return float(out)
    return out


def nyquist_grid(band: FrequencyBand, window: SearchWindow) -> np.ndarray:
    """Frequency grid at spacing 2 pi / |T| covering the band.

    Starts at -omega_max and appends omega_max when the last regular step
    falls short, so both band edges are always searchable and every
    frequency in the band is within half a spacing of some grid point.
    """
    spacing = TWO_PI / window.length
    n = int(math.floor(band.width / spacing + 1e-9))
    grid = -band.omega_max + spacing * np.arange(n + 1)
    if grid[-1] > band.omega_max:
        grid[-1] = band.omega_max
    elif grid[-1] < band.omega_max - 1e-9 * spacing:
        grid = np.append(grid, band.omega_max)
    return grid


def _golden_bracket(objective, lo: float, hi: float, tol: float):
    """Golden-section maximization on [lo, hi]; returns the final bracket."""
    a, b = lo, hi
    if b <= a:
        return a, b
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc = objective(c)
    fd = objective(d)
    if not (math.isfinite(fc) and math.isfinite(fd)):
        raise NumericError("objective produced a non-finite value")
    while (b - a) > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = objective(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = objective(d)
        if not (math.isfinite(fc) and math.isfinite(fd)):
            raise NumericError("objective produced a non-finite value")
    return a, b


def _refine_interval(value, slope, lo: float, hi: float, tol: float,
                     spacing: float) -> float:
    """Maximize on [lo, hi]: golden section, then derivative bisection.

    Value comparisons lose resolution once the interval is within about
    sqrt(machine eps) of a flat top, so the golden-section stage stops at
    a coarse width and the remaining stretch bisects the sign of the
    objective derivative, which stays sharp down to machine precision.
    The returned point is the midpoint of the final bracket.
    """
    coarse = max(tol, 1e-5 * spacing)
    a, b = _golden_bracket(value, lo, hi, coarse)
    if (b - a) <= tol:
        return 0.5 * (a + b)
    # widen by one bracket width against value-noise drift, staying inside
    pad = b - a
    a, b = max(lo, a - pad), min(hi, b + pad)
    ga = slope(a)
    gb = slope(b)
    if not (math.isfinite(ga) and math.isfinite(gb)):
        raise NumericError("objective slope produced a non-finite value")
    if ga <= 0.0:  # objective already descending: peak at the left edge
        return a
    if gb >= 0.0:  # still ascending: peak at the right edge
        return b
    while (b - a) > tol:
        mid = 0.5 * (a + b)
        gm = slope(mid)
        if gm > 0.0:
            a = mid
        elif gm < 0.0:
            b = mid
        else:
            return mid
    return 0.5 * (a + b)


def _tone_objective(meas: ToneMeasurements):
    """Value and derivative of the scaled squared correlation magnitude."""
    scale = TWO_PI * meas.window.length / meas.m

    def value(omega: float) -> float:
        x = complex(np.sum(meas.y * np.exp(-1j * omega * meas.times)))
        return (scale * abs(x)) ** 2

    def slope(omega: float) -> float:
        e = np.exp(-1j * omega * meas.times)
        x = complex(np.sum(meas.y * e))
        xp = complex(np.sum(meas.y * (-1j * meas.times) * e))
        return scale ** 2 * 2.0 * (x.conjugate() * xp).real

    return value, slope


def default_tone_tol(window: SearchWindow) -> float:
    """Ascent stop width, a 1e-12 fraction of the grid spacing."""
    return 1e-12 * (TWO_PI / window.length)


def concave_refine(meas: ToneMeasurements, omega_start: float, radius: float,
                   tol: Optional[float] = None) -> float:
    """Local maximization of |R~(w)|^2 around a start frequency.

    |R~|^2 is concave within pi / (2 |T|) of the true tone, so a
    golden-section search over an interval of at most that radius brackets
    the maximizer; a final derivative bisection inside the bracket pins it
    down, and the midpoint is returned once the width drops below ``tol``.

    Args:
        meas: tone measurements.
        omega_start: center of the search interval.
        radius: half-width of the interval; must not exceed pi / (2 |T|).
        tol: stop width, default 1e-12 of the grid spacing.

    Returns:
        The refined frequency.
    """
    max_radius = math.pi / (2.0 * meas.window.length)
    if not 0.0 < radius <= max_radius * (1.0 + 1e-12):
        raise InvalidParameterError("radius must lie in (0, pi / (2 |T|)]")
    if tol is None:
        tol = default_tone_tol(meas.window)
    if not tol > 0.0:
        raise InvalidParameterError("tol must be positive")
    value, slope = _tone_objective(meas)
    return _refine_interval(value, slope, omega_start - radius,
                            omega_start + radius, tol,
                            TWO_PI / meas.window.length)


def estimate_tone(meas: ToneMeasurements, band: FrequencyBand,
                  tol: Optional[float] = None) -> ToneEstimate:
    """Grid search plus four-start local refinement.

    The grid winner w_g is within one spacing 2 pi / |T| of the true tone,
    so the four intervals of radius pi / (2 |T|) centered at
    w_g +- pi / (2 |T|) and w_g +- 3 pi / (2 |T|) tile the region that can
    contain it, and the start nearest the tone sits within the concavity
    radius. Each ascent interval is cropped to the band; among the four
    results the one with the largest objective wins, ties going to the
    smallest frequency. A_hat = X(omega_hat) / m since ||psi_w||^2 = m.
    """
    window = meas.window
    grid = nyquist_grid(band, window)
    trace = tone_acf_estimate(meas, grid)
    gidx = int(np.argmax(trace.magnitudes()))
    omega_g = float(grid[gidx])

    u = math.pi / (2.0 * window.length)
    starts = tuple(omega_g + k * u for k in (-3.0, -1.0, 1.0, 3.0))
    value, slope = _tone_objective(meas)
    if tol is None:
        tol = default_tone_tol(window)

    candidates = []
    for s in starts:
        lo = max(s - u, -band.omega_max)
        hi = min(s + u, band.omega_max)
        if hi < lo:
            continue
        candidates.append(_refine_interval(value, slope, lo, hi, tol,
                                           TWO_PI / window.length))
    candidates.sort()
    scores = [value(w) for w in candidates]
    best = candidates[int(np.argmax(scores))]

    a_hat = complex(tone_process(meas, best)) / meas.m
    return ToneEstimate(omega_hat=float(best), a_hat=a_hat,
                        grid_point=omega_g, ascent_starts=starts)


def synthesize_chirp_samples(chirp: ChirpSpec, times: np.ndarray,
                             sigma_n: float, rng: RngSpec) -> np.ndarray:
    """Chirp observations x(t_k) with the usual complex Gaussian noise."""
    if sigma_n < 0.0:
        raise InvalidParameterError("sigma_n must be nonnegative")
    t = np.asarray(times, dtype=float)
    dt = t - chirp.t0
    x = chirp.amp * np.exp(1j * (chirp.omega_c * dt + 0.5 * chirp.alpha * dt ** 2))
    if sigma_n > 0.0:
        x = x + complex_noise(rng, sigma_n, len(t), purpose=NOISE_STREAM)
    return x


def dechirp(times: np.ndarray, samples: np.ndarray, chirp: ChirpSpec,
            window: SearchWindow) -> ToneMeasurements:
    """Multiply by the conjugate reference chirp, leaving a pure tone.

    x(t) exp(-j (w_c t + (alpha/2) t^2)) = A~ e^{-j alpha t0 t} with
    A~ = A e^{j ((alpha/2) t0^2 - w_c t0)}, so the residual tone frequency
    is -alpha t0 under this package's e^{+j w t} tone convention.
    """
    t = np.asarray(times, dtype=float)
    ref = np.exp(-1j * (chirp.omega_c * t + 0.5 * chirp.alpha * t ** 2))
    return ToneMeasurements(times=t, y=np.asarray(samples) * ref,
                            window=window,
                            omega0=-chirp.alpha * chirp.t0, seed=None)


def estimate_chirp_toa(times: np.ndarray, samples: np.ndarray, omega_c: float,
                       alpha: float, band: FrequencyBand,
                       window: SearchWindow,
                       tol: Optional[float] = None) -> float:
    """Time of arrival of a chirp with known starting frequency and rate.

    Dechirps, estimates the residual tone, and maps it back through
    t0_hat = -omega_hat / alpha. The band must cover the possible
    residual frequencies -alpha t0.
    """
    if alpha == 0.0:
        raise InvalidParameterError("chirp rate alpha must be nonzero")
    t = np.asarray(times, dtype=float)
    ref = np.exp(-1j * (omega_c * t + 0.5 * alpha * t ** 2))
    meas = ToneMeasurements(times=t, y=np.asarray(samples) * ref,
                            window=window, omega0=None, seed=None)
    est = estimate_tone(meas, band, tol=tol)
    return -est.omega_hat / alpha
