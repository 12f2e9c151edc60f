"""Random sample locations and synthetic observations.

Covers both measurement models: random frequency samples of a delayed
pulse, and random time samples of a pure tone. All randomness flows
through RngSpec so that any trial can be replayed in isolation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .errors import InvalidParameterError
from .templates import FrequencyBand, SearchWindow, Template

# purpose codes for the per-trial substreams; locations and noise never
# share bits, so switching noise on cannot shift the locations a trial sees
FREQ_STREAM = 0
NOISE_STREAM = 1
TIME_STREAM = 2
TRUTH_STREAM = 3


@dataclass(frozen=True)
class RngSpec:
    """Seed recipe for one trial.

    Identical (master_seed, stream_index) pairs give bit-identical draws,
    and distinct stream indices give independent streams, so parallel
    trials are reproducible in any execution order.
    """

    master_seed: int
    stream_index: int = 0

    def generator(self, purpose: int = 0) -> np.random.Generator:
        seq = np.random.SeedSequence(self.master_seed,
                                     spawn_key=(self.stream_index, purpose))
        return np.random.default_rng(seq)


@dataclass(frozen=True)
class DelayScene:
    """Ground truth for a delay experiment: y[k] = A e^{-i w_k tau0} s_hat(w_k) + n_k."""

    amplitude: complex
    tau0: float
    sigma_n: float = 0.0

    def __post_init__(self):
        if self.sigma_n < 0.0:
            raise InvalidParameterError("sigma_n must be nonnegative")
        object.__setattr__(self, "amplitude", complex(self.amplitude))


@dataclass(frozen=True, eq=False)
class DelayMeasurements:
    """Frequency samples and observations for the delay problem."""

    freqs: np.ndarray
    y: np.ndarray
    band: FrequencyBand
    m: int
    seed: Optional[RngSpec] = None

    def __post_init__(self):
        if len(self.freqs) != len(self.y) or self.m != len(self.y) or self.m < 1:
            raise InvalidParameterError("freqs and y must share a positive length m")

    def to_json(self) -> dict:
        return {
            "freqs": [float(w) for w in self.freqs],
            "y": _interleave(self.y),
            "omega_max": self.band.omega_max,
            "m": self.m,
            "seed": _seed_doc(self.seed),
        }

    @classmethod
    def from_json(cls, doc: Union[str, dict]) -> "DelayMeasurements":
        if isinstance(doc, str):
            doc = json.loads(doc)
        y = _deinterleave(doc["y"])
        return cls(freqs=np.asarray(doc["freqs"], dtype=float), y=y,
                   band=FrequencyBand(float(doc["omega_max"])),
                   m=int(doc["m"]), seed=_seed_from_doc(doc.get("seed")))


@dataclass(frozen=True, eq=False)
class ToneMeasurements:
    """Time samples and observations for the tone problem."""

    times: np.ndarray
    y: np.ndarray
    window: SearchWindow
    omega0: Optional[float] = None
    seed: Optional[RngSpec] = None

    def __post_init__(self):
        if len(self.times) != len(self.y) or len(self.y) < 1:
            raise InvalidParameterError("times and y must share a positive length")

    @property
    def m(self) -> int:
        return len(self.times)

    def to_json(self) -> dict:
        return {
            "times": [float(t) for t in self.times],
            "y": _interleave(self.y),
            "window": [self.window.tau_min, self.window.tau_max],
            "omega0": self.omega0,
            "seed": _seed_doc(self.seed),
        }

    @classmethod
    def from_json(cls, doc: Union[str, dict]) -> "ToneMeasurements":
        if isinstance(doc, str):
            doc = json.loads(doc)
        lo, hi = doc["window"]
        om0 = doc.get("omega0")
        return cls(times=np.asarray(doc["times"], dtype=float),
                   y=_deinterleave(doc["y"]),
                   window=SearchWindow(float(lo), float(hi)),
                   omega0=None if om0 is None else float(om0),
                   seed=_seed_from_doc(doc.get("seed")))


def _interleave(y: np.ndarray) -> list:
    out = np.empty(2 * len(y), dtype=float)
    out[0::2] = np.real(y)
    out[1::2] = np.imag(y)
    return out.tolist()


def _deinterleave(flat) -> np.ndarray:
    arr = np.asarray(flat, dtype=float)
    return arr[0::2] + 1j * arr[1::2]


def _seed_doc(seed: Optional[RngSpec]):
    if seed is None:
        return None
    return {"master_seed": seed.master_seed, "stream_index": seed.stream_index}


def _seed_from_doc(doc) -> Optional[RngSpec]:
    if doc is None:
        return None
    return RngSpec(int(doc["master_seed"]), int(doc["stream_index"]))


def complex_noise(rng: RngSpec, sigma_n: float, m: int,
                  purpose: int = NOISE_STREAM) -> np.ndarray:
    """Circular complex Gaussian noise with total variance sigma_n^2 per sample.

    Real and imaginary parts are independent N(0, sigma_n^2 / 2), drawn in
    that documented order.
    """
    gen = rng.generator(purpose)
    re = gen.standard_normal(m)
    im = gen.standard_normal(m)
    return (sigma_n / np.sqrt(2.0)) * (re + 1j * im)


def draw_frequencies(band: FrequencyBand, m: int, rng: RngSpec) -> np.ndarray:
    """m i.i.d. Uniform(-omega_max, omega_max) sample frequencies."""
    if m < 1:
        raise InvalidParameterError("need at least one sample")
    gen = rng.generator(FREQ_STREAM)
    return gen.uniform(-band.omega_max, band.omega_max, size=m)


def synthesize_delay_measurements(template: Template, scene: DelayScene,
                                  freqs: np.ndarray, band: FrequencyBand,
                                  rng: RngSpec) -> DelayMeasurements:
    """Observations y[k] = A e^{-i w_k tau0} s_hat(w_k) + n_k.

    Noise is complex circular Gaussian regardless of the template case;
    the real-case reduction happens inside the estimator, not here.
    sigma_n = 0 yields the exact noiseless values.
    """
    if template.case == "real" and scene.amplitude.imag != 0.0:
        raise InvalidParameterError("real-case template requires a real amplitude")
    freqs = np.asarray(freqs, dtype=float)
    y = scene.amplitude * np.exp(-1j * freqs * scene.tau0) * template.spectrum(freqs)
    if scene.sigma_n > 0.0:
        y = y + complex_noise(rng, scene.sigma_n, len(freqs))
    return DelayMeasurements(freqs=freqs, y=y, band=band, m=len(freqs), seed=rng)


def draw_times(window: SearchWindow, m: int, rng: RngSpec) -> np.ndarray:
    """m i.i.d. Uniform(tau_min, tau_max) sample times."""
    if m < 1:
        raise InvalidParameterError("need at least one sample")
    gen = rng.generator(TIME_STREAM)
    return gen.uniform(window.tau_min, window.tau_max, size=m)


def synthesize_tone_measurements(omega0: float, amp: complex, sigma_n: float,
                                 times: np.ndarray, window: SearchWindow,
                                 rng: RngSpec) -> ToneMeasurements:
    """Observations y[k] = A e^{i omega0 t_k} + n_k at the given times."""
    if sigma_n < 0.0:
        raise InvalidParameterError("sigma_n must be nonnegative")
    times = np.asarray(times, dtype=float)
    y = complex(amp) * np.exp(1j * omega0 * times)
    if sigma_n > 0.0:
        y = y + complex_noise(rng, sigma_n, len(times))
    return ToneMeasurements(times=times, y=y, window=window,
                            omega0=float(omega0), seed=rng)
