"""Closed-form performance guarantees for the correlation estimators.

Every quantity here is exact arithmetic on the problem configuration; no
simulation happens in this module. The harness uses these values as the
oracle side of its Monte Carlo checks. Constants come from the
concentration analysis behind the estimator and are frozen at the values
that analysis produces; they carry a revision tag so emitted artifacts can
state which set they used.

Notation in the docstrings: m is the sample count, delta the failure
probability, mu1/mu2 the spectral concentration metrics, eta the peak of
the estimator mean |A| ||s_hat||_2^2 / (2 pi), and P = |Omega| |T| the
band-times-window product. Every guarantee requires P >= 3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .errors import InvalidParameterError
from .templates import TWO_PI, FrequencyBand, SearchWindow, SpectralMetrics

__all__ = [
    "Constants",
    "DEFAULT_CONSTANTS",
    "ProblemConfig",
    "TONE_SIDELOBE",
    "TONE_MAINLOBE",
    "expected_sup_bound",
    "tail_threshold_U",
    "noise_expected_sup_bound",
    "noise_tail_threshold",
    "min_samples_noiseless",
    "min_samples_noisy",
    "tone_min_samples",
    "tone_min_samples_noiseless",
    "breakdown_sigma",
    "pointwise_bounds",
    "bound_report",
]

# lobe constants of the tone autocorrelation 2 pi |T| sinc(|T| w / 2):
# the main lobe stays above 0.636 of the peak within pi/|T|, and every
# sidelobe past 2 pi / |T| stays below 0.218 of the peak
TONE_MAINLOBE = 0.636
TONE_SIDELOBE = 0.218

_C1 = 18.02
_C4 = 2.25 * math.sqrt(2.0) / math.pi


@dataclass(frozen=True)
class Constants:
    """Universal constants of the guarantees, frozen at their derived values."""

    c1: float = _C1
    c2: float = max(4.0 * _C1 ** 2, 2.0 * _C1)
    c3: float = (1.0 + math.sqrt(3.0)) ** 2
    c4: float = _C4
    c5: float = max(16.0 * _C1 ** 2, 4.0 * _C1, 64.0 * math.pi ** 2 * _C4 ** 2)
    revision: str = "r1"

    def as_dict(self) -> dict:
        return {"c1": self.c1, "c2": self.c2, "c3": self.c3, "c4": self.c4,
                "c5": self.c5, "revision": self.revision}


DEFAULT_CONSTANTS = Constants()


@dataclass(frozen=True)
class ProblemConfig:
    """Everything the bound formulas consume.

    ``m`` may be left None when only the minimum-sample calculators are
    wanted. ``alpha1`` and ``alpha2`` describe the template's lobe
    geometry: |R_ss(tau)| <= alpha1 R_ss(0) whenever |tau| > alpha2.
    ``epsilon`` is the relative peak margin demanded on top of alpha1.
    """

    delta: float
    metrics: SpectralMetrics
    band: FrequencyBand
    window: SearchWindow
    m: Optional[int] = None
    amp: float = 1.0
    sigma_n: float = 0.0
    alpha1: float = 0.0
    alpha2: Optional[float] = None
    epsilon: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise InvalidParameterError("delta must lie in (0, 1)")
        if not 0.0 <= self.alpha1 < 1.0:
            raise InvalidParameterError("alpha1 must lie in [0, 1)")
        if self.epsilon < 0.0:
            raise InvalidParameterError("epsilon must be nonnegative")
        if self.sigma_n < 0.0:
            raise InvalidParameterError("sigma_n must be nonnegative")
        if not self.amp > 0.0:
            raise InvalidParameterError("amplitude magnitude must be positive")
        if self.m is not None and self.m < 1:
            raise InvalidParameterError("m must be a positive count")

    @property
    def product(self) -> float:
        """P = |Omega| |T|."""
        return self.band.width * self.window.length

    @property
    def eta(self) -> float:
        return self.metrics.eta(self.amp)


def _require_product(cfg: ProblemConfig) -> None:
    # the guarantees are only stated for P >= 3; below that their
    # constants are not valid and we refuse rather than extrapolate
    if cfg.product < 3.0:
        raise InvalidParameterError(
            "band-window product |Omega||T| must be at least 3")


def _require_m(cfg: ProblemConfig) -> int:
    if cfg.m is None:
        raise InvalidParameterError("this bound needs the sample count m")
    return cfg.m


class ExpectedSupBound(NamedTuple):
    two_term: float
    simplified: float


class TailThreshold(NamedTuple):
    c1_form: float
    refined: float


class NoiseTail(NamedTuple):
    threshold: float
    activation_ok: bool
    activation_m: float


class MinSamples(NamedTuple):
    m_min: int
    bound: float
    m_min_split: int
    bound_split: float


class NoisyMinSamples(NamedTuple):
    m_min: int
    bound: float
    activation_m: float


class BreakdownSigma(NamedTuple):
    rough: float
    guaranteed: float


class PointwiseBounds(NamedTuple):
    deviation: float
    noise: float


def expected_sup_bound(cfg: ProblemConfig) -> ExpectedSupBound:
    """Bound on E sup |R~_ss(tau) - A R_ss(tau - tau0)| over the window.

    two_term = (eta mu1 / sqrt(m)) (4.25 sqrt(log 2P) + 2.28) and
    simplified = 5.96 (eta mu1 / sqrt(m)) sqrt(log 2P); the two-term form
    is never larger once P >= 3.
    """
    _require_product(cfg)
    m = _require_m(cfg)
    pref = cfg.eta * cfg.metrics.mu1 / math.sqrt(m)
    root = math.sqrt(math.log(2.0 * cfg.product))
    return ExpectedSupBound(two_term=pref * (4.25 * root + 2.28),
                            simplified=5.96 * pref * root)


def tail_threshold_U(cfg: ProblemConfig,
                     constants: Constants = DEFAULT_CONSTANTS) -> TailThreshold:
    """Level U exceeded by sup |R~_ss - A R_ss| with probability < delta.

    Both published forms share the prefactor
    max(eta mu1 / sqrt(m), (eta mu2 / m) sqrt(log(4/delta))):
    c1_form multiplies it by C1 sqrt(log(12 P / delta)), the refined form
    by 15.61 sqrt(log(12 P / delta)) + 4.56. The refined form is the
    tighter of the two on the whole valid domain and is what the
    minimum-sample corollaries build on.
    """
    _require_product(cfg)
    m = _require_m(cfg)
    pref = max(cfg.eta * cfg.metrics.mu1 / math.sqrt(m),
               (cfg.eta * cfg.metrics.mu2 / m) * math.sqrt(math.log(4.0 / cfg.delta)))
    root = math.sqrt(math.log(12.0 * cfg.product / cfg.delta))
    return TailThreshold(c1_form=constants.c1 * pref * root,
                         refined=pref * (15.61 * root + 4.56))


def noise_expected_sup_bound(cfg: ProblemConfig) -> ExpectedSupBound:
    """Bound on E sup |N~(tau)| for the rescaled noise process.

    two_term = sigma_n (sqrt(|Omega|) ||s_hat||_2 / sqrt(m))
    (0.199 sqrt(log P) + 0.166), simplified replaces the parenthesis with
    0.36 sqrt(log P).
    """
    _require_product(cfg)
    m = _require_m(cfg)
    pref = cfg.sigma_n * math.sqrt(cfg.band.width) * cfg.metrics.l2 / math.sqrt(m)
    root = math.sqrt(math.log(cfg.product))
    return ExpectedSupBound(two_term=pref * (0.199 * root + 0.166),
                            simplified=0.36 * pref * root)


def noise_tail_threshold(cfg: ProblemConfig,
                         constants: Constants = DEFAULT_CONSTANTS) -> NoiseTail:
    """Level exceeded by sup |N~| with probability < delta, plus activation.

    threshold = C4 sigma_n (sqrt(|Omega|) ||s_hat||_2 / sqrt(m))
    max(sqrt(log P), sqrt(log(2/delta))). The guarantee activates once
    m >= C3 max(mu1^2, mu2) log(1/delta); the flag reports whether the
    configured m satisfies that, and the caller decides what to do when it
    does not.
    """
    _require_product(cfg)
    m = _require_m(cfg)
    pref = cfg.sigma_n * math.sqrt(cfg.band.width) * cfg.metrics.l2 / math.sqrt(m)
    root = max(math.sqrt(math.log(cfg.product)),
               math.sqrt(math.log(2.0 / cfg.delta)))
    activation_m = constants.c3 * max(cfg.metrics.mu1 ** 2,
                                      cfg.metrics.mu2) * math.log(1.0 / cfg.delta)
    return NoiseTail(threshold=constants.c4 * pref * root,
                     activation_ok=m >= activation_m,
                     activation_m=activation_m)


def _strict_count(bound: float) -> int:
    # smallest integer strictly exceeding the bound
    return int(math.floor(bound)) + 1


def min_samples_noiseless(cfg: ProblemConfig,
                          constants: Constants = DEFAULT_CONSTANTS) -> MinSamples:
    """Samples guaranteeing a peak margin without noise.

    Solves m > C2 max(log(12P/delta) / (1-alpha1-epsilon)^2 mu1^2,
    sqrt(log(4/delta) log(12P/delta)) / (1-alpha1-epsilon) mu2). The split
    variant replaces the shared C2 with 4 C1^2 on the first term and 2 C1
    on the second, which is never weaker.
    """
    _require_product(cfg)
    gap = 1.0 - cfg.alpha1 - cfg.epsilon
    if gap <= 0.0:
        raise InvalidParameterError("epsilon must stay below 1 - alpha1")
    big_log = math.log(12.0 * cfg.product / cfg.delta)
    t1 = big_log / gap ** 2 * cfg.metrics.mu1 ** 2
    t2 = math.sqrt(math.log(4.0 / cfg.delta) * big_log) / gap * cfg.metrics.mu2
    bound = constants.c2 * max(t1, t2)
    bound_split = max(4.0 * constants.c1 ** 2 * t1, 2.0 * constants.c1 * t2)
    return MinSamples(m_min=_strict_count(bound), bound=bound,
                      m_min_split=_strict_count(bound_split),
                      bound_split=bound_split)


def min_samples_noisy(cfg: ProblemConfig,
                      constants: Constants = DEFAULT_CONSTANTS) -> NoisyMinSamples:
    """Samples guaranteeing the noisy peak stays within alpha2 of the truth.

    Solves m > C5 max of three terms: the two noiseless ones at epsilon = 0
    and a noise term max(log P, log(2/delta)) / (1-alpha1)^2 times
    sigma_n^2 |Omega| / (|A|^2 ||s_hat||_2^2). The returned count also
    satisfies the activation condition m >= C3 max(mu1^2, mu2)
    log(1/delta).
    """
    _require_product(cfg)
    gap = 1.0 - cfg.alpha1
    big_log = math.log(12.0 * cfg.product / cfg.delta)
    t1 = big_log / gap ** 2 * cfg.metrics.mu1 ** 2
    t2 = math.sqrt(math.log(4.0 / cfg.delta) * big_log) / gap * cfg.metrics.mu2
    noise_factor = (cfg.sigma_n ** 2 * cfg.band.width
                    / (cfg.amp ** 2 * cfg.metrics.l2sq))
    t3 = (max(math.log(cfg.product), math.log(2.0 / cfg.delta))
          / gap ** 2 * noise_factor)
    bound = constants.c5 * max(t1, t2, t3)
    activation_m = constants.c3 * max(cfg.metrics.mu1 ** 2,
                                      cfg.metrics.mu2) * math.log(1.0 / cfg.delta)
    m_min = max(_strict_count(bound), int(math.ceil(activation_m)))
    return NoisyMinSamples(m_min=m_min, bound=bound, activation_m=activation_m)


def _tone_dual_config(band: FrequencyBand, window: SearchWindow, delta: float,
                      amp: float, sigma_n: float, epsilon: float) -> ProblemConfig:
    """Tone problem recast with time and frequency roles exchanged.

    The effective template is flat over the window, so mu1 = mu2 = 1, its
    energy equals |T|, and the sidelobe constants of the sinc
    autocorrelation fix alpha1 = 0.218 past alpha2 = 2 pi / |T|. Note
    the band-window product is unchanged by the exchange.
    """
    metrics = SpectralMetrics(l2sq=window.length, l4_4=window.length,
                              linf_sq=1.0, mu1=1.0, mu2=1.0)
    return ProblemConfig(delta=delta, metrics=metrics,
                         band=FrequencyBand(window.length / 2.0),
                         window=SearchWindow(0.0, band.width),
                         amp=amp, sigma_n=sigma_n,
                         alpha1=TONE_SIDELOBE,
                         alpha2=TWO_PI / window.length,
                         epsilon=epsilon)


def tone_min_samples(band: FrequencyBand, window: SearchWindow, delta: float,
                     amp: float, sigma_n: float,
                     constants: Constants = DEFAULT_CONSTANTS) -> NoisyMinSamples:
    """Samples for reliable noisy tone localization to within 2 pi / |T|.

    Delegates to min_samples_noisy on the role-exchanged configuration;
    with mu1 = mu2 = 1 the noise term reduces to sigma_n^2 / |A|^2 and the
    activation condition to m >= C3 log(1/delta).
    """
    cfg = _tone_dual_config(band, window, delta, amp, sigma_n, epsilon=0.0)
    return min_samples_noisy(cfg, constants)


def tone_min_samples_noiseless(band: FrequencyBand, window: SearchWindow,
                               delta: float,
                               constants: Constants = DEFAULT_CONSTANTS) -> MinSamples:
    """Samples for noiseless tone localization to within 2 pi / |T|.

    Uses the main-lobe margin: the grid point nearest the tone keeps at
    least 0.636 of the peak, sidelobes past one spacing carry at most
    0.218 of it, so the required relative gap is epsilon =
    1 - 0.636 = 0.364 on top of alpha1 = 0.218.
    """
    cfg = _tone_dual_config(band, window, delta, amp=1.0, sigma_n=0.0,
                            epsilon=1.0 - TONE_MAINLOBE)
    return min_samples_noiseless(cfg, constants)


def breakdown_sigma(cfg: ProblemConfig) -> BreakdownSigma:
    """Noise scales where estimation degrades.

    rough = |A| ||s_hat||_2 sqrt(m / |Omega|) is where operation falls
    apart completely; guaranteed = rough / sqrt(log P) is the level up to
    which the recovery guarantee actively holds.
    """
    m = _require_m(cfg)
    rough = cfg.amp * cfg.metrics.l2 * math.sqrt(m / cfg.band.width)
    guaranteed = cfg.amp * cfg.metrics.l2 * math.sqrt(
        m / (cfg.band.width * math.log(cfg.product)))
    return BreakdownSigma(rough=rough, guaranteed=guaranteed)


def pointwise_bounds(cfg: ProblemConfig) -> PointwiseBounds:
    """Per-point expectations: E|R~ - A R_ss| and E|N~| at any fixed lag.

    deviation = eta mu1 / sqrt(m); noise = sigma_n sqrt(|Omega|)
    ||s_hat||_2 / (2 pi sqrt(m)). Both are what the uniform bounds reduce
    to before paying their sqrt(log) factors.
    """
    m = _require_m(cfg)
    deviation = cfg.eta * cfg.metrics.mu1 / math.sqrt(m)
    noise = (cfg.sigma_n * math.sqrt(cfg.band.width) * cfg.metrics.l2
             / (TWO_PI * math.sqrt(m)))
    return PointwiseBounds(deviation=deviation, noise=noise)


def bound_report(cfg: ProblemConfig,
                 constants: Constants = DEFAULT_CONSTANTS) -> dict:
    """All quantities computable from the configuration, as plain data."""
    report: dict = {"constants": constants.as_dict(),
                    "config": {
                        "m": cfg.m, "delta": cfg.delta, "amp": cfg.amp,
                        "sigma_n": cfg.sigma_n, "alpha1": cfg.alpha1,
                        "alpha2": cfg.alpha2, "epsilon": cfg.epsilon,
                        "omega_max": cfg.band.omega_max,
                        "window": [cfg.window.tau_min, cfg.window.tau_max],
                        "mu1": cfg.metrics.mu1, "mu2": cfg.metrics.mu2,
                        "l2sq": cfg.metrics.l2sq, "eta": cfg.eta,
                    }}
    if cfg.m is not None:
        es = expected_sup_bound(cfg)
        report["expected_sup"] = {"two_term": es.two_term,
                                  "simplified": es.simplified}
        tt = tail_threshold_U(cfg, constants)
        report["tail_threshold"] = {"c1_form": tt.c1_form,
                                    "refined": tt.refined}
        ns = noise_expected_sup_bound(cfg)
        report["noise_expected_sup"] = {"two_term": ns.two_term,
                                        "simplified": ns.simplified}
        nt = noise_tail_threshold(cfg, constants)
        report["noise_tail"] = {"threshold": nt.threshold,
                                "activation_ok": nt.activation_ok,
                                "activation_m": nt.activation_m}
        bd = breakdown_sigma(cfg)
        report["breakdown_sigma"] = {"rough": bd.rough,
                                     "guaranteed": bd.guaranteed}
        pw = pointwise_bounds(cfg)
        report["pointwise"] = {"deviation": pw.deviation, "noise": pw.noise}
    ms = min_samples_noiseless(cfg, constants)
    report["min_samples_noiseless"] = {
        "m_min": ms.m_min, "bound": ms.bound,
        "m_min_split": ms.m_min_split, "bound_split": ms.bound_split}
    mn = min_samples_noisy(cfg, constants)
    report["min_samples_noisy"] = {"m_min": mn.m_min, "bound": mn.bound,
                                   "activation_m": mn.activation_m}
    tn = tone_min_samples(cfg.band, cfg.window, cfg.delta, cfg.amp,
                          cfg.sigma_n, constants)
    report["tone_min_samples"] = {"m_min": tn.m_min, "bound": tn.bound,
                                  "activation_m": tn.activation_m}
    tnl = tone_min_samples_noiseless(cfg.band, cfg.window, cfg.delta, constants)
    report["tone_min_samples_noiseless"] = {
        "m_min": tnl.m_min, "bound": tnl.bound,
        "m_min_split": tnl.m_min_split, "bound_split": tnl.bound_split}
    return report
