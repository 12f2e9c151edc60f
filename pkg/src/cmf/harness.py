"""Monte Carlo experiment runners and their CSV/JSON artifacts.

Every runner is deterministic given the config: trial i of block b draws
from the stream ``b * trials + i`` of the master seed, aggregation folds
in trial order, and CSV cells are written with ``repr`` so reruns are
byte-identical regardless of how trials would be scheduled. A row is
replayed in isolation from the master seed in the run manifest plus the
block/trial indices carried on the row.

Artifact layout per experiment kind (all under the chosen output
directory, alongside ``run_manifest.json``):

* ``noiseless_demo``: ``demo_trace_m{m}.csv`` for the first trial of each
  m, ``demo_truth.csv``, ``demo_estimates.csv``
* ``noise_sweep``: ``sweep.csv``, ``sweep_summary.csv``
* ``bound_check``: ``bound_check.csv``, ``bound_check_summary.csv`` and,
  with noise, ``bound_check_noise.csv`` plus its summary
* ``tone``: ``tone.csv``, ``tone_summary.csv``
* ``chirp``: ``chirp.csv``
* ``nyquist_baseline``: ``baseline.csv``, ``baseline_summary.csv``,
  ``baseline_crossings.csv``

The manifest records the config hash, package version and bound-constant
revision; it carries no timestamps, so it is part of the byte-identical
surface.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import os
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .errors import ConfigError, DegenerateMeasurementError
from .templates import (FrequencyBand, QuadratureSpec, SearchWindow,
                        Template, TWO_PI, _quad_grid, _trap_weights,
                        compute_metrics, template_from_json)
from .sampling import (DelayMeasurements, DelayScene, RngSpec, TRUTH_STREAM,
                       NOISE_STREAM, complex_noise, draw_frequencies,
                       draw_times, synthesize_delay_measurements,
                       synthesize_tone_measurements)
from .core import (acf_estimate, default_grid_step, deviation_supremum,
                   estimate_delay_amplitude, make_search_grid, mean_curve,
                   _write_trace_csv)
from .tone import ChirpSpec, estimate_chirp_toa, estimate_tone, \
    synthesize_chirp_samples
from .bounds import (DEFAULT_CONSTANTS, ProblemConfig, expected_sup_bound,
                     noise_expected_sup_bound)

__all__ = [
    "ExperimentConfig",
    "SweepRow",
    "SweepResult",
    "DemoResult",
    "BoundCheckResult",
    "ToneResult",
    "ChirpResult",
    "BaselineResult",
    "run_noiseless_demo",
    "run_noise_sweep",
    "run_bound_check",
    "run_tone_experiment",
    "run_chirp_demo",
    "run_nyquist_baseline",
    "run_experiment",
    "EXPERIMENT_KINDS",
]

EXPERIMENT_KINDS = ("noiseless_demo", "noise_sweep", "bound_check",
                    "tone", "chirp", "nyquist_baseline")

_DEFAULT_C_GRID = tuple(i / 20.0 for i in range(21))


def _package_version() -> str:
    try:
        from importlib.metadata import version
        return version("cmf")
    except Exception:
        return "unknown"


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment, fully determined: kind, problem, budget, seed.

    Delay experiments need ``template`` and ``scene``; tone and chirp
    kinds ignore them except for ``scene.amplitude`` / ``scene.sigma_n``.
    ``success_radius`` defaults to 2a for Gaussian templates and to
    ``alpha2`` otherwise; the runner that needs it raises ConfigError
    when neither is available.
    """

    kind: str
    band: FrequencyBand
    window: SearchWindow
    template: Optional[Template] = None
    scene: DelayScene = field(default_factory=lambda: DelayScene(1.0, 0.0))
    m: int = 50
    m_list: Tuple[int, ...] = ()
    trials: int = 1000
    master_seed: int = 0
    c_grid: Tuple[float, ...] = _DEFAULT_C_GRID
    success_radius: Optional[float] = None
    alpha2: Optional[float] = None
    grid_step: Optional[float] = None
    delta: float = 0.05
    omega0: Optional[float] = None
    omega_c: float = 0.0
    chirp_alpha: Optional[float] = None
    t0_range: Tuple[float, float] = (0.0, 1.0)
    sigma_grid: Tuple[float, ...] = ()
    quad_nodes: Optional[int] = None

    def __post_init__(self):
        if self.kind not in EXPERIMENT_KINDS:
            raise ConfigError(f"unknown experiment kind: {self.kind!r}")
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if self.m < 1 or any(m < 1 for m in self.m_list):
            raise ConfigError("sample counts must be positive")
        if self.master_seed < 0:
            raise ConfigError("master_seed must be nonnegative")
        if any(not 0.0 <= c <= 1.0 for c in self.c_grid):
            raise ConfigError("c values must lie in [0, 1]")
        if any(s < 0.0 for s in self.sigma_grid):
            raise ConfigError("sigma values must be nonnegative")
        for name in ("success_radius", "alpha2", "grid_step"):
            v = getattr(self, name)
            if v is not None and not v > 0.0:
                raise ConfigError(f"{name} must be positive when given")
        if not 0.0 < self.delta < 1.0:
            raise ConfigError("delta must lie in (0, 1)")
        if self.t0_range[1] < self.t0_range[0]:
            raise ConfigError("t0_range must be ordered")
        if self.quad_nodes is not None and self.quad_nodes < 2:
            raise ConfigError("quad_nodes must be at least 2")

    @property
    def quad(self) -> Optional[QuadratureSpec]:
        if self.quad_nodes is None:
            return None
        return QuadratureSpec(nodes=self.quad_nodes)

    @staticmethod
    def from_dict(doc: dict) -> "ExperimentConfig":
        """Build from a parsed JSON document; see README for the schema."""
        try:
            band = FrequencyBand(float(doc["band"]["omega_max"]))
            window = SearchWindow(float(doc["window"]["tau_min"]),
                                  float(doc["window"]["tau_max"]))
            template = None
            if "template" in doc:
                template = template_from_json(doc["template"], band)
            sdoc = doc.get("scene", {})
            scene = DelayScene(_as_complex(sdoc.get("amplitude", 1.0)),
                               float(sdoc.get("tau0", 0.0)),
                               float(sdoc.get("sigma_n", 0.0)))
            kwargs = {}
            for name in ("m", "trials", "master_seed", "quad_nodes"):
                if name in doc:
                    kwargs[name] = int(doc[name])
            for name in ("success_radius", "alpha2", "grid_step", "delta",
                         "omega0", "omega_c", "chirp_alpha"):
                if name in doc:
                    v = doc[name]
                    kwargs[name] = None if v is None else float(v)
            for name in ("m_list",):
                if name in doc:
                    kwargs[name] = tuple(int(v) for v in doc[name])
            for name in ("c_grid", "sigma_grid"):
                if name in doc:
                    kwargs[name] = tuple(float(v) for v in doc[name])
            if "t0_range" in doc:
                lo, hi = doc["t0_range"]
                kwargs["t0_range"] = (float(lo), float(hi))
            return ExperimentConfig(kind=doc["kind"], band=band,
                                    window=window, template=template,
                                    scene=scene, **kwargs)
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"bad experiment config: {exc}") from exc

    @staticmethod
    def from_json(text: str) -> "ExperimentConfig":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise ConfigError("config must be a JSON object")
        return ExperimentConfig.from_dict(doc)

    def to_dict(self) -> dict:
        """Canonical document; hashing it identifies the run."""
        doc = {
            "kind": self.kind,
            "band": {"omega_max": self.band.omega_max},
            "window": {"tau_min": self.window.tau_min,
                       "tau_max": self.window.tau_max},
            "scene": {"amplitude": [self.scene.amplitude.real,
                                    self.scene.amplitude.imag],
                      "tau0": self.scene.tau0,
                      "sigma_n": self.scene.sigma_n},
            "m": self.m,
            "m_list": list(self.m_list),
            "trials": self.trials,
            "master_seed": self.master_seed,
            "c_grid": list(self.c_grid),
            "success_radius": self.success_radius,
            "alpha2": self.alpha2,
            "grid_step": self.grid_step,
            "delta": self.delta,
            "omega0": self.omega0,
            "omega_c": self.omega_c,
            "chirp_alpha": self.chirp_alpha,
            "t0_range": list(self.t0_range),
            "sigma_grid": list(self.sigma_grid),
            "quad_nodes": self.quad_nodes,
        }
        if self.template is not None:
            doc["template"] = _template_doc(self.template)
        return doc

    def config_hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True,
                          separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def _as_complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ConfigError("complex amplitude must be a [re, im] pair")
        return complex(float(v[0]), float(v[1]))
    return complex(float(v))


def _template_doc(t: Template) -> dict:
    if t.kind == "gaussian":
        return {"kind": "gaussian", "a": t.params["a"]}
    if t.kind == "flat":
        return {"kind": "flat", "level": t.params["level"],
                "support": [t.params["lo"], t.params["hi"]]}
    if t.kind == "custom":
        return {"kind": "custom", "case": t.case,
                "omega": np.asarray(t.params["omega"]).tolist(),
                "mag": np.asarray(t.params["mag"]).tolist()}
    raise ConfigError(f"template kind {t.kind!r} has no JSON form")


# ---------------------------------------------------------------------------
# artifact plumbing

def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if v is None:
        return "nan"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _write_rows(path, header: Sequence[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_cell(v) for v in row])


def _write_manifest(cfg: ExperimentConfig, out_dir, files: dict) -> None:
    manifest = {
        "kind": cfg.kind,
        "config": cfg.to_dict(),
        "config_hash": cfg.config_hash(),
        "master_seed": cfg.master_seed,
        "package_version": _package_version(),
        "constants_revision": DEFAULT_CONSTANTS.revision,
        "row_counts": files,
    }
    path = os.path.join(out_dir, "run_manifest.json")
    with open(path, "w", newline="") as fh:
        fh.write(json.dumps(manifest, sort_keys=True, indent=2))
        fh.write("\n")


def _prep_out(out_dir) -> Optional[str]:
    if out_dir is None:
        return None
    out_dir = os.fspath(out_dir)
    os.makedirs(out_dir, exist_ok=True)
    return out_dir


def _require_template(cfg: ExperimentConfig) -> Template:
    if cfg.template is None:
        raise ConfigError(f"{cfg.kind} needs a template")
    return cfg.template


def _gap_radius(cfg: ExperimentConfig) -> Optional[float]:
    # runner-up gap is measured outside 3a for Gaussian pulses
    if cfg.alpha2 is not None:
        return cfg.alpha2
    t = cfg.template
    if t is not None and t.kind == "gaussian":
        return 3.0 * t.params["a"]
    return None


def _success_radius(cfg: ExperimentConfig) -> float:
    if cfg.success_radius is not None:
        return cfg.success_radius
    t = cfg.template
    if t is not None and t.kind == "gaussian":
        return 2.0 * t.params["a"]
    if cfg.alpha2 is not None:
        return cfg.alpha2
    raise ConfigError("no success radius: set success_radius or alpha2")


# ---------------------------------------------------------------------------
# delay experiments

@dataclass(frozen=True)
class DemoResult:
    grid: np.ndarray
    truth: np.ndarray
    traces: dict
    rows: list  # (m, trial, tau_hat, err, gap)


def run_noiseless_demo(cfg: ExperimentConfig, out_dir=None) -> DemoResult:
    """One correlation trace per m next to the exact mean curve.

    Noiseless by contract. For each m the first trial's trace is kept
    for plotting; every trial contributes an estimate row. Stream layout:
    ``m_index * trials + trial``.
    """
    template = _require_template(cfg)
    if cfg.scene.sigma_n != 0.0:
        raise ConfigError("noiseless_demo requires sigma_n = 0")
    ms = cfg.m_list or (cfg.m,)
    gap_r = _gap_radius(cfg)
    step = cfg.grid_step or default_grid_step(cfg.band, gap_r)
    grid = make_search_grid(cfg.window, step)
    truth = mean_curve(template, cfg.band, cfg.scene, grid, cfg.quad)

    traces = {}
    rows = []
    for mi, m in enumerate(ms):
        for trial in range(cfg.trials):
            rng = RngSpec(cfg.master_seed, mi * cfg.trials + trial)
            freqs = draw_frequencies(cfg.band, m, rng)
            meas = synthesize_delay_measurements(template, cfg.scene, freqs,
                                                 cfg.band, rng)
            if trial == 0:
                traces[m] = acf_estimate(meas, template, grid)
            # single-realization semantics: degenerate draws propagate here,
            # unlike the statistics runners which record them as failures
            est = estimate_delay_amplitude(meas, template, cfg.window,
                                           grid_step=step, alpha2=gap_r)
            rows.append((m, trial, est.tau_hat,
                         abs(est.tau_hat - cfg.scene.tau0),
                         est.runner_up_gap))

    out = _prep_out(out_dir)
    if out is not None:
        files = {}
        for m, trace in traces.items():
            name = f"demo_trace_m{m}.csv"
            trace.to_csv(os.path.join(out, name))
            files[name] = len(grid)
        _write_trace_csv(os.path.join(out, "demo_truth.csv"), "tau", grid,
                         np.asarray(truth, dtype=complex))
        files["demo_truth.csv"] = len(grid)
        _write_rows(os.path.join(out, "demo_estimates.csv"),
                    ("m", "trial", "tau_hat", "err", "gap"), rows)
        files["demo_estimates.csv"] = len(rows)
        _write_manifest(cfg, out, files)
    return DemoResult(grid=grid, truth=truth, traces=traces, rows=rows)


class SweepRow(NamedTuple):
    c: float
    trials: int
    successes: int
    success_rate: float
    mean_abs_err: float
    mean_gap: float


@dataclass(frozen=True)
class SweepResult:
    rows: list          # SweepRow per c
    per_trial: list     # (c, trial, tau_hat, err, success)
    sigma_scale: float  # |A| l2 sqrt(m / |Omega|), the c = 1 noise level


def run_noise_sweep(cfg: ExperimentConfig, out_dir=None) -> SweepResult:
    """Success rate versus noise level c, sigma_n = c |A| l2 sqrt(m/|Omega|).

    Rows come out sorted by c then trial regardless of execution order;
    stream layout ``c_index * trials + trial``.
    """
    template = _require_template(cfg)
    metrics = compute_metrics(template, cfg.band, cfg.quad)
    amp = abs(cfg.scene.amplitude)
    sigma_scale = amp * metrics.l2 * math.sqrt(cfg.m / cfg.band.width)
    radius = _success_radius(cfg)
    gap_r = _gap_radius(cfg)
    step = cfg.grid_step or default_grid_step(cfg.band, gap_r)

    per_trial = []
    rows = []
    for ci, c in enumerate(cfg.c_grid):
        scene_c = DelayScene(cfg.scene.amplitude, cfg.scene.tau0,
                             c * sigma_scale)
        successes = 0
        errs = []
        gaps = []
        for trial in range(cfg.trials):
            rng = RngSpec(cfg.master_seed, ci * cfg.trials + trial)
            freqs = draw_frequencies(cfg.band, cfg.m, rng)
            meas = synthesize_delay_measurements(template, scene_c, freqs,
                                                 cfg.band, rng)
            try:
                est = estimate_delay_amplitude(meas, template, cfg.window,
                                               grid_step=step, alpha2=gap_r)
            except DegenerateMeasurementError:
                errs.append(float("inf"))
                per_trial.append((c, trial, float("nan"), float("inf"), 0))
                continue
            err = abs(est.tau_hat - cfg.scene.tau0)
            ok = err <= radius
            successes += ok
            errs.append(err)
            if est.runner_up_gap is not None:
                gaps.append(est.runner_up_gap)
            per_trial.append((c, trial, est.tau_hat, err, int(ok)))
        rows.append(SweepRow(c=c, trials=cfg.trials, successes=successes,
                             success_rate=successes / cfg.trials,
                             mean_abs_err=float(np.mean(errs)),
                             mean_gap=float(np.mean(gaps)) if gaps
                             else float("nan")))

    out = _prep_out(out_dir)
    if out is not None:
        _write_rows(os.path.join(out, "sweep.csv"),
                    ("c", "trial", "tau_hat", "err", "success"), per_trial)
        _write_rows(os.path.join(out, "sweep_summary.csv"),
                    ("c", "trials", "successes", "success_rate",
                     "mean_abs_err", "mean_gap"), rows)
        _write_manifest(cfg, out, {"sweep.csv": len(per_trial),
                                   "sweep_summary.csv": len(rows)})
    return SweepResult(rows=rows, per_trial=per_trial,
                       sigma_scale=sigma_scale)


@dataclass(frozen=True)
class BoundCheckResult:
    rows: list        # (m, trial, sup_dev, theory_bound)
    noise_rows: list  # (m, trial, sup_dev, theory_bound), empty when clean
    summary: list     # (m, trials, mean_sup_dev, theory_bound, ratio)
    noise_summary: list


def run_bound_check(cfg: ExperimentConfig, out_dir=None) -> BoundCheckResult:
    """Empirical sup deviation per trial against the expectation bound.

    The theory column is the simplified uniform-deviation bound; with
    sigma_n > 0 each trial also reports the noise-only supremum against
    its own bound, computed from the same realization by subtracting the
    exact signal part. Stream layout ``m_index * trials + trial``.
    """
    template = _require_template(cfg)
    if not abs(cfg.scene.amplitude) > 0.0:
        raise ConfigError("bound_check needs a nonzero amplitude")
    metrics = compute_metrics(template, cfg.band, cfg.quad)
    ms = cfg.m_list or (cfg.m,)
    step = cfg.grid_step or 1.0 / (4.0 * cfg.band.width)
    grid = make_search_grid(cfg.window, step)
    truth = mean_curve(template, cfg.band, cfg.scene, grid, cfg.quad)
    zero_truth = np.zeros(len(grid))
    noisy = cfg.scene.sigma_n > 0.0
    zero_scene = DelayScene(0.0, cfg.scene.tau0, cfg.scene.sigma_n)

    rows = []
    noise_rows = []
    summary = []
    noise_summary = []
    for mi, m in enumerate(ms):
        pcfg = ProblemConfig(delta=cfg.delta, metrics=metrics, band=cfg.band,
                             window=cfg.window, m=m,
                             amp=abs(cfg.scene.amplitude),
                             sigma_n=cfg.scene.sigma_n)
        theory = expected_sup_bound(pcfg).simplified
        ntheory = noise_expected_sup_bound(pcfg).simplified if noisy else None
        devs = []
        ndevs = []
        for trial in range(cfg.trials):
            rng = RngSpec(cfg.master_seed, mi * cfg.trials + trial)
            freqs = draw_frequencies(cfg.band, m, rng)
            meas = synthesize_delay_measurements(template, cfg.scene, freqs,
                                                 cfg.band, rng)
            sup = deviation_supremum(meas, template, cfg.scene, cfg.window,
                                     grid=grid, truth=truth)
            rows.append((m, trial, sup, theory))
            devs.append(sup)
            if noisy:
                # noise-only supremum from the same realization
                clean = (cfg.scene.amplitude
                         * np.exp(-1j * meas.freqs * cfg.scene.tau0)
                         * template.spectrum(meas.freqs))
                nmeas = DelayMeasurements(freqs=meas.freqs,
                                          y=meas.y - clean, band=cfg.band,
                                          m=m, seed=None)
                nsup = deviation_supremum(nmeas, template, zero_scene,
                                          cfg.window, grid=grid,
                                          truth=zero_truth)
                noise_rows.append((m, trial, nsup, ntheory))
                ndevs.append(nsup)
        mean_dev = float(np.mean(devs))
        summary.append((m, cfg.trials, mean_dev, theory, mean_dev / theory))
        if noisy:
            nmean = float(np.mean(ndevs))
            noise_summary.append((m, cfg.trials, nmean, ntheory,
                                  nmean / ntheory))

    out = _prep_out(out_dir)
    if out is not None:
        files = {}
        _write_rows(os.path.join(out, "bound_check.csv"),
                    ("m", "trial", "sup_dev", "theory_bound"), rows)
        files["bound_check.csv"] = len(rows)
        _write_rows(os.path.join(out, "bound_check_summary.csv"),
                    ("m", "trials", "mean_sup_dev", "theory_bound", "ratio"),
                    summary)
        files["bound_check_summary.csv"] = len(summary)
        if noisy:
            _write_rows(os.path.join(out, "bound_check_noise.csv"),
                        ("m", "trial", "sup_dev", "theory_bound"), noise_rows)
            files["bound_check_noise.csv"] = len(noise_rows)
            _write_rows(os.path.join(out, "bound_check_noise_summary.csv"),
                        ("m", "trials", "mean_sup_dev", "theory_bound",
                         "ratio"), noise_summary)
            files["bound_check_noise_summary.csv"] = len(noise_summary)
        _write_manifest(cfg, out, files)
    return BoundCheckResult(rows=rows, noise_rows=noise_rows,
                            summary=summary, noise_summary=noise_summary)


# ---------------------------------------------------------------------------
# tone and chirp experiments

@dataclass(frozen=True)
class ToneResult:
    rows: list  # (trial, omega_hat_grid, omega_hat_refined, err_grid, err_refined)
    spacing: float
    grid_rate: float     # fraction with err_grid <= spacing
    refined_rate: float  # fraction with err_refined <= refined_tol
    refined_tol: float


def run_tone_experiment(cfg: ExperimentConfig, out_dir=None) -> ToneResult:
    """Grid-only versus grid-plus-ascent frequency recovery.

    omega0 is fixed when the config gives it, otherwise drawn uniformly
    over the band per trial from the truth stream. Stream layout: one
    stream per trial.
    """
    spacing = TWO_PI / cfg.window.length
    amp = cfg.scene.amplitude
    sigma = cfg.scene.sigma_n
    refined_tol = (cfg.success_radius if cfg.success_radius is not None
                   else 1e-9 * spacing)

    rows = []
    grid_ok = 0
    refined_ok = 0
    for trial in range(cfg.trials):
        rng = RngSpec(cfg.master_seed, trial)
        if cfg.omega0 is None:
            gen = rng.generator(TRUTH_STREAM)
            w0 = float(gen.uniform(-cfg.band.omega_max, cfg.band.omega_max))
        else:
            w0 = cfg.omega0
        times = draw_times(cfg.window, cfg.m, rng)
        meas = synthesize_tone_measurements(w0, amp, sigma, times,
                                            cfg.window, rng)
        est = estimate_tone(meas, cfg.band)
        err_grid = abs(est.grid_point - w0)
        err_ref = abs(est.omega_hat - w0)
        grid_ok += err_grid <= spacing
        refined_ok += err_ref <= refined_tol
        rows.append((trial, est.grid_point, est.omega_hat, err_grid,
                     err_ref))

    out = _prep_out(out_dir)
    if out is not None:
        _write_rows(os.path.join(out, "tone.csv"),
                    ("trial", "omega_hat_grid", "omega_hat_refined",
                     "err_grid", "err_refined"), rows)
        _write_rows(os.path.join(out, "tone_summary.csv"),
                    ("trials", "spacing", "grid_within_spacing_rate",
                     "refined_within_tol_rate", "refined_tol"),
                    [(cfg.trials, spacing, grid_ok / cfg.trials,
                      refined_ok / cfg.trials, refined_tol)])
        _write_manifest(cfg, out, {"tone.csv": len(rows),
                                   "tone_summary.csv": 1})
    return ToneResult(rows=rows, spacing=spacing,
                      grid_rate=grid_ok / cfg.trials,
                      refined_rate=refined_ok / cfg.trials,
                      refined_tol=refined_tol)


@dataclass(frozen=True)
class ChirpResult:
    rows: list  # (trial, t0, t0_hat, err)
    max_err: float


def run_chirp_demo(cfg: ExperimentConfig, out_dir=None) -> ChirpResult:
    """End-to-end time-of-arrival recovery through de-chirping.

    t0 is drawn uniformly from t0_range per trial; the band must cover
    the full residual-tone range alpha * t0_range. Stream layout: one
    stream per trial.
    """
    if cfg.chirp_alpha is None or cfg.chirp_alpha == 0.0:
        raise ConfigError("chirp needs a nonzero chirp_alpha")
    alpha = cfg.chirp_alpha
    lo, hi = cfg.t0_range
    if max(abs(alpha * lo), abs(alpha * hi)) > cfg.band.omega_max:
        raise ConfigError("band must cover the residual tone frequencies "
                          "alpha * t0_range")

    rows = []
    max_err = 0.0
    for trial in range(cfg.trials):
        rng = RngSpec(cfg.master_seed, trial)
        gen = rng.generator(TRUTH_STREAM)
        t0 = float(gen.uniform(lo, hi))
        times = draw_times(cfg.window, cfg.m, rng)
        chirp = ChirpSpec(omega_c=cfg.omega_c, alpha=alpha, t0=t0,
                          amp=cfg.scene.amplitude)
        samples = synthesize_chirp_samples(chirp, times, cfg.scene.sigma_n,
                                           rng)
        t0_hat = estimate_chirp_toa(times, samples, cfg.omega_c, alpha,
                                    cfg.band, cfg.window)
        err = abs(t0_hat - t0)
        max_err = max(max_err, err)
        rows.append((trial, t0, t0_hat, err))

    out = _prep_out(out_dir)
    if out is not None:
        _write_rows(os.path.join(out, "chirp.csv"),
                    ("trial", "t0", "t0_hat", "err"), rows)
        _write_manifest(cfg, out, {"chirp.csv": len(rows)})
    return ChirpResult(rows=rows, max_err=max_err)


# ---------------------------------------------------------------------------
# Nyquist-rate baseline

@dataclass(frozen=True)
class BaselineResult:
    rows: list       # (scheme, m, sigma, trial, err, success)
    summary: list    # (scheme, m, sigma, trials, successes, success_rate)
    crossings: list  # (scheme, m, sigma_half, censored)
    nyquist_count: int


def _waveform_table(template: Template, band: FrequencyBand,
                    t_lo: float, t_hi: float,
                    quad: Optional[QuadratureSpec]):
    """Dense samples of s(t) = (1/2pi) int s_hat(w) e^{iwt} dw."""
    nodes = (quad.nodes if quad is not None else QuadratureSpec().nodes)
    omega = _quad_grid(template, band, nodes)
    coeff = template.spectrum(omega) * _trap_weights(omega) / TWO_PI
    # 8x the band Nyquist rate keeps linear interpolation error negligible
    dt = TWO_PI / band.width / 8.0
    n = int(math.floor((t_hi - t_lo) / dt)) + 2
    t = t_lo + dt * np.arange(n)
    vals = np.empty(n, dtype=complex)
    chunk = max(1, (1 << 22) // len(omega))
    for i in range(0, n, chunk):
        block = t[i:i + chunk]
        vals[i:i + chunk] = np.exp(1j * np.outer(block, omega)) @ coeff
    return t, vals


def _interp_waveform(t_tab, s_tab, t):
    re = np.interp(t, t_tab, s_tab.real)
    im = np.interp(t, t_tab, s_tab.imag)
    return re + 1j * im


def run_nyquist_baseline(cfg: ExperimentConfig, out_dir=None) -> BaselineResult:
    """Compressive scheme versus the classical digital matched filter.

    The baseline takes time samples on the window at spacing 2 pi /
    |Omega| with per-sample noise variance sigma_n^2 |Omega| / (2 pi) and
    correlates against fractional-delay copies of the pulse on the same
    tau grid as the compressive path. One success curve is produced per
    compressive budget in m_list (or m) plus one for the baseline, all
    over sigma_grid; each curve gets a 50 percent crossing by log-linear
    interpolation. Stream layout: blocks ordered compressive budgets then
    baseline, ``(block * len(sigma_grid) + sigma_index) * trials + trial``.
    """
    template = _require_template(cfg)
    if template.kind not in ("gaussian", "flat"):
        raise ConfigError("baseline needs a gaussian or flat template")
    if not cfg.sigma_grid:
        raise ConfigError("baseline needs a sigma_grid")
    ms = cfg.m_list or (cfg.m,)
    radius = _success_radius(cfg)
    step = cfg.grid_step or 1.0 / (4.0 * cfg.band.width)
    grid = make_search_grid(cfg.window, step)
    amp = cfg.scene.amplitude
    tau0 = cfg.scene.tau0
    real_case = template.case == "real"

    # Nyquist time samples on the window and the reference bank
    dt = TWO_PI / cfg.band.width
    n_t = int(math.floor(cfg.window.length / dt)) + 1
    times_d = cfg.window.tau_min + dt * np.arange(n_t)
    t_tab, s_tab = _waveform_table(
        template, cfg.band,
        float(times_d[0]) - cfg.window.tau_max - dt,
        float(times_d[-1]) - cfg.window.tau_min + dt, cfg.quad)
    # bank[g, j] = conj(s(t_j - tau_g)); correlation is bank @ y_d
    shifts = times_d[None, :] - grid[:, None]
    bank = np.conj(_interp_waveform(t_tab, s_tab, shifts.ravel()))
    bank = bank.reshape(len(grid), n_t)
    clean_d = amp * _interp_waveform(t_tab, s_tab, times_d - tau0)
    if real_case:
        bank = bank.real
        clean_d = clean_d.real
    sigma_boost = math.sqrt(cfg.band.width / TWO_PI)

    rows = []
    summary = []
    curves = {}

    def record(scheme, m_label, sigma, trial, err):
        ok = err <= radius
        rows.append((scheme, m_label, sigma, trial, err, int(ok)))
        return ok

    n_sig = len(cfg.sigma_grid)
    for mi, m in enumerate(ms):
        for si, sigma in enumerate(cfg.sigma_grid):
            scene_s = DelayScene(amp, tau0, sigma)
            successes = 0
            for trial in range(cfg.trials):
                stream = (mi * n_sig + si) * cfg.trials + trial
                rng = RngSpec(cfg.master_seed, stream)
                freqs = draw_frequencies(cfg.band, m, rng)
                meas = synthesize_delay_measurements(template, scene_s,
                                                     freqs, cfg.band, rng)
                try:
                    est = estimate_delay_amplitude(meas, template,
                                                   cfg.window,
                                                   grid_step=step)
                    err = abs(est.tau_hat - tau0)
                except DegenerateMeasurementError:
                    err = float("inf")
                successes += record("compressive", m, sigma, trial, err)
            summary.append(("compressive", m, sigma, cfg.trials, successes,
                            successes / cfg.trials))
            curves.setdefault(("compressive", m), []).append(
                (sigma, successes / cfg.trials))

    base_block = len(ms)
    for si, sigma in enumerate(cfg.sigma_grid):
        successes = 0
        for trial in range(cfg.trials):
            stream = (base_block * n_sig + si) * cfg.trials + trial
            rng = RngSpec(cfg.master_seed, stream)
            if sigma > 0.0:
                if real_case:
                    gen = rng.generator(NOISE_STREAM)
                    noise = sigma * sigma_boost * gen.standard_normal(n_t)
                else:
                    noise = complex_noise(rng, sigma * sigma_boost, n_t)
                y_d = clean_d + noise
            else:
                y_d = clean_d
            vals = bank @ y_d
            tau_hat = float(grid[int(np.argmax(np.abs(vals)))])
            successes += record("nyquist", n_t, sigma, trial,
                                abs(tau_hat - tau0))
        summary.append(("nyquist", n_t, sigma, cfg.trials, successes,
                        successes / cfg.trials))
        curves.setdefault(("nyquist", n_t), []).append(
            (sigma, successes / cfg.trials))

    crossings = []
    for (scheme, m_label), pts in curves.items():
        sigma_half, censored = _half_crossing(pts)
        crossings.append((scheme, m_label, sigma_half, int(censored)))

    out = _prep_out(out_dir)
    if out is not None:
        _write_rows(os.path.join(out, "baseline.csv"),
                    ("scheme", "m", "sigma", "trial", "err", "success"),
                    rows)
        _write_rows(os.path.join(out, "baseline_summary.csv"),
                    ("scheme", "m", "sigma", "trials", "successes",
                     "success_rate"), summary)
        _write_rows(os.path.join(out, "baseline_crossings.csv"),
                    ("scheme", "m", "sigma_half", "censored"), crossings)
        _write_manifest(cfg, out, {"baseline.csv": len(rows),
                                   "baseline_summary.csv": len(summary),
                                   "baseline_crossings.csv": len(crossings)})
    return BaselineResult(rows=rows, summary=summary, crossings=crossings,
                          nyquist_count=n_t)


def _half_crossing(points):
    """Noise level where the success curve drops through one half.

    Log-linear interpolation between the bracketing sigma values; returns
    (sigma, censored) with censored set when the curve never crosses
    inside the swept range.
    """
    pts = sorted(points)
    if pts[0][1] < 0.5:
        return pts[0][0], True
    for (s0, r0), (s1, r1) in zip(pts, pts[1:]):
        if r0 >= 0.5 > r1:
            if s0 <= 0.0:
                w = (r0 - 0.5) / (r0 - r1)
                return s0 + w * (s1 - s0), False
            w = (r0 - 0.5) / (r0 - r1)
            return math.exp(math.log(s0) + w * (math.log(s1) - math.log(s0))), False
    return pts[-1][0], True


_RUNNERS = {
    "noiseless_demo": run_noiseless_demo,
    "noise_sweep": run_noise_sweep,
    "bound_check": run_bound_check,
    "tone": run_tone_experiment,
    "chirp": run_chirp_demo,
    "nyquist_baseline": run_nyquist_baseline,
}


def run_experiment(cfg: ExperimentConfig, out_dir=None):
    """Dispatch on the config kind; see the individual runners."""
    return _RUNNERS[cfg.kind](cfg, out_dir)
