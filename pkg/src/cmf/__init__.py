"""Compressive matched filter toolkit.

Estimate an unknown delay and amplitude (or, in the dual problem, a tone
frequency or chirp time of arrival) from a small number of randomly
located noisy spectral samples, evaluate every theoretical guarantee the
method comes with, and verify those guarantees by seeded Monte Carlo
experiment.
"""

from .errors import (CmfError, ConfigError, DegenerateMeasurementError,
                     InvalidParameterError, NumericError, ZeroEnergyError)
from .templates import (FrequencyBand, QuadratureSpec, SearchWindow,
                        SpectralMetrics, Template, autocorrelation,
                        compute_metrics, lobe_profile, make_custom_template,
                        make_flat_band, make_gaussian_pulse,
                        template_from_json)
from .sampling import (DelayMeasurements, DelayScene, RngSpec,
                       ToneMeasurements, complex_noise, draw_frequencies,
                       draw_times, synthesize_delay_measurements,
                       synthesize_tone_measurements)
from .core import (CorrelationTrace, DelayEstimate, acf_estimate,
                   correlation_process, default_grid_step,
                   deviation_supremum, estimate_delay_amplitude,
                   grid_search, make_search_grid, mean_curve,
                   test_vector_entry)
from .tone import (ChirpSpec, ToneEstimate, ToneTrace, concave_refine,
                   dechirp, estimate_chirp_toa, estimate_tone, nyquist_grid,
                   synthesize_chirp_samples, tone_acf_estimate,
                   tone_autocorrelation, tone_process)
from .bounds import (Constants, DEFAULT_CONSTANTS, ProblemConfig,
                     bound_report, breakdown_sigma, expected_sup_bound,
                     min_samples_noiseless, min_samples_noisy,
                     noise_expected_sup_bound, noise_tail_threshold,
                     pointwise_bounds, tail_threshold_U, tone_min_samples,
                     tone_min_samples_noiseless)
from .harness import (ExperimentConfig, SweepResult, run_bound_check,
                      run_chirp_demo, run_experiment, run_noise_sweep,
                      run_noiseless_demo, run_nyquist_baseline,
                      run_tone_experiment)

__version__ = "0.1.0"

__all__ = [
    "CmfError", "ConfigError", "DegenerateMeasurementError",
    "InvalidParameterError", "NumericError", "ZeroEnergyError",
    "FrequencyBand", "QuadratureSpec", "SearchWindow", "SpectralMetrics",
    "Template", "autocorrelation", "compute_metrics", "lobe_profile",
    "make_custom_template", "make_flat_band", "make_gaussian_pulse",
    "template_from_json",
    "DelayMeasurements", "DelayScene", "RngSpec", "ToneMeasurements",
    "complex_noise", "draw_frequencies", "draw_times",
    "synthesize_delay_measurements", "synthesize_tone_measurements",
    "CorrelationTrace", "DelayEstimate", "acf_estimate",
    "correlation_process", "default_grid_step", "deviation_supremum",
    "estimate_delay_amplitude", "grid_search", "make_search_grid",
    "mean_curve", "test_vector_entry",
    "ChirpSpec", "ToneEstimate", "ToneTrace", "concave_refine", "dechirp",
    "estimate_chirp_toa", "estimate_tone", "nyquist_grid",
    "synthesize_chirp_samples", "tone_acf_estimate", "tone_autocorrelation",
    "tone_process",
    "Constants", "DEFAULT_CONSTANTS", "ProblemConfig", "bound_report",
    "breakdown_sigma", "expected_sup_bound", "min_samples_noiseless",
    "min_samples_noisy", "noise_expected_sup_bound", "noise_tail_threshold",
    "pointwise_bounds", "tail_threshold_U", "tone_min_samples",
    "tone_min_samples_noiseless",
    "ExperimentConfig", "SweepResult", "run_bound_check", "run_chirp_demo",
    "run_experiment", "run_noise_sweep", "run_noiseless_demo",
    "run_nyquist_baseline", "run_tone_experiment",
    "__version__",
]
