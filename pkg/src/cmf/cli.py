"""Command line front end.

Every subcommand reads one JSON config (see README for the schema) and
prints a JSON summary to stdout. With ``--out`` the experiment's CSV
artifacts land in that directory together with rendered PNG figures;
``--no-figures`` keeps just the delimited output. ``--seed`` and
``--trials`` override the config in place.

Exit codes: 0 on success, 2 on a configuration problem, 3 when a
measurement is degenerate (every sampled frequency fell where the
template spectrum vanishes).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .errors import (ConfigError, DegenerateMeasurementError,
                     InvalidParameterError, ZeroEnergyError)
from .templates import (FrequencyBand, QuadratureSpec, SearchWindow,
                        autocorrelation, compute_metrics, lobe_profile,
                        template_from_json)
from .core import _write_trace_csv
from .bounds import ProblemConfig, bound_report
from .harness import ExperimentConfig, run_experiment

__all__ = ["main"]


def _load_doc(path: str) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    return doc


def _apply_overrides(doc: dict, args) -> None:
    if getattr(args, "seed", None) is not None:
        doc["master_seed"] = args.seed
    if getattr(args, "trials", None) is not None:
        doc["trials"] = args.trials


def _coerce(o):
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serializable: {type(o)!r}")


def _experiment_config(args, allowed, default_kind) -> ExperimentConfig:
    doc = _load_doc(args.config)
    _apply_overrides(doc, args)
    kind = doc.setdefault("kind", default_kind)
    if kind not in allowed:
        raise ConfigError(
            f"config kind {kind!r} does not belong to this subcommand "
            f"(expected one of {sorted(allowed)})")
    return ExperimentConfig.from_dict(doc)


def _figures(args) -> bool:
    return args.out is not None and not args.no_figures


def cmd_template(args) -> dict:
    doc = _load_doc(args.config)
    doc.setdefault("kind", "noiseless_demo")
    cfg = ExperimentConfig.from_dict(doc)
    if cfg.template is None:
        raise ConfigError("template command needs a template")
    template = cfg.template
    metrics = compute_metrics(template, cfg.band, cfg.quad)
    summary = {
        "template": template.kind,
        "case": template.case,
        "metrics": {"l2sq": metrics.l2sq, "l4_4": metrics.l4_4,
                    "linf_sq": metrics.linf_sq, "mu1": metrics.mu1,
                    "mu2": metrics.mu2},
        "eta": metrics.eta(abs(cfg.scene.amplitude)),
    }
    if cfg.alpha2 is not None:
        summary["alpha1_at_alpha2"] = lobe_profile(
            template, cfg.band, cfg.alpha2, scan_limit=cfg.window.length,
            quad=cfg.quad)
    if args.out is not None:
        os.makedirs(args.out, exist_ok=True)
        omega = np.linspace(-cfg.band.omega_max, cfg.band.omega_max, 2001)
        mag = np.abs(template.spectrum(omega))
        taus = np.linspace(-cfg.window.length, cfg.window.length, 2001)
        acf = np.atleast_1d(autocorrelation(template, cfg.band, taus,
                                            cfg.quad))
        _write_trace_csv(os.path.join(args.out, "spectrum.csv"), "omega",
                         omega, mag.astype(complex))
        _write_trace_csv(os.path.join(args.out, "autocorrelation.csv"),
                         "tau", taus, acf)
        summary["out"] = args.out
        if not args.no_figures:
            from . import plots
            summary["figures"] = plots.plot_template(omega, mag, taus, acf,
                                                     args.out)
    return summary


def cmd_bounds(args) -> dict:
    doc = _load_doc(args.config)
    try:
        band_doc = doc["band"]
        window_doc = doc["window"]
        band = FrequencyBand(float(band_doc["omega_max"]))
        window = SearchWindow(float(window_doc["tau_min"]),
                              float(window_doc["tau_max"]))
        if "template" not in doc:
            raise ConfigError("bounds command needs a template")
        template = template_from_json(doc["template"], band)
        quad = None
        if doc.get("quad_nodes") is not None:
            quad = QuadratureSpec(nodes=int(doc["quad_nodes"]))
        metrics = compute_metrics(template, band, quad)
        sdoc = doc.get("scene", {})
        amp = sdoc.get("amplitude", 1.0)
        if isinstance(amp, (list, tuple)):
            amp = complex(float(amp[0]), float(amp[1]))
        m = doc.get("m")
        alpha2 = doc.get("alpha2")
        pcfg = ProblemConfig(
            delta=float(doc.get("delta", 0.05)), metrics=metrics, band=band,
            window=window, m=None if m is None else int(m), amp=abs(amp),
            sigma_n=float(sdoc.get("sigma_n", 0.0)),
            alpha1=float(doc.get("alpha1", 0.0)),
            alpha2=None if alpha2 is None else float(alpha2),
            epsilon=float(doc.get("epsilon", 0.0)))
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad bounds config: {exc}") from exc
    report = bound_report(pcfg)
    if args.out is not None:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "bounds.json"), "w") as fh:
            fh.write(json.dumps(report, indent=2, sort_keys=True,
                                default=_coerce))
            fh.write("\n")
        report["out"] = args.out
    return report


def cmd_simulate(args) -> dict:
    doc = _load_doc(args.config)
    _apply_overrides(doc, args)
    doc.setdefault("trials", 1)
    doc.setdefault("kind", "noiseless_demo")
    if doc["kind"] not in ("noiseless_demo", "bound_check"):
        raise ConfigError("simulate runs noiseless_demo or bound_check "
                          f"configs, not {doc['kind']!r}")
    cfg = ExperimentConfig.from_dict(doc)
    result = run_experiment(cfg, args.out)
    if cfg.kind == "noiseless_demo":
        summary = {
            "kind": cfg.kind,
            "trials": cfg.trials,
            "ms": sorted(result.traces),
            "max_err": max(r[3] for r in result.rows),
            "estimates": [
                {"m": m, "tau_hat": tau, "err": err}
                for m, trial, tau, err, _gap in result.rows if trial == 0
            ],
        }
        if _figures(args):
            from . import plots
            summary["figures"] = plots.plot_demo(result, args.out)
    else:
        summary = {
            "kind": cfg.kind,
            "trials": cfg.trials,
            "summary": [list(row) for row in result.summary],
            "noise_summary": [list(row) for row in result.noise_summary],
        }
        if _figures(args):
            from . import plots
            summary["figures"] = plots.plot_bound_check(result, args.out)
    if args.out is not None:
        summary["out"] = args.out
    return summary


def cmd_sweep(args) -> dict:
    cfg = _experiment_config(args, {"noise_sweep"}, "noise_sweep")
    result = run_experiment(cfg, args.out)
    summary = {
        "kind": cfg.kind,
        "trials": cfg.trials,
        "sigma_scale": result.sigma_scale,
        "rates": [[r.c, r.success_rate] for r in result.rows],
    }
    if _figures(args):
        from . import plots
        summary["figures"] = plots.plot_sweep(result, args.out)
    if args.out is not None:
        summary["out"] = args.out
    return summary


def cmd_tone(args) -> dict:
    cfg = _experiment_config(args, {"tone"}, "tone")
    result = run_experiment(cfg, args.out)
    summary = {
        "kind": cfg.kind,
        "trials": cfg.trials,
        "spacing": result.spacing,
        "grid_rate": result.grid_rate,
        "refined_rate": result.refined_rate,
        "refined_tol": result.refined_tol,
        "max_refined_err": max(r[4] for r in result.rows),
    }
    if _figures(args):
        from . import plots
        summary["figures"] = plots.plot_tone(result, args.out)
    if args.out is not None:
        summary["out"] = args.out
    return summary


def cmd_chirp(args) -> dict:
    cfg = _experiment_config(args, {"chirp"}, "chirp")
    result = run_experiment(cfg, args.out)
    summary = {"kind": cfg.kind, "trials": cfg.trials,
               "max_err": result.max_err}
    if _figures(args):
        from . import plots
        summary["figures"] = plots.plot_chirp(result, args.out)
    if args.out is not None:
        summary["out"] = args.out
    return summary


def cmd_baseline(args) -> dict:
    cfg = _experiment_config(args, {"nyquist_baseline"}, "nyquist_baseline")
    result = run_experiment(cfg, args.out)
    summary = {
        "kind": cfg.kind,
        "trials": cfg.trials,
        "nyquist_count": result.nyquist_count,
        "crossings": [list(row) for row in result.crossings],
    }
    if _figures(args):
        from . import plots
        summary["figures"] = plots.plot_baseline(result, args.out)
    if args.out is not None:
        summary["out"] = args.out
    return summary


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cmf",
        description="compressive matched filter experiments and bounds")
    sub = parser.add_subparsers(dest="command", required=True)
    handlers = {
        "template": (cmd_template, "spectral metrics and autocorrelation"),
        "simulate": (cmd_simulate, "run a delay-estimation simulation"),
        "sweep": (cmd_sweep, "success rate versus noise level"),
        "bounds": (cmd_bounds, "evaluate every theoretical bound"),
        "tone": (cmd_tone, "tone frequency recovery experiment"),
        "chirp": (cmd_chirp, "chirp time-of-arrival experiment"),
        "baseline": (cmd_baseline, "compare against Nyquist-rate sampling"),
    }
    for name, (func, help_text) in handlers.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True,
                       help="path to the JSON experiment config")
        p.add_argument("--seed", type=int, default=None,
                       help="override master_seed")
        p.add_argument("--trials", type=int, default=None,
                       help="override the trial count")
        p.add_argument("--out", default=None,
                       help="directory for CSV and figure artifacts")
        p.add_argument("--no-figures", action="store_true",
                       help="suppress PNG rendering")
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        summary = args.func(args)
    except (ConfigError, InvalidParameterError, ZeroEnergyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DegenerateMeasurementError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    print(json.dumps(summary, indent=2, sort_keys=True, default=_coerce))
    return 0


if __name__ == "__main__":
    sys.exit(main())
