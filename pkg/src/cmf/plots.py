"""Figure rendering for experiment results.

Each function takes a runner result plus a directory, writes one or more
PNG files next to the CSV output, and returns the written paths. Uses
the Agg backend so it works headless.
"""

from __future__ import annotations

import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = [
    "plot_template",
    "plot_demo",
    "plot_sweep",
    "plot_bound_check",
    "plot_tone",
    "plot_chirp",
    "plot_baseline",
]

_DPI = 150


def _save(fig, out_dir, name):
    path = os.path.join(out_dir, name)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def plot_template(omega, mag, taus, acf, out_dir, name="template.png"):
    """Spectrum magnitude next to the autocorrelation it induces."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 3.6))
    ax1.plot(omega, mag, lw=1.0)
    ax1.set_xlabel(r"$\omega$")
    ax1.set_ylabel(r"$|\hat s(\omega)|$")
    ax2.plot(taus, np.abs(acf), lw=1.0)
    ax2.set_xlabel(r"$\tau$")
    ax2.set_ylabel(r"$|R_{ss}(\tau)|$")
    return [_save(fig, out_dir, name)]


def plot_demo(result, out_dir):
    """One figure per m: estimated trace over the exact mean curve."""
    paths = []
    truth_mag = np.abs(result.truth)
    for m, trace in sorted(result.traces.items()):
        fig, ax = plt.subplots(figsize=(6.8, 4.0))
        ax.plot(result.grid, trace.magnitudes(), lw=0.7,
                label=r"$|\tilde R_{ss}(\tau)|$")
        ax.plot(result.grid, truth_mag, lw=1.4, ls="--",
                label=r"$|A\,R_{ss}(\tau-\tau_0)|$")
        peak = int(np.argmax(trace.magnitudes()))
        ax.plot(result.grid[peak], trace.magnitudes()[peak], "o", ms=5)
        ax.set_xlabel(r"$\tau$")
        ax.set_title(f"m = {m}")
        ax.legend(loc="upper right", fontsize=8)
        paths.append(_save(fig, out_dir, f"demo_m{m}.png"))
    return paths


def plot_sweep(result, out_dir):
    """Success rate against the noise-level fraction c."""
    c = [r.c for r in result.rows]
    rate = [r.success_rate for r in result.rows]
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.plot(c, rate, "o-", ms=4)
    ax.set_xlabel("c")
    ax.set_ylabel("success rate")
    ax.set_ylim(-0.02, 1.02)
    ax.grid(True, alpha=0.3)
    return [_save(fig, out_dir, "sweep.png")]


def plot_bound_check(result, out_dir):
    """Empirical mean supremum under the theoretical bound, per m."""
    ms = [row[0] for row in result.summary]
    emp = [row[2] for row in result.summary]
    theory = [row[3] for row in result.summary]
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.loglog(ms, emp, "o-", label="empirical mean sup")
    ax.loglog(ms, theory, "s--", label="bound")
    if result.noise_summary:
        ax.loglog([r[0] for r in result.noise_summary],
                  [r[2] for r in result.noise_summary], "^-",
                  label="noise empirical")
        ax.loglog([r[0] for r in result.noise_summary],
                  [r[3] for r in result.noise_summary], "v--",
                  label="noise bound")
    ax.set_xlabel("m")
    ax.legend(fontsize=8)
    ax.grid(True, which="both", alpha=0.3)
    return [_save(fig, out_dir, "bound_check.png")]


def plot_tone(result, out_dir):
    """Grid and refined frequency errors per trial."""
    trials = [r[0] for r in result.rows]
    err_grid = [max(r[3], 1e-300) for r in result.rows]
    err_ref = [max(r[4], 1e-300) for r in result.rows]
    fig, ax = plt.subplots(figsize=(6.8, 4.0))
    ax.semilogy(trials, err_grid, ".", ms=4, label="grid error")
    ax.semilogy(trials, err_ref, "x", ms=4, label="refined error")
    ax.axhline(result.spacing, color="k", lw=0.8, ls="--")
    ax.axhline(result.refined_tol, color="k", lw=0.8, ls=":")
    ax.set_xlabel("trial")
    ax.set_ylabel(r"$|\hat\omega_0-\omega_0|$")
    ax.legend(fontsize=8)
    return [_save(fig, out_dir, "tone.png")]


def plot_chirp(result, out_dir):
    """Recovered against true time of arrival."""
    t0 = [r[1] for r in result.rows]
    t0_hat = [r[2] for r in result.rows]
    fig, ax = plt.subplots(figsize=(4.8, 4.4))
    lo, hi = min(t0), max(t0)
    ax.plot([lo, hi], [lo, hi], "k--", lw=0.8)
    ax.plot(t0, t0_hat, "o", ms=4, alpha=0.7)
    ax.set_xlabel(r"$t_0$")
    ax.set_ylabel(r"$\hat t_0$")
    return [_save(fig, out_dir, "chirp.png")]


def plot_baseline(result, out_dir):
    """Success curves for each scheme with their half crossings."""
    curves = {}
    for scheme, m, sigma, _tr, _s, rate in result.summary:
        curves.setdefault((scheme, m), []).append((sigma, rate))
    fig, ax = plt.subplots(figsize=(6.8, 4.2))
    for (scheme, m), pts in sorted(curves.items()):
        pts = sorted(pts)
        ax.semilogx([p[0] for p in pts], [p[1] for p in pts], "o-",
                    ms=3.5, label=f"{scheme} m={m}")
    for scheme, m, s_half, censored in result.crossings:
        if not censored:
            ax.axvline(s_half, color="k", lw=0.6, ls=":", alpha=0.6)
    ax.axhline(0.5, color="k", lw=0.8, ls="--", alpha=0.6)
    ax.set_xlabel(r"$\sigma_n$")
    ax.set_ylabel("success rate")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(fontsize=8)
    return [_save(fig, out_dir, "baseline.png")]
