"""Figures written next to the delimited report files.

Uses the object-oriented matplotlib API (no pyplot global state), so it is
safe to call from the CLI and from tests without a display.
"""

from __future__ import annotations

import math

import numpy as np
from matplotlib.figure import Figure


def _save(fig: Figure, path) -> None:
    fig.tight_layout()
    fig.savefig(path, dpi=120)


def plot_autocorrelation(result, path) -> None:
    fig = Figure(figsize=(6, 3.5))
    ax = fig.add_subplot()
    ax.plot(result.lags, result.values, "-", lw=1, color="k", label="A(d)")
    c = result.confidence
    ax.axhline(c, ls="--", color="tab:red", lw=1, label=r"$\pm 2/\sqrt{n}$")
    ax.axhline(-c, ls="--", color="tab:red", lw=1)
    ax.set_xlabel("lag d (samples)")
    ax.set_ylabel("normalized autocorrelation")
    ax.legend(frameon=False, fontsize=8)
    _save(fig, path)


def _gauss(x, sigma, n, width):
    return n * width * np.exp(-0.5 * (x / sigma) ** 2) / (math.sqrt(2 * math.pi) * sigma)


def plot_distribution(report, path, label="samples") -> None:
    """Histogram of one block with its moment-matched Gaussian."""
    fig = Figure(figsize=(6, 3.5))
    ax = fig.add_subplot()
    centers = 0.5 * (report.bin_edges[1:] + report.bin_edges[:-1])
    width = report.bin_edges[1] - report.bin_edges[0]
    ax.fill_between(centers, report.counts, step="mid", alpha=0.4, label=label)
    if report.std > 0:
        ax.plot(centers, _gauss(centers - report.mean, report.std, report.n, width),
                color="k", lw=1, label=f"Gaussian, sigma={report.std:.1f}")
    ax.set_xlabel("ADC code")
    ax.set_ylabel("count per bin")
    ax.legend(frameon=False, fontsize=8)
    _save(fig, path)


def plot_entropy_decomposition(report, path) -> None:
    """Gaussian densities of total, electronic and inferred quantum noise."""
    fig = Figure(figsize=(6, 3.5))
    ax = fig.add_subplot()
    x = np.linspace(-5 * report.sigma_t, 5 * report.sigma_t, 801)
    for sigma, name in ((report.sigma_t, "total"), (report.sigma_e, "electronic"),
                        (report.sigma_q, "quantum")):
        ax.plot(x, _gauss(x, sigma, 1.0, 1.0), lw=1, label=f"{name}, sigma={sigma:.1f}")
    ax.set_xlabel("ADC code")
    ax.set_ylabel("probability per code")
    ax.set_title(f"H(X_q) = {report.h_sum:.3f} bit/sample", fontsize=9)
    ax.legend(frameon=False, fontsize=8)
    _save(fig, path)


def plot_extraction(samples, extracted: np.ndarray, path, n_show: int = 200) -> None:
    """Raw samples and extracted bytes, time trace and histogram side by side."""
    samples = np.asarray(samples)
    extracted = np.asarray(extracted, dtype=np.uint8)
    fig = Figure(figsize=(8, 4))
    axes = fig.subplots(2, 2, gridspec_kw={"width_ratios": [3, 1]})
    raw = samples.astype(np.int32) + 32768
    for row, (data, name, top) in enumerate(((raw >> 8, "raw (high byte)", 256),
                                             (extracted, "extracted byte", 256))):
        axes[row, 0].plot(data[:n_show], lw=0.6, color=("tab:blue", "tab:red")[row])
        axes[row, 0].set_ylabel(name, fontsize=8)
        axes[row, 1].hist(data, bins=64, range=(0, top), orientation="horizontal",
                          color=("tab:blue", "tab:red")[row])
    axes[1, 0].set_xlabel("sample index")
    axes[1, 1].set_xlabel("count")
    _save(fig, path)
