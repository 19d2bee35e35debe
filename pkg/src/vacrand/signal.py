"""Diagnostics on raw sample streams."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from vacrand.source import ADC_MAX, ADC_MIN

ELECTRON_CHARGE = 1.602176634e-19  # C, exact SI value


@dataclass
class AutocorrelationResult:
    lags: np.ndarray
    values: np.ndarray
    n: int
    mean_subtracted: bool = False
    offset_warning: bool = False

    @property
    def confidence(self) -> float:
        return 2.0 / math.sqrt(self.n)

    @property
    def fraction_within(self) -> float:
        return float(np.mean(np.abs(self.values) <= self.confidence))

    def lines(self) -> list[str]:
        return [f"n: {self.n}", f"max_lag: {int(self.lags[-1])}",
                f"confidence: {self.confidence}", f"fraction_within: {self.fraction_within}",
                f"max_abs: {float(np.max(np.abs(self.values)))}",
                f"mean_subtracted: {self.mean_subtracted}",
                f"offset_warning: {self.offset_warning}"]


def autocorrelation(block, d_max: int, subtract_mean: bool = False) -> AutocorrelationResult:
    """Normalized autocorrelation <x_i x_{i+d}> / <x_i^2> for d = 1..d_max.

    The lag-d numerator averages the n-d available pairs (no wraparound).
    No mean is removed unless ``subtract_mean`` is set; a DC offset larger
    than 1% of the standard deviation raises ``offset_warning``.
    """
    x = np.asarray(getattr(block, "samples", block), dtype=np.float64)
    n = x.size
    if not 1 <= d_max < n:
        raise ValueError(f"need n > d_max >= 1 (n={n}, d_max={d_max})")
    mean = x.mean()
    std = x.std()
    if subtract_mean:
        x = x - mean
    power = np.dot(x, x) / n
    if power == 0:
        raise ValueError("all-zero block has no defined autocorrelation")
    values = np.empty(d_max)
    for d in range(1, d_max + 1):
        values[d - 1] = np.dot(x[:-d], x[d:]) / (n - d) / power
    warn = bool(abs(mean) > std / 100) if std > 0 else False
    return AutocorrelationResult(np.arange(1, d_max + 1), values, n, subtract_mean, warn)


@dataclass(frozen=True)
class ShotNoiseParams:
    photocurrent: float = 1.7e-3      # A
    bandwidth: float = 1e3            # Hz
    transimpedance: float = 540e3     # ohm
    load: float = 50.0                # ohm
    electron_charge: float = ELECTRON_CHARGE

    def __post_init__(self):
        for k, v in vars(self).items():
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{k} must be positive, got {v}")


def shot_noise_power(params: ShotNoiseParams) -> tuple[float, float]:
    """Shot-noise power into the load, as (watts, dBm)."""
    watts = (4.0 * params.electron_charge * params.photocurrent * params.bandwidth
             * params.transimpedance**2 / params.load)
    return watts, 10.0 * math.log10(watts / 1e-3)


@dataclass
class DistributionReport:
    n: int
    mean: float
    std: float
    skewness: float | None
    excess_kurtosis: float | None
    bin_edges: np.ndarray = field(repr=False)
    counts: np.ndarray = field(repr=False)

    @property
    def degenerate(self) -> bool:
        return self.skewness is None

    def lines(self) -> list[str]:
        fmt = lambda v: "undefined" if v is None else f"{v}"
        return [f"n: {self.n}", f"mean: {self.mean}", f"std: {self.std}",
                f"skewness: {fmt(self.skewness)}", f"excess_kurtosis: {fmt(self.excess_kurtosis)}"]


def distribution_report(block, n_bins: int = 256) -> DistributionReport:
    """Moments and a coarse histogram over the full ADC code range.

    Higher moments are ``None`` for a constant block.
    """
    x = np.asarray(getattr(block, "samples", block), dtype=np.float64)
    n = x.size
    if n < 2:
        raise ValueError("need at least 2 samples")
    mean = math.fsum(x) / n
    d = x - mean
    d2 = d * d
    m2 = math.fsum(d2) / n
    if m2 > 0:
        m3 = math.fsum(d2 * d) / n
        m4 = math.fsum(d2 * d2) / n
        skew = m3 / m2**1.5
        kurt = m4 / m2**2 - 3.0
    else:
        skew = kurt = None
    edges = np.linspace(ADC_MIN - 0.5, ADC_MAX + 0.5, n_bins + 1)
    counts, _ = np.histogram(x, bins=edges)
    return DistributionReport(n, mean, math.sqrt(m2), skew, kurt, edges, counts)
