"""Simulated and captured ADC sample streams.

The digitized homodyne signal is modelled as the sum of two independent
Gaussian noise processes (quantum and electronic), quantized to signed
16-bit words. Real captures are raw little-endian int16 files with no header.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np
from scipy.signal import lfilter

ADC_BITS = 16
ADC_MIN = -(1 << (ADC_BITS - 1))
ADC_MAX = (1 << (ADC_BITS - 1)) - 1
DEFAULT_SAMPLE_RATE_HZ = 60e6

# Values measured in the reference setup (counts).
REF_SIGMA_T = 4504.41
REF_SIGMA_E = 1481.8
REF_SIGMA_Q = math.sqrt(REF_SIGMA_T**2 - REF_SIGMA_E**2)

CAPTURE_FORMATS = ("s16le",)


class CaptureFormatError(ValueError):
    """A capture file does not hold whole signed 16-bit samples."""


@dataclass(frozen=True)
class NoiseParams:
    """Parameters of the simulated noise source.

    ``sigma_q`` and ``sigma_e`` are standard deviations in ADC counts.
    ``ar_coefficient`` adds AR(1) temporal correlation to both Gaussian
    streams (0 gives white noise) without changing their marginal variance.
    """

    sigma_q: float = REF_SIGMA_Q
    sigma_e: float = REF_SIGMA_E
    seed: int = 0
    ar_coefficient: float = 0.0
    adc_bits: int = ADC_BITS

    def __post_init__(self):
        for name in ("sigma_q", "sigma_e"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and non-negative, got {v}")
        if not 0.0 <= self.ar_coefficient < 1.0:
            raise ValueError(f"ar_coefficient must lie in [0, 1), got {self.ar_coefficient}")
        if self.adc_bits != ADC_BITS:
            raise ValueError("only 16-bit ADC words are supported")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @property
    def sigma_t(self) -> float:
        return math.hypot(self.sigma_q, self.sigma_e)


@dataclass
class SampleBlock:
    """Signed 16-bit ADC samples in acquisition order."""

    samples: np.ndarray
    sample_rate_hz: float = DEFAULT_SAMPLE_RATE_HZ
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.samples = np.ascontiguousarray(self.samples, dtype=np.int16)

    def __len__(self):
        return self.samples.size

    def store(self, path) -> None:
        """Write the block as raw signed 16-bit little-endian words."""
        self.samples.astype("<i2", copy=False).tofile(path)


def quantize(x):
    """Round to the nearest ADC code, ties away from zero, saturating.

    Accepts a scalar or an array; a scalar input returns a Python int.
    """
    arr = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValueError("cannot quantize non-finite values")
    r = np.rint(arr)
    t = np.trunc(arr)
    ties = np.abs(arr - t) == 0.5
    if np.any(ties):
        r = np.where(ties, t + np.sign(arr), r)
    q = np.clip(r, ADC_MIN, ADC_MAX).astype(np.int16)
    if q.ndim == 0:
        return int(q)
    return q


class _GaussianStream:
    """Unit-variance Gaussian stream, optionally AR(1)-correlated.

    Chunked draws concatenate to exactly the same sequence as a single draw,
    so the streaming pipeline and one-shot generation agree.
    """

    def __init__(self, seed_seq: np.random.SeedSequence, rho: float):
        self._rng = np.random.Generator(np.random.PCG64(seed_seq))
        self._rho = rho
        self._gain = math.sqrt(1.0 - rho * rho)
        self._zi = None

    def draw(self, n: int) -> np.ndarray:
        g = self._rng.standard_normal(n)
        if self._rho == 0.0 or n == 0:
            return g
        if self._zi is None:
            # stationary start: first output is the first innovation itself
            first = g[0]
            self._zi = np.array([self._rho * first])
            if n == 1:
                return g
            rest, self._zi = lfilter([self._gain], [1.0, -self._rho], g[1:], zi=self._zi)
            return np.concatenate(([first], rest))
        y, self._zi = lfilter([self._gain], [1.0, -self._rho], g, zi=self._zi)
        return y


def iter_samples(params: NoiseParams, n: int, chunk: int = 1 << 20,
                 electronic_only: bool = False) -> Iterator[np.ndarray]:
    """Yield ``n`` simulated samples as int16 chunks of at most ``chunk`` samples."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if chunk <= 0:
        raise ValueError("chunk must be positive")
    q_seq, e_seq = np.random.SeedSequence(params.seed).spawn(2)
    sigma_q = 0.0 if electronic_only else params.sigma_q
    q_stream = _GaussianStream(q_seq, params.ar_coefficient)
    e_stream = _GaussianStream(e_seq, params.ar_coefficient)
    done = 0
    while done < n:
        k = min(chunk, n - done)
        x = sigma_q * q_stream.draw(k) + params.sigma_e * e_stream.draw(k)
        yield quantize(x)
        done += k


def generate_samples(params: NoiseParams, n: int, seed: int | None = None) -> SampleBlock:
    """Simulate ``n`` quantized samples of quantum plus electronic noise.

    ``seed`` overrides ``params.seed`` when given. Output is a pure function
    of (params, n, seed).
    """
    if seed is not None:
        params = _with_seed(params, seed)
    parts = list(iter_samples(params, n))
    data = np.concatenate(parts) if parts else np.zeros(0, dtype=np.int16)
    return SampleBlock(data, meta={"sigma_q": params.sigma_q, "sigma_e": params.sigma_e,
                                   "seed": params.seed})


def generate_electronic_only(params: NoiseParams, n: int, seed: int | None = None) -> SampleBlock:
    """Simulate the laser-off measurement: electronic noise alone."""
    if seed is not None:
        params = _with_seed(params, seed)
    parts = list(iter_samples(params, n, electronic_only=True))
    data = np.concatenate(parts) if parts else np.zeros(0, dtype=np.int16)
    return SampleBlock(data, meta={"sigma_q": 0.0, "sigma_e": params.sigma_e,
                                   "seed": params.seed})


def _with_seed(params: NoiseParams, seed: int) -> NoiseParams:
    return NoiseParams(params.sigma_q, params.sigma_e, seed, params.ar_coefficient)


def _check_format(fmt: str) -> None:
    if fmt not in CAPTURE_FORMATS:
        raise ValueError(f"unknown capture format {fmt!r}; expected one of {CAPTURE_FORMATS}")


def load_capture(path, format: str = "s16le") -> SampleBlock:
    """Read a raw capture file of signed 16-bit little-endian samples."""
    _check_format(format)
    size = os.path.getsize(path)
    if size % 2:
        raise CaptureFormatError(f"truncated sample: {path} has odd length {size}")
    data = np.fromfile(path, dtype="<i2")
    return SampleBlock(data.astype(np.int16, copy=False))


def iter_capture(path, chunk: int = 1 << 20, format: str = "s16le") -> Iterator[np.ndarray]:
    """Stream a capture file in chunks of at most ``chunk`` samples."""
    _check_format(format)
    size = os.path.getsize(path)
    if size % 2:
        raise CaptureFormatError(f"truncated sample: {path} has odd length {size}")
    with open(path, "rb") as fh:
        while True:
            buf = fh.read(2 * chunk)
            if not buf:
                break
            yield np.frombuffer(buf, dtype="<i2").astype(np.int16)
