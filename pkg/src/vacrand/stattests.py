"""Fast statistical self-tests on extracted bits.

A subset of the frequency-type tests from the NIST SP 800-22 battery: enough
to catch a broken extractor quickly. The full NIST and Dieharder batteries
run externally on files written by :mod:`vacrand.bitio`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincc

DEFAULT_ALPHA = 0.01
MIN_BITS = 100


@dataclass
class TestReport:
    test_name: str
    n_bits: int
    statistic: float
    p_value: float
    alpha: float = DEFAULT_ALPHA

    __test__ = False  # not a pytest class

    @property
    def passed(self) -> bool:
        return self.p_value >= self.alpha

    def line(self) -> str:
        return (f"{self.test_name}: n_bits={self.n_bits} statistic={self.statistic:.6g} "
                f"p_value={self.p_value:.6g} {'PASS' if self.passed else 'FAIL'}")


def _as_bits(bits) -> np.ndarray:
    if hasattr(bits, "bits"):
        bits = bits.bits()
    return np.asarray(bits, dtype=np.uint8)


def _gate(n: int, need: int, name: str) -> None:
    if n < need:
        raise ValueError(f"{name} needs at least {need} bits, got {n}")


def _normal_cdf(x):
    return 0.5 * np.vectorize(math.erfc)(-np.asarray(x, dtype=np.float64) / math.sqrt(2.0))


def monobit_frequency(bits, alpha=DEFAULT_ALPHA, min_bits=MIN_BITS) -> TestReport:
    b = _as_bits(bits)
    n = b.size
    _gate(n, max(min_bits, 1), "monobit")
    total = 2 * int(np.count_nonzero(b)) - n
    s_obs = abs(total) / math.sqrt(n)
    return TestReport("monobit", n, s_obs, math.erfc(s_obs / math.sqrt(2.0)), alpha)


def runs_test(bits, alpha=DEFAULT_ALPHA, min_bits=MIN_BITS) -> TestReport:
    """Runs test; p is 0 by convention when the ones-proportion pre-check fails."""
    b = _as_bits(bits)
    n = b.size
    _gate(n, max(min_bits, 2), "runs")
    pi = np.count_nonzero(b) / n
    runs = 1 + int(np.count_nonzero(b[1:] != b[:-1]))
    if abs(pi - 0.5) >= 2.0 / math.sqrt(n):
        return TestReport("runs", n, float(runs), 0.0, alpha)
    num = abs(runs - 2.0 * n * pi * (1.0 - pi))
    den = 2.0 * math.sqrt(2.0 * n) * pi * (1.0 - pi)
    return TestReport("runs", n, float(runs), math.erfc(num / den), alpha)


def block_frequency(bits, block_len=128, alpha=DEFAULT_ALPHA, min_bits=None) -> TestReport:
    b = _as_bits(bits)
    n = b.size
    _gate(n, 100 * block_len if min_bits is None else max(min_bits, block_len), "block_frequency")
    n_blocks = n // block_len
    props = b[: n_blocks * block_len].reshape(n_blocks, block_len).sum(axis=1) / block_len
    chi2 = 4.0 * block_len * float(np.sum((props - 0.5) ** 2))
    return TestReport("blockfreq", n, chi2, float(gammaincc(n_blocks / 2.0, chi2 / 2.0)), alpha)


def cumulative_sums(bits, alpha=DEFAULT_ALPHA, min_bits=MIN_BITS, reverse=False) -> TestReport:
    """Cumulative sums (forward mode unless ``reverse``)."""
    b = _as_bits(bits)
    n = b.size
    _gate(n, max(min_bits, 1), "cusum")
    x = 2 * b.astype(np.int64) - 1
    if reverse:
        x = x[::-1]
    z = int(np.max(np.abs(np.cumsum(x))))
    sq = math.sqrt(n)
    # k ranges truncate toward zero, as in the STS reference code
    k1 = np.arange(math.trunc((-n / z + 1) / 4), math.trunc((n / z - 1) / 4) + 1)
    k2 = np.arange(math.trunc((-n / z - 3) / 4), math.trunc((n / z - 1) / 4) + 1)
    s1 = np.sum(_normal_cdf((4 * k1 + 1) * z / sq) - _normal_cdf((4 * k1 - 1) * z / sq))
    s2 = np.sum(_normal_cdf((4 * k2 + 3) * z / sq) - _normal_cdf((4 * k2 + 1) * z / sq))
    p = float(min(1.0, max(0.0, 1.0 - s1 + s2)))
    return TestReport("cusum", n, float(z), p, alpha)


TESTS = {
    "monobit": monobit_frequency,
    "runs": runs_test,
    "blockfreq": block_frequency,
    "cusum": cumulative_sums,
}


def run_tests(bits, names=tuple(TESTS), alpha=DEFAULT_ALPHA) -> list[TestReport]:
    b = _as_bits(bits)
    unknown = set(names) - set(TESTS)
    if unknown:
        raise ValueError(f"unknown tests: {sorted(unknown)}")
    return [TESTS[name](b, alpha=alpha) for name in names]


def segment_pass_fractions(bits, segment_bits=100_000, names=tuple(TESTS),
                           alpha=DEFAULT_ALPHA, n_segments=None) -> dict:
    """Fraction of disjoint segments passing each test at ``alpha``."""
    b = _as_bits(bits)
    available = b.size // segment_bits
    k = available if n_segments is None else min(n_segments, available)
    if k == 0:
        raise ValueError("stream shorter than one segment")
    passes = {name: 0 for name in names}
    for i in range(k):
        seg = b[i * segment_bits:(i + 1) * segment_bits]
        for name in names:
            passes[name] += TESTS[name](seg, alpha=alpha).passed
    return {name: passes[name] / k for name in names}
