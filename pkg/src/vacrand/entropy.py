"""Quantum-entropy budget of the digitized noise.

Total noise is modelled as quantum plus electronic noise, independent and
additive. With the electronic part assumed fully known to an adversary, the
usable entropy per sample is the Shannon entropy of the quantum part alone.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.special import ndtr

from vacrand.source import ADC_BITS, ADC_MAX, ADC_MIN

TWO_PI_E = 2.0 * math.pi * math.e


class EntropyModelError(ValueError):
    """The noise decomposition leaves no quantum contribution."""


def _samples(block) -> np.ndarray:
    return np.asarray(getattr(block, "samples", block), dtype=np.float64)


def sample_stddev(block) -> float:
    """Population standard deviation around the empirical mean."""
    x = _samples(block)
    if x.size < 2:
        raise ValueError("need at least 2 samples")
    mean = math.fsum(x) / x.size
    d = x - mean
    return math.sqrt(math.fsum(d * d) / x.size)


def sigma_quantum(sigma_t: float, sigma_e: float) -> float:
    if sigma_e < 0 or not math.isfinite(sigma_t) or not math.isfinite(sigma_e):
        raise ValueError("noise levels must be finite and non-negative")
    if sigma_e >= sigma_t:
        raise EntropyModelError(
            "electronic noise dominates; no extractable quantum entropy under this model")
    return math.sqrt((sigma_t - sigma_e) * (sigma_t + sigma_e))


def bin_probabilities(sigma: float) -> np.ndarray:
    """Probability of each ADC code for a zero-mean Gaussian of width ``sigma``.

    Unit-width bins centred on the integers; the two edge codes absorb the
    tails beyond the ADC range, as a saturating digitizer would.
    """
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    x = np.arange(ADC_MIN, ADC_MAX + 1, dtype=np.float64)
    upper = (x + 0.5) / sigma
    lower = (x - 0.5) / sigma
    # difference of upper-tail masses on the positive side keeps tail bins accurate
    p = np.where(x >= 0, ndtr(-lower) - ndtr(-upper), ndtr(upper) - ndtr(lower))
    p[0] = ndtr((ADC_MIN + 0.5) / sigma)
    p[-1] = ndtr(-(ADC_MAX - 0.5) / sigma)
    return p


def raw_bit_probability(sigma: float, bit: int) -> float:
    """P(bit ``bit`` of the two's-complement ADC code is 1) for Gaussian input.

    Useful for predicting how biased an unprocessed sample bit is. Bits of a
    zero-centred symmetric distribution come out close to 1/2, the sign bit
    only off by the probability mass of the code 0 bin over two.
    """
    if not 0 <= bit < ADC_BITS:
        raise ValueError(f"bit must be in [0, {ADC_BITS})")
    p = bin_probabilities(sigma)
    codes = np.arange(ADC_MIN, ADC_MAX + 1) & ((1 << ADC_BITS) - 1)
    return math.fsum(p[(codes >> bit) & 1 == 1])


def entropy_discrete_gaussian(sigma: float) -> float:
    """Shannon entropy in bits of the quantized Gaussian over the 16-bit code range."""
    p = bin_probabilities(sigma)
    p = p[p > 0]
    terms = -p * np.log2(p)
    return math.fsum(terms)


def entropy_closed_form(sigma: float) -> float:
    """Differential entropy of a Gaussian in bits, log2(sqrt(2 pi e) sigma)."""
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    return math.log2(math.sqrt(TWO_PI_E) * sigma)


def footnote_bound(sigma: float) -> float:
    """Bound on |discrete - differential| entropy, log2(a)/a with a = sqrt(2 pi) sigma."""
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    a = math.sqrt(2.0 * math.pi) * sigma
    if a <= 1.0:
        raise ValueError("bound defined only for sqrt(2 pi) sigma > 1")
    return math.log2(a) / a


def shannon_entropy(p) -> float:
    p = np.asarray(p, dtype=np.float64)
    p = p[p > 0]
    return math.fsum(-p * np.log2(p))


def conditional_entropy_demo(dist_q: dict, dist_e: dict, atol: float = 1e-9):
    """Return (H(X_q + X_e | X_e), H(X_q)) by exhaustive enumeration.

    ``dist_q`` and ``dist_e`` map integer outcomes to probabilities and are
    combined as independent variables.
    """
    for name, d in (("dist_q", dist_q), ("dist_e", dist_e)):
        total = math.fsum(d.values())
        if abs(total - 1.0) > atol or any(v < 0 for v in d.values()):
            raise ValueError(f"{name} is not a normalized distribution (sum={total})")
    if len(dist_q) * len(dist_e) > 10**4:
        raise ValueError("joint support too large for enumeration")
    joint: dict[tuple, float] = {}
    for q, pq in dist_q.items():
        for e, pe in dist_e.items():
            key = (q + e, e)
            joint[key] = joint.get(key, 0.0) + pq * pe
    # H(T | E) = H(T, E) - H(E)
    h_te = shannon_entropy(list(joint.values()))
    h_e = shannon_entropy(list(dist_e.values()))
    return h_te - h_e, shannon_entropy(list(dist_q.values()))


def discretized_gaussian(sigma: float, lo: int, hi: int) -> dict:
    """Gaussian mass on the integers lo..hi, renormalized."""
    x = np.arange(lo, hi + 1, dtype=np.float64)
    p = ndtr((x + 0.5) / sigma) - ndtr((x - 0.5) / sigma)
    p /= p.sum()
    return {int(k): float(v) for k, v in zip(x, p)}


@dataclass
class EntropyReport:
    sigma_t: float
    sigma_e: float
    sigma_q: float
    h_sum: float
    h_closed: float
    bound: float
    max_extraction_ratio: float
    extractor_ratio: float = 0.5

    @property
    def within_bound(self) -> bool:
        return abs(self.h_sum - self.h_closed) <= self.bound

    def as_dict(self) -> dict:
        d = asdict(self)
        d["within_bound"] = self.within_bound
        return d

    def lines(self) -> list[str]:
        return [f"{k}: {v}" for k, v in self.as_dict().items()]


def entropy_report(sigma_t: float, sigma_e: float, extractor_ratio: float = 0.5) -> EntropyReport:
    sq = sigma_quantum(sigma_t, sigma_e)
    h = entropy_discrete_gaussian(sq)
    return EntropyReport(sigma_t=sigma_t, sigma_e=sigma_e, sigma_q=sq, h_sum=h,
                         h_closed=entropy_closed_form(sq), bound=footnote_bound(sq),
                         max_extraction_ratio=h / ADC_BITS, extractor_ratio=extractor_ratio)


def entropy_report_from_blocks(total, electronic, extractor_ratio: float = 0.5) -> EntropyReport:
    return entropy_report(sample_stddev(total), sample_stddev(electronic), extractor_ratio)
