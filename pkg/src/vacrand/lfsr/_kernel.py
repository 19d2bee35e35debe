"""Compiled inner loop of the word-parallel extractor."""

import numba
import numpy as np

_ONE = np.uint64(1)
_SH62 = np.uint64(62)


@numba.njit(cache=True, nogil=True)
def _compress_even(x):
    # gather bits 0,2,..,14 into bits 0..7
    x = x & np.uint64(0x5555)
    x = (x | (x >> np.uint64(1))) & np.uint64(0x3333)
    x = (x | (x >> np.uint64(2))) & np.uint64(0x0F0F)
    x = (x | (x >> np.uint64(4))) & np.uint64(0x00FF)
    return x


@numba.njit(cache=True, nogil=True)
def run_parallel(samples, out, s, m):
    """Step the register banks once per sample and snapshot the taps.

    ``out[i]`` receives the tap byte after consuming ``samples[i]``.
    Returns the final ``(s, m)``.
    """
    for i in range(samples.shape[0]):
        d = np.uint64(np.uint16(samples[i]))
        ns = m ^ (m >> _ONE) ^ ((s & _ONE) << _SH62) ^ d
        m = s
        s = ns
        out[i] = np.uint8(_compress_even(m))
    return s, m


@numba.njit(cache=True, nogil=True)
def advance_parallel(samples, s, m):
    """Like ``run_parallel`` without producing output (warm-up)."""
    for i in range(samples.shape[0]):
        d = np.uint64(np.uint16(samples[i]))
        ns = m ^ (m >> _ONE) ^ ((s & _ONE) << _SH62) ^ d
        m = s
        s = ns
    return s, m
