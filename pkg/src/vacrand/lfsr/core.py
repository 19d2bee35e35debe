"""Packed 63-cell LFSR extractor.

Register banks are held as integers with cell ``j`` at bit ``j``. The serial
machine shifts cells upward and feeds ``s62 ^ s61 ^ d`` into cell 0. The
word-parallel machine keeps a second bank ``m`` and consumes one 16-bit ADC
word per step::

    m'_j  = s_j                      j = 0..62
    s'_j  = m_j ^ m_{j+1} ^ d_j      j = 0..61
    s'_62 = m_62 ^ s_0

with every right-hand side taken from the state before the step. ``d_j`` is
bit ``j`` of the word's two's-complement pattern (LSB is ``d_0``). After each
step the output byte is the snapshot ``m_0, m_2, ..., m_14`` with ``m_0`` as
its least significant bit.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from vacrand.lfsr import _kernel

N_CELLS = 63
CELL_MASK = (1 << N_CELLS) - 1
WORD_WIDTH = 16
WORD_MASK = (1 << WORD_WIDTH) - 1
OUTPUT_TAPS = (0, 2, 4, 6, 8, 10, 12, 14)
DEFAULT_WARMUP = N_CELLS


def _check_bank(name, v):
    if not isinstance(v, (int, np.integer)) or not 0 <= int(v) <= CELL_MASK:
        raise ValueError(f"{name} must be a {N_CELLS}-bit non-negative integer")


def pack_cells(cells: Iterable[int]) -> int:
    cells = list(cells)
    if len(cells) != N_CELLS:
        raise ValueError(f"expected {N_CELLS} cells, got {len(cells)}")
    v = 0
    for j, c in enumerate(cells):
        if c not in (0, 1):
            raise ValueError("cells must be 0 or 1")
        v |= c << j
    return v


def unpack_cells(v: int) -> list[int]:
    return [(v >> j) & 1 for j in range(N_CELLS)]


@dataclass(frozen=True)
class SerialLfsrState:
    s: int = 0

    def __post_init__(self):
        _check_bank("s", self.s)

    @classmethod
    def from_cells(cls, cells):
        return cls(pack_cells(cells))

    def cells(self) -> list[int]:
        return unpack_cells(self.s)


@dataclass(frozen=True)
class ParallelLfsrState:
    s: int = 0
    m: int = 0

    def __post_init__(self):
        _check_bank("s", self.s)
        _check_bank("m", self.m)

    @classmethod
    def from_cells(cls, s_cells, m_cells):
        return cls(pack_cells(s_cells), pack_cells(m_cells))

    @classmethod
    def from_int(cls, v: int):
        """Build from a 126-bit vector: ``s`` in bits 0..62, ``m`` in 63..125."""
        return cls(v & CELL_MASK, (v >> N_CELLS) & CELL_MASK)

    def to_int(self) -> int:
        return self.s | (self.m << N_CELLS)

    def __xor__(self, other):
        return ParallelLfsrState(self.s ^ other.s, self.m ^ other.m)


@dataclass(frozen=True)
class ExtractorConfig:
    warmup_steps: int = DEFAULT_WARMUP
    initial_state: ParallelLfsrState = field(default_factory=ParallelLfsrState)
    output_taps: tuple = OUTPUT_TAPS
    word_width: int = WORD_WIDTH

    def __post_init__(self):
        if self.warmup_steps < 0:
            raise ValueError("warmup_steps must be non-negative")
        if tuple(self.output_taps) != OUTPUT_TAPS:
            raise ValueError(f"output taps are fixed to {OUTPUT_TAPS}")
        if self.word_width != WORD_WIDTH:
            raise ValueError(f"word width is fixed to {WORD_WIDTH}")


def serial_step(state: SerialLfsrState, d: int) -> SerialLfsrState:
    s = state.s
    fb = ((s >> 62) ^ (s >> 61) ^ d) & 1
    return SerialLfsrState(((s << 1) & CELL_MASK) | fb)


def parallel_step(state: ParallelLfsrState, word: int) -> ParallelLfsrState:
    s, m = state.s, state.m
    ns = m ^ (m >> 1) ^ ((s & 1) << 62) ^ (word & WORD_MASK)
    return ParallelLfsrState(ns, s)


def parallel_step_sequential(state: ParallelLfsrState, word: int) -> ParallelLfsrState:
    """Alternative reading where ``s'_62`` uses the freshly computed ``s'_0``.

    Not used for output; kept for the serial/parallel equivalence study.
    """
    s, m = state.s, state.m
    low = (m ^ (m >> 1) ^ (word & WORD_MASK)) & ((1 << 62) - 1)
    ns = low | ((((m >> 62) ^ low) & 1) << 62)
    return ParallelLfsrState(ns, s)


def extract_bits(state: ParallelLfsrState, config: ExtractorConfig | None = None) -> int:
    m = state.m
    out = 0
    for k, j in enumerate(OUTPUT_TAPS):
        out |= ((m >> j) & 1) << k
    return out


@dataclass
class BitStream:
    """Bits in generation order, packed LSB-first within each byte.

    ``n_bits`` is exact; pad bits in the last byte are zero.
    """

    data: np.ndarray
    n_bits: int

    def __post_init__(self):
        self.data = np.ascontiguousarray(self.data, dtype=np.uint8)
        if not 0 <= self.n_bits <= 8 * self.data.size or self.data.size != (self.n_bits + 7) // 8:
            raise ValueError("n_bits inconsistent with data length")

    @classmethod
    def from_bits(cls, bits) -> "BitStream":
        bits = np.asarray(bits, dtype=np.uint8)
        if bits.size and bits.max() > 1:
            raise ValueError("bits must be 0 or 1")
        return cls(np.packbits(bits, bitorder="little"), int(bits.size))

    @classmethod
    def from_bytes(cls, data, n_bits: int | None = None) -> "BitStream":
        arr = np.frombuffer(bytes(data), dtype=np.uint8) if not isinstance(data, np.ndarray) else data
        if n_bits is None:
            n_bits = 8 * arr.size
        return cls(arr.copy(), n_bits)

    def bits(self) -> np.ndarray:
        return np.unpackbits(self.data, bitorder="little", count=self.n_bits)

    def tobytes(self) -> bytes:
        return self.data.tobytes()

    def __len__(self):
        return self.n_bits

    def __eq__(self, other):
        if not isinstance(other, BitStream):
            return NotImplemented
        return self.n_bits == other.n_bits and np.array_equal(self.data, other.data)


class Extractor:
    """Stateful streaming extractor.

    Feed sample chunks in order; each call returns the output bytes for that
    chunk after warm-up has been discarded. Chunk boundaries never affect the
    produced stream.
    """

    def __init__(self, config: ExtractorConfig | None = None):
        self.config = config or ExtractorConfig()
        self._s = np.uint64(self.config.initial_state.s)
        self._m = np.uint64(self.config.initial_state.m)
        self._to_skip = self.config.warmup_steps
        self.samples_in = 0

    @property
    def state(self) -> ParallelLfsrState:
        return ParallelLfsrState(int(self._s), int(self._m))

    @property
    def warmed_up(self) -> bool:
        return self._to_skip == 0

    def feed(self, samples) -> np.ndarray:
        x = np.ascontiguousarray(samples, dtype=np.int16)
        self.samples_in += x.size
        if self._to_skip:
            k = min(self._to_skip, x.size)
            self._s, self._m = _kernel.advance_parallel(x[:k], self._s, self._m)
            self._to_skip -= k
            x = x[k:]
        out = np.empty(x.size, dtype=np.uint8)
        if x.size:
            self._s, self._m = _kernel.run_parallel(x, out, self._s, self._m)
        return out


def extract_stream(samples, config: ExtractorConfig | None = None) -> BitStream:
    """Extract 8 bits per sample past warm-up from a block or array of samples."""
    config = config or ExtractorConfig()
    x = getattr(samples, "samples", samples)
    x = np.asarray(x, dtype=np.int16)
    if x.size < config.warmup_steps:
        warnings.warn(f"{x.size} samples do not cover the {config.warmup_steps}-step warm-up; "
                      "output is empty", RuntimeWarning, stacklevel=2)
    out = Extractor(config).feed(x)
    return BitStream(out, 8 * out.size)
