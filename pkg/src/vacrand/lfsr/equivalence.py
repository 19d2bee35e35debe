"""Search for a correspondence between the word-parallel and serial machines.

The parallel recursion is claimed to perform the serial recursion with a
whole word injected at once, but the state layout, bit order and step
alignment are left implicit. This module tries every combination in a small
candidate space by direct simulation:

* reading of the ``s'_62`` update: ``simultaneous`` (pre-step ``s_0``, the
  normative extractor) or ``sequential`` (the freshly computed ``s'_0``);
* word bit order fed to the serial machine: ``lsb`` or ``msb`` first;
* cell map between banks and the serial register: ``identity`` or
  ``reversed`` (parallel cell j is serial cell 62-j);
* serial steps per word: 16 (bits only) or 63 (bits, then zeros);
* chains: ``1`` (``s`` tracks a single serial register, ``m`` lags by one
  word) or ``2`` (``s`` and ``m`` are two serial registers that take
  alternate words).

A candidate is discovered on a prefix of the word sequence started from a
random state, then validated on the whole sequence.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from vacrand.lfsr.core import (
    CELL_MASK,
    N_CELLS,
    WORD_WIDTH,
    ParallelLfsrState,
    parallel_step,
    parallel_step_sequential,
)

READINGS = {"simultaneous": parallel_step, "sequential": parallel_step_sequential}
BIT_ORDERS = ("lsb", "msb")
CELL_MAPS = ("identity", "reversed")
STEPS_PER_WORD = (16, 63)
CHAINS = (1, 2)

_REV = [0] * 256
for _i in range(256):
    _REV[_i] = int(f"{_i:08b}"[::-1], 2)


def _reverse63(v: int) -> int:
    # reverse 64 bits bytewise, then drop the spare low bit
    r = 0
    for _ in range(8):
        r = (r << 8) | _REV[v & 0xFF]
        v >>= 8
    return r >> 1


@dataclass(frozen=True)
class Mapping:
    reading: str
    bit_order: str
    cell_map: str
    serial_steps_per_word: int
    chains: int

    def describe(self) -> str:
        return (f"reading={self.reading} bit_order={self.bit_order} cell_map={self.cell_map} "
                f"serial_steps_per_word={self.serial_steps_per_word} chains={self.chains}")


@dataclass
class EquivalenceReport:
    n_words: int
    prefix: int
    candidates_tried: int
    consistent_on_prefix: list = field(default_factory=list)
    mapping: Mapping | None = None
    validated: bool = False
    failed_at: int | None = None
    reading_results: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.mapping is not None and self.validated

    def lines(self) -> list[str]:
        out = [f"words: {self.n_words}", f"discovery prefix: {self.prefix}",
               f"candidates tried: {self.candidates_tried}",
               f"consistent on prefix: {len(self.consistent_on_prefix)}"]
        for reading, n in self.reading_results.items():
            out.append(f"reading {reading}: {n} consistent candidate(s)")
        if self.mapping is not None:
            out.append(f"mapping: {self.mapping.describe()}")
        if self.failed_at is not None:
            out.append(f"first inconsistency at word {self.failed_at}")
        out.append(f"result: {'PASS' if self.passed else 'FAIL'}")
        return out


def _map_cells(v: int, cell_map: str) -> int:
    return _reverse63(v) if cell_map == "reversed" else v


def _serial_advance(r: int, word: int, mapping: Mapping) -> int:
    w = word & ((1 << WORD_WIDTH) - 1)
    for k in range(mapping.serial_steps_per_word):
        if k < WORD_WIDTH:
            d = (w >> k) & 1 if mapping.bit_order == "lsb" else (w >> (WORD_WIDTH - 1 - k)) & 1
        else:
            d = 0
        r = ((r << 1) & CELL_MASK) | (((r >> 62) ^ (r >> 61) ^ d) & 1)
    return r


def check_mapping(mapping: Mapping, words, state: ParallelLfsrState) -> int | None:
    """Simulate both machines; return the index of the first mismatching word, or None."""
    step = READINGS[mapping.reading]
    cm = mapping.cell_map
    if mapping.chains == 2:
        # the next s is computed from m, so m's chain takes word 0
        chains = [_map_cells(state.m, cm), _map_cells(state.s, cm)]
    else:
        serial = _map_cells(state.s, cm)
        previous = None
    for t, w in enumerate(words):
        state = step(state, int(w))
        if mapping.chains == 2:
            c = t & 1
            chains[c] = _serial_advance(chains[c], int(w), mapping)
            if _map_cells(state.s, cm) != chains[c] or _map_cells(state.m, cm) != chains[1 - c]:
                return t
        else:
            previous, serial = serial, _serial_advance(serial, int(w), mapping)
            if _map_cells(state.s, cm) != serial or _map_cells(state.m, cm) != previous:
                return t
    return None


def candidate_mappings():
    for combo in itertools.product(READINGS, BIT_ORDERS, CELL_MAPS, STEPS_PER_WORD, CHAINS):
        yield Mapping(*combo)


def serial_parallel_equivalence(words, prefix: int = 64, seed: int = 0,
                                initial_state: ParallelLfsrState | None = None) -> EquivalenceReport:
    """Discover a serial/parallel correspondence on a prefix and validate it on ``words``.

    The normative (simultaneous) reading is preferred when several readings
    fit. A FAIL report is a finding about the recursion, not an error.
    """
    words = [int(w) & 0xFFFF for w in words]
    if initial_state is None:
        rnd = random.Random(seed)
        initial_state = ParallelLfsrState(rnd.getrandbits(N_CELLS), rnd.getrandbits(N_CELLS))
    head = words[:prefix]
    report = EquivalenceReport(len(words), len(head), 0)
    for mapping in candidate_mappings():
        report.candidates_tried += 1
        if check_mapping(mapping, head, initial_state) is None:
            report.consistent_on_prefix.append(mapping)
    for reading in READINGS:
        report.reading_results[reading] = sum(
            1 for c in report.consistent_on_prefix if c.reading == reading)
    if not report.consistent_on_prefix:
        return report
    report.mapping = report.consistent_on_prefix[0]
    report.failed_at = check_mapping(report.mapping, words, initial_state)
    report.validated = report.failed_at is None
    return report
