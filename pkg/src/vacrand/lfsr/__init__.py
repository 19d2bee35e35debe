"""63-cell LFSR randomness extractor."""

from vacrand.lfsr.core import (
    DEFAULT_WARMUP,
    N_CELLS,
    OUTPUT_TAPS,
    WORD_WIDTH,
    BitStream,
    Extractor,
    ExtractorConfig,
    ParallelLfsrState,
    SerialLfsrState,
    extract_bits,
    extract_stream,
    parallel_step,
    parallel_step_sequential,
    serial_step,
)
from vacrand.lfsr.equivalence import EquivalenceReport, Mapping, serial_parallel_equivalence
from vacrand.lfsr.gf2 import check_order, maximal_length_report, transition_matrix, trial_division

__all__ = [
    "DEFAULT_WARMUP", "N_CELLS", "OUTPUT_TAPS", "WORD_WIDTH",
    "BitStream", "Extractor", "ExtractorConfig", "ParallelLfsrState", "SerialLfsrState",
    "extract_bits", "extract_stream", "parallel_step", "parallel_step_sequential", "serial_step",
    "EquivalenceReport", "Mapping", "serial_parallel_equivalence",
    "check_order", "maximal_length_report", "transition_matrix", "trial_division",
]
