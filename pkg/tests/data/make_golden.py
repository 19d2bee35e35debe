"""Regenerate the golden sample and stream files.

    python3 tests/data/make_golden.py

The samples come from the simulator with a fixed seed. The stream is computed
by the cell-by-cell reference model only, so the packed extractor is checked
against an independent implementation.
"""

from pathlib import Path

from vacrand.lfsr import reference
from vacrand.source import NoiseParams, generate_samples

HERE = Path(__file__).parent
N_SAMPLES = 4096
SEED = 20240601


def main():
    block = generate_samples(NoiseParams(seed=SEED), N_SAMPLES)
    block.store(HERE / "golden_samples.s16")
    stream = reference.extract_stream(block.samples.tolist(), warmup=63)
    (HERE / "golden_stream.bin").write_bytes(stream)
    print(f"{N_SAMPLES} samples -> {len(stream)} bytes")


if __name__ == "__main__":
    main()
