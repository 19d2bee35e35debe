"""Bit-stream file formats for external test batteries.

``packed``
    Raw bytes, bits LSB-first within each byte (the extractor's native
    layout). A final partial byte is zero-padded; its true bit length is then
    written to a sidecar file ``<path>.nbits`` holding one decimal integer.
    No sidecar means the length is 8 x file size.
``ascii01``
    One character ``0``/``1`` per bit with a newline after every 2**20 bits
    and after the final partial line (the NIST STS ASCII input format).
"""

from __future__ import annotations

import os
import sys

import numpy as np

from vacrand.lfsr.core import BitStream

FORMATS = ("packed", "ascii01")
ASCII_LINE_BITS = 1 << 20


def _sidecar(path) -> str:
    return os.fspath(path) + ".nbits"


def _as_stream(bits) -> BitStream:
    return bits if isinstance(bits, BitStream) else BitStream.from_bits(bits)


def export_bits(bits, path, format: str = "packed") -> None:
    stream = _as_stream(bits)
    if format == "packed":
        with open(path, "wb") as fh:
            fh.write(stream.tobytes())
        side = _sidecar(path)
        if stream.n_bits % 8:
            with open(side, "w") as fh:
                fh.write(f"{stream.n_bits}\n")
        elif os.path.exists(side):
            os.remove(side)
    elif format == "ascii01":
        chars = stream.bits() + ord("0")
        with open(path, "wb") as fh:
            for start in range(0, chars.size, ASCII_LINE_BITS):
                fh.write(chars[start:start + ASCII_LINE_BITS].tobytes())
                fh.write(b"\n")
    else:
        raise ValueError(f"unknown bit format {format!r}; expected one of {FORMATS}")


def import_bits(path, format: str = "packed") -> BitStream:
    if format == "packed":
        data = np.fromfile(path, dtype=np.uint8)
        n_bits = 8 * data.size
        side = _sidecar(path)
        if os.path.exists(side):
            with open(side) as fh:
                n_bits = int(fh.read().strip())
            if (n_bits + 7) // 8 != data.size:
                raise ValueError(f"sidecar length {n_bits} does not match {data.size} bytes")
        return BitStream(data, n_bits)
    if format == "ascii01":
        raw = np.fromfile(path, dtype=np.uint8)
        raw = raw[(raw != ord("\n")) & (raw != ord("\r"))]
        if raw.size and not np.all((raw == ord("0")) | (raw == ord("1"))):
            raise ValueError(f"{path} contains characters other than 0, 1 and newlines")
        return BitStream.from_bits(raw - ord("0"))
    raise ValueError(f"unknown bit format {format!r}; expected one of {FORMATS}")


def write_stdout(data: bytes) -> None:
    """Raw bytes to standard output, e.g. for ``dieharder -g 200``."""
    sys.stdout.buffer.write(data)
    sys.stdout.buffer.flush()
