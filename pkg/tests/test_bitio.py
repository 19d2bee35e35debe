import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vacrand.bitio import ASCII_LINE_BITS, export_bits, import_bits
from vacrand.lfsr.core import BitStream


def test_packed_example(tmp_path):
    p = tmp_path / "b.bin"
    export_bits([1, 0, 1, 1, 0, 0, 0, 0], p)
    assert p.read_bytes() == b"\x0d"
    assert not (tmp_path / "b.bin.nbits").exists()


@pytest.mark.parametrize("fmt", ["packed", "ascii01"])
def test_empty_stream(tmp_path, fmt):
    p = tmp_path / "e"
    export_bits([], p, fmt)
    assert p.read_bytes() == b""
    assert len(import_bits(p, fmt)) == 0


def test_partial_byte_sidecar(tmp_path):
    p = tmp_path / "p.bin"
    export_bits([1, 1, 0, 1, 1], p)
    assert p.read_bytes() == b"\x1b"
    assert (tmp_path / "p.bin.nbits").read_text().strip() == "5"
    assert import_bits(p).bits().tolist() == [1, 1, 0, 1, 1]
    # rewriting a whole-byte stream removes the stale sidecar
    export_bits([0] * 16, p)
    assert not (tmp_path / "p.bin.nbits").exists()
    assert len(import_bits(p)) == 16


def test_sidecar_mismatch(tmp_path):
    p = tmp_path / "m.bin"
    p.write_bytes(b"\x00\x00")
    (tmp_path / "m.bin.nbits").write_text("30\n")
    with pytest.raises(ValueError, match="sidecar"):
        import_bits(p)


def test_ascii_layout(tmp_path):
    p = tmp_path / "a.txt"
    bits = np.random.default_rng(3).integers(0, 2, size=ASCII_LINE_BITS + 5).astype(np.uint8)
    export_bits(bits, p, "ascii01")
    lines = p.read_bytes().split(b"\n")
    assert lines[-1] == b""
    assert [len(x) for x in lines[:-1]] == [ASCII_LINE_BITS, 5]
    assert lines[1] == bytes(bits[-5:] + ord("0"))


def test_ascii_rejects_garbage(tmp_path):
    p = tmp_path / "g.txt"
    p.write_bytes(b"0101x\n")
    with pytest.raises(ValueError, match="characters other than"):
        import_bits(p, "ascii01")


def test_ascii_accepts_crlf(tmp_path):
    p = tmp_path / "c.txt"
    p.write_bytes(b"0110\r\n1\r\n")
    assert import_bits(p, "ascii01").bits().tolist() == [0, 1, 1, 0, 1]


def test_unknown_format(tmp_path):
    with pytest.raises(ValueError, match="unknown bit format"):
        export_bits([1], tmp_path / "x", "hex")
    with pytest.raises(ValueError, match="unknown bit format"):
        import_bits(tmp_path / "x", "hex")


@pytest.mark.parametrize("fmt", ["packed", "ascii01"])
def test_round_trip_million_bits(tmp_path, fmt):
    bits = np.random.default_rng(11).integers(0, 2, size=1_000_000).astype(np.uint8)
    p = tmp_path / "r"
    export_bits(BitStream.from_bits(bits), p, fmt)
    assert np.array_equal(import_bits(p, fmt).bits(), bits)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 1), max_size=200), st.sampled_from(["packed", "ascii01"]))
def test_round_trip_property(tmp_path_factory, bits, fmt):
    p = tmp_path_factory.mktemp("rt") / "x"
    export_bits(bits, p, fmt)
    got = import_bits(p, fmt)
    assert got == BitStream.from_bits(bits)
