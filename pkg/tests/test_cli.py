import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from vacrand.bitio import export_bits, import_bits
from vacrand.cli import (
    EXIT_DATA,
    EXIT_IO,
    EXIT_MODEL,
    EXIT_OK,
    EXIT_TEST_FAILED,
    EXIT_USAGE,
    main,
)
from vacrand.lfsr.core import extract_stream
from vacrand.source import NoiseParams, generate_samples, load_capture


@pytest.fixture
def capture(tmp_path):
    p = tmp_path / "cap.s16"
    assert main(["--quiet", "simulate", "--n", "200000", "--seed", "4", "--out", str(p)]) == EXIT_OK
    return p


def test_simulate_matches_library(capture):
    assert np.array_equal(load_capture(capture).samples,
                          generate_samples(NoiseParams(seed=4), 200_000).samples)


def test_global_seed_and_electronic_only(tmp_path):
    p = tmp_path / "e.s16"
    assert main(["--quiet", "--seed", "6", "simulate", "--n", "1000", "--electronic-only",
                 "--out", str(p)]) == EXIT_OK
    x = load_capture(p).samples
    from vacrand.source import generate_electronic_only
    assert np.array_equal(x, generate_electronic_only(NoiseParams(seed=6), 1000).samples)


@pytest.mark.parametrize("fmt, reader", [("packed", "packed"), ("ascii", "ascii01"),
                                         ("ascii01", "ascii01")])
def test_extract_formats(tmp_path, capture, fmt, reader):
    out = tmp_path / "bits"
    assert main(["--quiet", "extract", "--in", str(capture), "--out", str(out),
                 "--format", fmt]) == EXIT_OK
    assert import_bits(out, reader) == extract_stream(load_capture(capture))


def test_extract_to_stdout_subprocess(tmp_path, capture):
    res = subprocess.run([sys.executable, "-m", "vacrand.cli", "extract", "--in", str(capture),
                          "--out", "-"], capture_output=True, check=True)
    assert res.stdout == extract_stream(load_capture(capture)).tobytes()
    assert b"extracted" in res.stderr


def test_extract_with_plot(tmp_path, capture):
    png = tmp_path / "x.png"
    assert main(["--quiet", "extract", "--in", str(capture), "--out", str(tmp_path / "b"),
                 "--plot", str(png)]) == EXIT_OK
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_truncated_capture_exit_code(tmp_path):
    p = tmp_path / "t.s16"
    p.write_bytes(b"\x01\x02\x03")
    assert main(["extract", "--in", str(p), "--out", str(tmp_path / "o")]) == EXIT_DATA


def test_missing_input_exit_code(tmp_path):
    assert main(["extract", "--in", str(tmp_path / "none"), "--out", str(tmp_path / "o")]) == EXIT_IO


def test_bad_parameters_are_usage_errors(tmp_path):
    assert main(["simulate", "--n", "10", "--sigma-q", "-1", "--out", str(tmp_path / "s")]) == EXIT_USAGE
    assert main(["simulate", "--n", "-10", "--out", str(tmp_path / "s")]) == EXIT_USAGE
    assert main(["shotnoise", "--current", "0"]) == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["extract", "--format", "hex", "--in", "a", "--out", "b"])
    assert exc.value.code == EXIT_USAGE


def test_entropy_from_sigmas(capsys, tmp_path):
    js = tmp_path / "e.json"
    png = tmp_path / "e.png"
    assert main(["entropy", "--sigma-t", "4504.41", "--sigma-e", "1481.8", "--json", str(js),
                 "--plot", str(png)]) == EXIT_OK
    out = capsys.readouterr().out
    kv = dict(line.split(": ", 1) for line in out.strip().splitlines())
    assert abs(float(kv["sigma_q"]) - 4253.7) < 0.1
    assert abs(float(kv["h_sum"]) - 14.10) < 0.02
    doc = json.loads(js.read_text())
    assert doc["within_bound"] is True and png.exists()


def test_entropy_from_files(capsys, tmp_path):
    tot, ele = tmp_path / "t.s16", tmp_path / "e.s16"
    main(["--quiet", "simulate", "--n", "500000", "--seed", "1", "--out", str(tot)])
    main(["--quiet", "simulate", "--n", "500000", "--seed", "2", "--electronic-only", "--out", str(ele)])
    capsys.readouterr()
    assert main(["entropy", "--total", str(tot), "--electronic", str(ele), "--json", "-"]) == EXIT_OK
    out = capsys.readouterr().out
    doc = json.loads(out[out.index("{"):])
    assert abs(doc["h_sum"] - 14.1) < 0.05


def test_entropy_model_error(tmp_path):
    assert main(["entropy", "--sigma-t", "10", "--sigma-e", "20"]) == EXIT_MODEL
    assert main(["entropy"]) == EXIT_USAGE


def test_shotnoise(capsys):
    assert main(["shotnoise"]) == EXIT_OK
    kv = dict(line.split(": ") for line in capsys.readouterr().out.strip().splitlines())
    assert abs(float(kv["dbm"]) + 52.0) < 0.1


def test_autocorr_table_and_plot(tmp_path, capture, capsys):
    table, png = tmp_path / "a.csv", tmp_path / "a.png"
    assert main(["autocorr", "--in", str(capture), "--max-lag", "20", "--table", str(table),
                 "--plot", str(png)]) == EXIT_OK
    rows = list(csv.reader(table.open()))
    assert rows[0] == ["lag", "value"] and len(rows) == 21
    assert png.exists()
    assert "fraction_within" in capsys.readouterr().out


def test_dist(tmp_path, capture, capsys):
    table, png = tmp_path / "d.csv", tmp_path / "d.png"
    assert main(["dist", "--in", str(capture), "--bins", "64", "--table", str(table),
                 "--plot", str(png)]) == EXIT_OK
    rows = list(csv.reader(table.open()))
    assert rows[0] == ["bin_low", "bin_high", "count"] and len(rows) == 65
    assert sum(int(r[2]) for r in rows[1:]) == 200_000


def test_test_command_pass_and_fail(tmp_path, capture, capsys):
    good = tmp_path / "g.bin"
    main(["--quiet", "extract", "--in", str(capture), "--out", str(good)])
    table = tmp_path / "t.csv"
    assert main(["test", "--in", str(good), "--table", str(table)]) == EXIT_OK
    assert len(list(csv.reader(table.open()))) == 5
    bad = tmp_path / "b.bin"
    export_bits(np.zeros(200_000, dtype=np.uint8), bad)
    assert main(["test", "--in", str(bad), "--tests", "monobit"]) == EXIT_TEST_FAILED
    assert main(["test", "--in", str(bad), "--tests", "spectral"]) == EXIT_USAGE


def test_test_command_segments(tmp_path, capture, capsys):
    good = tmp_path / "g.bin"
    main(["--quiet", "extract", "--in", str(capture), "--out", str(good)])
    assert main(["test", "--in", str(good), "--segment-bits", "100000",
                 "--min-pass-fraction", "0.5"]) == EXIT_OK
    assert "pass_fraction" in capsys.readouterr().out


def test_export_round_trip(tmp_path):
    bits = np.random.default_rng(0).integers(0, 2, size=1001).astype(np.uint8)
    src, asc, back = tmp_path / "s.bin", tmp_path / "s.txt", tmp_path / "b.bin"
    export_bits(bits, src)
    assert main(["export", "--in", str(src), "--format", "ascii01", "--out", str(asc)]) == EXIT_OK
    assert main(["export", "--in", str(asc), "--in-format", "ascii01", "--format", "packed",
                 "--out", str(back)]) == EXIT_OK
    assert np.array_equal(import_bits(back).bits(), bits)
    assert (tmp_path / "b.bin.nbits").read_text().strip() == "1001"


def test_bench_command(capsys, tmp_path):
    assert main(["bench", "--duration", "1", "--samples", "1048576",
                 "--table", str(tmp_path / "b.csv")]) == EXIT_OK
    assert "output_bits_per_s" in capsys.readouterr().out
    assert main(["bench", "--duration", "0.1"]) == EXIT_USAGE


def test_pipeline_command(tmp_path):
    cfg = tmp_path / "p.ini"
    cfg.write_text("[source]\nn = 5000\nseed = 3\n[output]\npath = %s\n" % (tmp_path / "a.bin"))
    assert main(["--quiet", "--config", str(cfg), "pipeline"]) == EXIT_OK
    assert main(["--quiet", "--config", str(cfg), "pipeline", "--out", str(tmp_path / "b.bin")]) == EXIT_OK
    a, b = (tmp_path / "a.bin").read_bytes(), (tmp_path / "b.bin").read_bytes()
    assert a == b and len(a) == 5000 - 63
    assert main(["--quiet", "--config", str(cfg), "pipeline", "--seed", "4",
                 "--out", str(tmp_path / "c.bin")]) == EXIT_OK
    assert (tmp_path / "c.bin").read_bytes() != a


def test_pipeline_bad_config(tmp_path):
    cfg = tmp_path / "bad.ini"
    cfg.write_text("[output]\nformat = hex\n")
    assert main(["--config", str(cfg), "pipeline"]) == EXIT_USAGE
    assert main(["--config", str(tmp_path / "missing.ini"), "pipeline"]) == EXIT_USAGE
    assert main(["pipeline", "--n", "-5", "--out", str(tmp_path / "x")]) == EXIT_USAGE


def test_pipeline_stdout_subprocess(tmp_path):
    res = subprocess.run(["vacrand", "--quiet", "pipeline", "--n", "1000", "--seed", "2", "--stdout"],
                         capture_output=True, check=True)
    expect = extract_stream(generate_samples(NoiseParams(seed=2), 1000)).tobytes()
    assert res.stdout == expect and res.stderr == b""
