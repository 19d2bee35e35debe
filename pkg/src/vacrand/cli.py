"""``vacrand`` command-line interface.

Exit codes: 0 success; 1 a statistical test failed; 2 usage or config error;
3 malformed input data; 4 I/O error; 5 entropy model error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys

from vacrand import bitio
from vacrand.entropy import EntropyModelError, entropy_report, entropy_report_from_blocks
from vacrand.lfsr.core import ExtractorConfig, extract_stream
from vacrand.pipeline import ConfigError, PipelineConfig, bench, load_config, run_pipeline
from vacrand.signal import ShotNoiseParams, autocorrelation, distribution_report, shot_noise_power
from vacrand.source import (
    REF_SIGMA_E,
    REF_SIGMA_Q,
    CaptureFormatError,
    NoiseParams,
    generate_electronic_only,
    generate_samples,
    load_capture,
)
from vacrand.stattests import DEFAULT_ALPHA, TESTS, run_tests, segment_pass_fractions

EXIT_OK = 0
EXIT_TEST_FAILED = 1
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_IO = 4
EXIT_MODEL = 5

log = logging.getLogger("vacrand")


def _out(line: str) -> None:
    print(line)


def _write_table(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def _seed(args, default=0) -> int:
    if getattr(args, "cmd_seed", None) is not None:
        return args.cmd_seed
    if args.seed is not None:
        return args.seed
    return default


def _params(cls, *a):
    try:
        return cls(*a)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def cmd_simulate(args) -> int:
    if args.n < 0:
        raise ConfigError("--n must be non-negative")
    params = _params(NoiseParams, args.sigma_q, args.sigma_e, _seed(args), args.ar)
    gen = generate_electronic_only if args.electronic_only else generate_samples
    block = gen(params, args.n)
    block.store(args.out)
    log.info("wrote %d samples to %s", len(block), args.out)
    return EXIT_OK


def cmd_extract(args) -> int:
    if args.warmup < 0:
        raise ConfigError("--warmup must be non-negative")
    block = load_capture(args.inp)
    stream = extract_stream(block, ExtractorConfig(warmup_steps=args.warmup))
    if args.out == "-":
        bitio.write_stdout(stream.tobytes())
    else:
        bitio.export_bits(stream, args.out, "ascii01" if args.format.startswith("ascii") else "packed")
    if args.plot:
        from vacrand.plotting import plot_extraction
        plot_extraction(block.samples, stream.data, args.plot)
    log.info("extracted %d bits from %d samples", stream.n_bits, len(block))
    return EXIT_OK


def cmd_entropy(args) -> int:
    if args.total and args.electronic:
        report = entropy_report_from_blocks(load_capture(args.total), load_capture(args.electronic))
    elif args.sigma_t is not None and args.sigma_e is not None:
        report = entropy_report(args.sigma_t, args.sigma_e)
    else:
        raise ConfigError("give --total and --electronic files, or --sigma-t and --sigma-e")
    for line in report.lines():
        _out(line)
    if args.json:
        doc = json.dumps(report.as_dict(), indent=2)
        if args.json == "-":
            _out(doc)
        else:
            with open(args.json, "w") as fh:
                fh.write(doc + "\n")
    if args.plot:
        from vacrand.plotting import plot_entropy_decomposition
        plot_entropy_decomposition(report, args.plot)
    return EXIT_OK


def cmd_autocorr(args) -> int:
    res = autocorrelation(load_capture(args.inp), args.max_lag, subtract_mean=args.subtract_mean)
    for line in res.lines():
        _out(line)
    if res.offset_warning:
        log.warning("mean exceeds 1%% of std-dev; consider --subtract-mean")
    if args.table:
        _write_table(args.table, ["lag", "value"], zip(res.lags.tolist(), res.values.tolist()))
    if args.plot:
        from vacrand.plotting import plot_autocorrelation
        plot_autocorrelation(res, args.plot)
    return EXIT_OK


def cmd_shotnoise(args) -> int:
    params = _params(ShotNoiseParams, args.current, args.bandwidth, args.reff, args.z)
    watts, dbm = shot_noise_power(params)
    _out(f"watts: {watts}")
    _out(f"dbm: {dbm}")
    return EXIT_OK


def cmd_dist(args) -> int:
    rep = distribution_report(load_capture(args.inp), n_bins=args.bins)
    for line in rep.lines():
        _out(line)
    if args.table:
        lo, hi = rep.bin_edges[:-1], rep.bin_edges[1:]
        _write_table(args.table, ["bin_low", "bin_high", "count"],
                     zip(lo.tolist(), hi.tolist(), rep.counts.tolist()))
    if args.plot:
        from vacrand.plotting import plot_distribution
        plot_distribution(rep, args.plot)
    return EXIT_OK


def cmd_test(args) -> int:
    stream = bitio.import_bits(args.inp, args.format)
    names = [t.strip() for t in args.tests.split(",") if t.strip()]
    unknown = sorted(set(names) - set(TESTS))
    if unknown or not names:
        raise ConfigError(f"unknown tests {unknown}; choose from {', '.join(TESTS)}")
    if args.segment_bits:
        fr = segment_pass_fractions(stream, args.segment_bits, names, args.alpha)
        for name, f in fr.items():
            _out(f"{name}: pass_fraction={f:.4f}")
        if args.table:
            _write_table(args.table, ["test", "pass_fraction"], fr.items())
        return EXIT_OK if min(fr.values()) >= args.min_pass_fraction else EXIT_TEST_FAILED
    reports = run_tests(stream, names, args.alpha)
    for r in reports:
        _out(r.line())
    if args.table:
        _write_table(args.table, ["test", "n_bits", "statistic", "p_value", "pass"],
                     [(r.test_name, r.n_bits, r.statistic, r.p_value, r.passed) for r in reports])
    return EXIT_OK if all(r.passed for r in reports) else EXIT_TEST_FAILED


def cmd_export(args) -> int:
    stream = bitio.import_bits(args.inp, args.in_format)
    bitio.export_bits(stream, args.out, args.format)
    return EXIT_OK


def cmd_bench(args) -> int:
    duration = args.duration
    if duration is None:
        duration = load_config(args.config).bench_duration_s if args.config else 10.0
    rep = bench(duration, n_samples=args.samples, seed=_seed(args), implementation=args.implementation)
    for line in rep.lines():
        _out(line)
    if args.table:
        _write_table(args.table, ["key", "value"], [ln.split(": ", 1) for ln in rep.lines()])
    return EXIT_OK


def cmd_pipeline(args) -> int:
    config = load_config(args.config) if args.config else PipelineConfig()
    if args.n is not None:
        if args.n < 0:
            raise ConfigError("--n must be non-negative")
        config.n_samples = args.n
    if args.seed is not None or getattr(args, "cmd_seed", None) is not None:
        p = config.noise
        config.noise = _params(NoiseParams, p.sigma_q, p.sigma_e, _seed(args), p.ar_coefficient)
    if args.out:
        config.output_path = args.out
    if args.stdout:
        bits = run_pipeline(config, sink=bitio.write_stdout)
    else:
        bits = run_pipeline(config)
    log.info("pipeline produced %d bits", bits)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vacrand", description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=None, help="default seed for simulated sources")
    p.add_argument("--config", default=None, help="INI pipeline config (pipeline, bench)")
    p.add_argument("--quiet", action="store_true", help="only warnings and errors on stderr")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="simulate quantized homodyne noise")
    s.add_argument("--sigma-q", type=float, default=REF_SIGMA_Q)
    s.add_argument("--sigma-e", type=float, default=REF_SIGMA_E)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", dest="cmd_seed", type=int, default=None)
    s.add_argument("--out", required=True)
    s.add_argument("--ar", type=float, default=0.0, help="AR(1) coefficient in [0, 1)")
    s.add_argument("--electronic-only", action="store_true")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("extract", help="run the LFSR extractor over a capture")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--out", required=True, help="output file, or - for raw bytes on stdout")
    s.add_argument("--format", choices=["packed", "ascii", "ascii01"], default="packed")
    s.add_argument("--warmup", type=int, default=63)
    s.add_argument("--plot", default=None, help="before/after figure (PNG)")
    s.set_defaults(func=cmd_extract)

    s = sub.add_parser("entropy", help="quantum entropy budget")
    s.add_argument("--total", default=None, help="capture with laser on")
    s.add_argument("--electronic", default=None, help="capture with laser off")
    s.add_argument("--sigma-t", type=float, default=None)
    s.add_argument("--sigma-e", type=float, default=None)
    s.add_argument("--json", default=None, help="write report as JSON (- for stdout)")
    s.add_argument("--plot", default=None)
    s.set_defaults(func=cmd_entropy)

    s = sub.add_parser("autocorr", help="normalized autocorrelation")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--max-lag", type=int, default=100)
    s.add_argument("--subtract-mean", action="store_true")
    s.add_argument("--table", default=None, help="lag,value CSV")
    s.add_argument("--plot", default=None)
    s.set_defaults(func=cmd_autocorr)

    s = sub.add_parser("shotnoise", help="theoretical shot-noise power")
    s.add_argument("--current", type=float, default=1.7e-3, help="photocurrent, A")
    s.add_argument("--bandwidth", type=float, default=1e3, help="Hz")
    s.add_argument("--reff", type=float, default=540e3, help="transimpedance, ohm")
    s.add_argument("--z", type=float, default=50.0, help="load impedance, ohm")
    s.set_defaults(func=cmd_shotnoise)

    s = sub.add_parser("dist", help="sample distribution and moments")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--bins", type=int, default=256)
    s.add_argument("--table", default=None)
    s.add_argument("--plot", default=None)
    s.set_defaults(func=cmd_dist)

    s = sub.add_parser("test", help="statistical self-tests on a bit file")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--format", choices=bitio.FORMATS, default="packed")
    s.add_argument("--tests", default=",".join(TESTS))
    s.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    s.add_argument("--segment-bits", type=int, default=0,
                   help="test disjoint segments of this size and report pass fractions")
    s.add_argument("--min-pass-fraction", type=float, default=0.97)
    s.add_argument("--table", default=None)
    s.set_defaults(func=cmd_test)

    s = sub.add_parser("export", help="convert bits for NIST STS / Dieharder")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--in-format", choices=bitio.FORMATS, default="packed")
    s.add_argument("--format", choices=bitio.FORMATS, required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_export)

    s = sub.add_parser("bench", help="single-threaded extractor throughput")
    s.add_argument("--duration", type=float, default=None, help="seconds (default 10)")
    s.add_argument("--samples", type=int, default=1 << 24)
    s.add_argument("--implementation", choices=["packed", "reference"], default="packed")
    s.add_argument("--table", default=None)
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("pipeline", help="source -> extractor -> output, streaming")
    s.add_argument("--n", type=int, default=None, help="override sample count")
    s.add_argument("--seed", dest="cmd_seed", type=int, default=None)
    s.add_argument("--out", default=None)
    s.add_argument("--stdout", action="store_true", help="raw packed bytes to stdout")
    s.set_defaults(func=cmd_pipeline)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(name)s: %(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except ConfigError as exc:
        log.error("config: %s", exc)
        return EXIT_USAGE
    except EntropyModelError as exc:
        log.error("%s", exc)
        return EXIT_MODEL
    except CaptureFormatError as exc:
        log.error("input: %s", exc)
        return EXIT_DATA
    except OSError as exc:
        log.error("I/O: %s", exc)
        return EXIT_IO
    except ValueError as exc:
        log.error("%s", exc)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
