import numpy as np

from vacrand.entropy import entropy_report
from vacrand.lfsr.core import extract_stream
from vacrand.plotting import (
    plot_autocorrelation,
    plot_distribution,
    plot_entropy_decomposition,
    plot_extraction,
)
from vacrand.signal import autocorrelation, distribution_report
from vacrand.source import NoiseParams, generate_samples

PNG = b"\x89PNG\r\n\x1a\n"


def test_all_figures(tmp_path):
    block = generate_samples(NoiseParams(seed=1), 20_000)
    paths = {name: tmp_path / f"{name}.png" for name in ("acf", "dist", "ent", "ext", "flat")}
    plot_autocorrelation(autocorrelation(block, 50), paths["acf"])
    plot_distribution(distribution_report(block), paths["dist"])
    plot_entropy_decomposition(entropy_report(4504.41, 1481.8), paths["ent"])
    plot_extraction(block.samples, extract_stream(block).data, paths["ext"])
    plot_distribution(distribution_report(np.zeros(10)), paths["flat"])  # degenerate block
    for p in paths.values():
        assert p.read_bytes()[:8] == PNG


def test_svg_by_extension(tmp_path):
    p = tmp_path / "a.svg"
    plot_autocorrelation(autocorrelation(np.arange(1, 100), 5), p)
    assert b"<svg" in p.read_bytes()[:500]
