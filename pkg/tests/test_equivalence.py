import numpy as np
import pytest

from vacrand.lfsr.core import ParallelLfsrState
from vacrand.lfsr.equivalence import (
    Mapping,
    candidate_mappings,
    check_mapping,
    serial_parallel_equivalence,
)

DISCOVERED = Mapping("sequential", "lsb", "reversed", 63, 2)


def random_words(n, seed):
    return np.random.default_rng(seed).integers(0, 1 << 16, size=n).tolist()


def test_candidate_space():
    cands = list(candidate_mappings())
    assert len(cands) == len(set(cands)) == 32


def test_zero_words_stay_zero():
    rep = serial_parallel_equivalence([0] * 500, initial_state=ParallelLfsrState())
    # everything is consistent with the all-zero trajectory
    assert rep.passed
    assert len(rep.consistent_on_prefix) == rep.candidates_tried


def test_single_word_from_zero_state():
    rep = serial_parallel_equivalence([1], initial_state=ParallelLfsrState())
    assert rep.passed
    orders = {c.bit_order for c in rep.consistent_on_prefix}
    maps = {(c.bit_order, c.cell_map) for c in rep.consistent_on_prefix}
    # one word from zero cannot separate everything, but lsb+reversed must be among the fits
    assert "lsb" in orders and ("lsb", "reversed") in maps


def test_random_words_find_unique_mapping():
    rep = serial_parallel_equivalence(random_words(5000, 1), seed=3)
    assert rep.passed
    assert rep.consistent_on_prefix == [DISCOVERED]
    assert rep.reading_results == {"simultaneous": 0, "sequential": 1}
    assert rep.lines()[-1] == "result: PASS"


@pytest.mark.parametrize("seed", range(4))
def test_simultaneous_reading_has_no_serial_mapping(seed):
    words = random_words(200, 10 + seed)
    state = ParallelLfsrState(seed + 1, 3 * seed + 5)
    for m in candidate_mappings():
        if m.reading == "simultaneous":
            assert check_mapping(m, words, state) is not None


def test_discovered_mapping_on_many_starts():
    rng = np.random.default_rng(9)
    words = random_words(1000, 2)
    for _ in range(20):
        st = ParallelLfsrState(int(rng.integers(0, 2**63)), int(rng.integers(0, 2**63)))
        assert check_mapping(DISCOVERED, words, st) is None


def test_fail_report_is_not_an_exception():
    # a prefix too short to matter, then force validation of a wrong mapping
    rep = serial_parallel_equivalence(random_words(300, 4), prefix=0, seed=1)
    # with an empty prefix every candidate fits; the first (simultaneous) one is then refuted
    assert rep.mapping is not None and rep.mapping.reading == "simultaneous"
    assert not rep.passed and rep.failed_at is not None
    assert rep.lines()[-1] == "result: FAIL"
