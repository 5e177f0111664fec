import numpy as np
import pytest
from hypothesis import given, strategies as st

from prsense.errors import ConfigurationError, PatternError, StandardsWarning
from prsense.grid import (PrsPattern, comb4_offset, fill_data, k0_for_symbol, map_prs,
                          map_reference, prb_check, read_grid_csv, write_grid_csv)
from prsense.numerology import numerology_from_mu
from prsense.sequences import PrsSequenceId

MU3 = numerology_from_mu(3)


def test_comb4_schedule():
    assert PrsPattern(4, 4).offset_schedule == (0, 2, 1, 3)
    assert PrsPattern(4, 12).offset_schedule == (0, 2, 1, 3) * 3


@given(st.integers(0, 1000))
def test_comb4_closed_form_matches_table(m):
    assert comb4_offset(m) == k0_for_symbol(PrsPattern(4, 4), m)


@given(st.sampled_from([2, 4, 6, 12]), st.integers(1, 8))
def test_multislot_pattern_covers_every_offset(comb, reps):
    pattern = PrsPattern(comb, comb * reps if comb * reps > 12 else comb)
    offsets = pattern.offset_schedule
    assert sorted(offsets[:comb]) == list(range(comb))


@pytest.mark.parametrize("comb, symbols", [(3, 4), (4, 2), (4, 6), (4, 18), (6, 4)])
def test_bad_patterns(comb, symbols):
    with pytest.raises(PatternError):
        PrsPattern(comb, symbols)


def test_re_offset_bounds():
    with pytest.raises(PatternError):
        PrsPattern(4, 4, re_offset=4)
    assert PrsPattern(4, 4, re_offset=1).offset_schedule == (1, 3, 2, 0)


def test_spanning():
    pattern = PrsPattern.spanning(4, 128)
    assert (pattern.num_symbols, pattern.span_symbols) == (32, 128)
    with pytest.raises(PatternError):
        PrsPattern.spanning(4, 130)


@pytest.mark.parametrize("n, ok", [(288, True), (3264, True), (256, False), (276, False),
                                   (300, False)])
def test_prb_check(n, ok):
    assert prb_check(n) is ok


def test_map_prs_layout():
    grid = map_prs(PrsPattern(4, 4), PrsSequenceId(), 288, MU3)
    assert grid.cells.shape == (288, 4)
    assert grid.prs_mask.sum() == 72 * 4
    for j in range(4):
        rows = np.flatnonzero(grid.prs_mask[:, j])
        assert np.array_equal(rows, grid.k0[j] + 4 * np.arange(72))
    # every subcarrier is used exactly once across the comb
    assert np.all(grid.prs_mask.sum(axis=1) == 1)
    assert np.allclose(np.abs(grid.prs_values()), 1.0)


def test_nonconformant_width_warns():
    with pytest.warns(StandardsWarning):
        map_prs(PrsPattern(4, 4), PrsSequenceId(), 256, MU3)


def test_indivisible_width():
    with pytest.raises(ConfigurationError):
        map_prs(PrsPattern(4, 4), PrsSequenceId(), 258, MU3)


def test_cells_are_read_only():
    grid = map_prs(PrsPattern(2, 2), PrsSequenceId(), 288, MU3)
    with pytest.raises(ValueError):
        grid.cells[0, 0] = 0


def test_map_reference_rejects_bad_k0():
    with pytest.raises(ConfigurationError):
        map_reference(np.ones((4, 1)), 4, 4, 16, MU3)


def test_fill_data_only_touches_data_symbols():
    grid = map_prs(PrsPattern(4, 4), PrsSequenceId(), 288, MU3, n_symbols_total=14)
    filled = fill_data(grid, seed=1)
    assert np.array_equal(filled.cells[:, :4], grid.cells[:, :4])
    assert np.allclose(np.abs(filled.cells[:, 4:]), 1.0)
    assert np.array_equal(fill_data(grid, seed=1).cells, filled.cells)


def test_csv_round_trip(tmp_path):
    grid = map_prs(PrsPattern(4, 4), PrsSequenceId(7), 288, MU3)
    cells, mask = read_grid_csv(write_grid_csv(grid, tmp_path / "g.csv"))
    assert np.array_equal(cells, grid.cells) and np.array_equal(mask, grid.prs_mask)
