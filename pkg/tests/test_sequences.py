import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import gold_reference, m_sequence_reference
from prsense.errors import ConfigurationError
from prsense.numerology import numerology_from_mu
from prsense.sequences import (PrsSequenceId, baseline_sequence, gold_bits, prs_c_init,
                               prs_symbols, qpsk_from_bits)

# first 48 bits from the bit-serial oracle, frozen
GOLD_48 = {
    0: "000000100001101000010010011110100010010110010101",
    1: "000000101000001100000011011101000010101110011010",
    74565: "110101100101011101111010011110110011101010000111",
    2147483647: "111111010000101111110011100011100010111001100000",
}

C_INIT = {
    (0, 0, 0): 1024,
    (1, 2, 3): 98305,
    (1023, 79, 13): 200180735,
    (4095, 159, 13): 412943359,
    (2048, 5, 7): 8468480,
}


@pytest.mark.parametrize("c_init, bits", GOLD_48.items())
def test_gold_frozen(c_init, bits):
    assert "".join(map(str, gold_bits(c_init, 48))) == bits


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31 - 1), st.integers(1, 200))
def test_gold_matches_oracle(c_init, length):
    assert gold_bits(c_init, length).tolist() == gold_reference(c_init, length)


@pytest.mark.parametrize("ident, value", C_INIT.items())
def test_c_init_frozen(ident, value):
    assert prs_c_init(PrsSequenceId(*ident)) == value


@given(st.integers(0, 4095), st.integers(0, 159), st.integers(0, 13))
def test_c_init_fits_register(n_id, slot, symbol):
    assert 0 <= prs_c_init(PrsSequenceId(n_id, slot, symbol)) < 2**31


@given(st.lists(st.integers(0, 1), min_size=2, max_size=64).filter(lambda b: len(b) % 2 == 0))
def test_qpsk_unit_magnitude(bits):
    sym = qpsk_from_bits(np.array(bits))
    assert np.allclose(np.abs(sym), 1.0)
    assert set(np.round(sym.real * np.sqrt(2)).astype(int)) <= {-1, 1}


def test_qpsk_mapping():
    sym = qpsk_from_bits(np.array([0, 0, 0, 1, 1, 0, 1, 1]))
    expect = np.array([1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j]) / np.sqrt(2)
    assert np.allclose(sym, expect)


def test_prs_symbols_differ_by_symbol():
    a = prs_symbols(PrsSequenceId(0, 0, 0), 64)
    b = prs_symbols(PrsSequenceId(0, 0, 1), 64)
    assert a.shape == (64,) and not np.allclose(a, b)


@pytest.mark.parametrize("kwargs", [dict(n_id_seq=4096), dict(symbol_index=14),
                                    dict(slot_index=160), dict(n_id_seq=-1)])
def test_bad_identity(kwargs):
    with pytest.raises(ConfigurationError):
        PrsSequenceId(**kwargs)


def test_slot_checked_against_numerology():
    with pytest.raises(ConfigurationError):
        PrsSequenceId(slot_index=80).check(numerology_from_mu(2))
    PrsSequenceId(slot_index=79).check(numerology_from_mu(3))


def test_advanced_wraps_slots():
    ident = PrsSequenceId(5, 79, 13).advanced(1, 80)
    assert (ident.n_id_seq, ident.slot_index, ident.symbol_index) == (5, 0, 0)


def test_ss_is_bpsk_m_sequence():
    ss = baseline_sequence("SS", 127)
    ref = 1 - 2 * np.array(m_sequence_reference())
    assert np.array_equal(ss.real, ref) and not ss.imag.any()
    shifted = baseline_sequence("SS", 127, seed=1)
    assert np.array_equal(shifted, np.roll(ss, -43))


def test_ss_length_limit():
    with pytest.raises(ConfigurationError):
        baseline_sequence("SS", 128)


def test_dmrs_is_qpsk():
    d = baseline_sequence("DMRS", 60, seed=3)
    assert np.allclose(np.abs(d), 1.0)


@pytest.mark.parametrize("args", [(0, 0), (2**31, 4), (-1, 4)])
def test_gold_bad_args(args):
    with pytest.raises(ConfigurationError):
        gold_bits(*args)
