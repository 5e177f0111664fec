import warnings

import pytest
from hypothesis import given, strategies as st

from prsense.errors import BandWarning, ConfigurationError, UnsupportedBandError
from prsense.numerology import frequency_range, numerology_from_mu, validate_band

SYMBOL_US = {0: 71.35, 1: 35.68, 2: 17.84, 3: 8.92, 4: 4.46}


@pytest.mark.parametrize("mu", range(5))
def test_table_row(mu):
    num = numerology_from_mu(mu)
    assert num.delta_f == 15e3 * 2**mu
    assert num.n_slot_frame == 10 * 2**mu
    assert num.symbols_per_frame == 140 * 2**mu
    assert num.t_symbol == pytest.approx(SYMBOL_US[mu] * 1e-6)
    assert num.t_useful == pytest.approx(1 / num.delta_f)
    assert num.t_useful + num.t_cp == pytest.approx(num.t_symbol)


def test_mu3_cyclic_prefix_is_derived():
    # tabulated 0.57 us; the derived value keeps T + T_CP = T_s
    assert numerology_from_mu(3).t_cp == pytest.approx(0.5866666e-6, rel=1e-6)


@pytest.mark.parametrize("mu", [-1, 5, 2.5, True, "3"])
def test_bad_mu(mu):
    with pytest.raises(ConfigurationError):
        numerology_from_mu(mu)


@given(st.integers(0, 4))
def test_symbol_shorter_than_frame(mu):
    num = numerology_from_mu(mu)
    assert num.symbols_per_frame * num.t_symbol <= num.frame_duration * 1.001


def test_bands():
    assert frequency_range(3.5e9) == "FR1"
    assert frequency_range(28e9) == "FR2"
    assert frequency_range(10e9) is None
    assert validate_band(28e9, 3)
    assert not validate_band(3.5e9, 3)


def test_24ghz_is_advisory():
    with pytest.warns(BandWarning):
        assert validate_band(24e9, 3)
    with pytest.raises(UnsupportedBandError):
        validate_band(24e9, 3, strict=True)


def test_inband_carrier_does_not_warn():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        validate_band(28e9, 3)


def test_nonpositive_carrier():
    with pytest.raises(ConfigurationError):
        validate_band(0.0, 3)
