"""5G NR numerology and frame timing.

Symbol durations are the normal-CP values with one uniform cyclic prefix per
symbol (the longer CP of slot-initial symbols is ignored).
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

from .errors import BandWarning, ConfigurationError, UnsupportedBandError

#: Propagation speed used by every range/velocity conversion, m/s.
SPEED_OF_LIGHT = 3e8

FRAME_DURATION = 10e-3
SYMBOLS_PER_SLOT = 14
SCS_BASE_HZ = 15e3

FR1 = (450e6, 5.9e9)
FR2 = (24.2e9, 52.6e9)

# Total symbol duration T + T_CP in microseconds, normal cyclic prefix.
_SYMBOL_US = {0: 71.35, 1: 35.68, 2: 17.84, 3: 8.92, 4: 4.46}
_FR1_MU = frozenset({0, 1, 2})
_FR2_MU = frozenset({2, 3, 4})


@dataclass(frozen=True)
class NumerologyConfig:
    """Timing parameters for one subcarrier-spacing configuration.

    Attributes:
        mu: Subcarrier spacing configuration (0..4).
        delta_f: Subcarrier spacing in Hz.
        n_symb_slot: OFDM symbols per slot.
        n_slot_frame: Slots per 10 ms frame.
        t_useful: Symbol duration without cyclic prefix, seconds.
        t_cp: Cyclic prefix duration, seconds.
        t_symbol: Total symbol duration, seconds.
        frame_duration: Frame duration, seconds.
    """

    mu: int
    delta_f: float
    n_symb_slot: int
    n_slot_frame: int
    t_useful: float
    t_cp: float
    t_symbol: float
    frame_duration: float = FRAME_DURATION

    @property
    def symbols_per_frame(self) -> int:
        return self.n_slot_frame * self.n_symb_slot


def numerology_from_mu(mu: int) -> NumerologyConfig:
    """Build the numerology row for ``mu``.

    ``t_symbol`` is the tabulated total duration; ``t_cp`` is derived as
    ``t_symbol - 1/delta_f`` so the three durations stay consistent.

    Raises:
        ConfigurationError: ``mu`` outside 0..4.
    """
    if isinstance(mu, bool) or int(mu) != mu or mu not in _SYMBOL_US:
        raise ConfigurationError(f"mu must be one of 0..4, got {mu!r}")
    mu = int(mu)
    delta_f = SCS_BASE_HZ * 2**mu
    t_useful = 1.0 / delta_f
    t_symbol = _SYMBOL_US[mu] * 1e-6
    return NumerologyConfig(
        mu=mu,
        delta_f=delta_f,
        n_symb_slot=SYMBOLS_PER_SLOT,
        n_slot_frame=10 * 2**mu,
        t_useful=t_useful,
        t_cp=t_symbol - t_useful,
        t_symbol=t_symbol,
    )


def frequency_range(carrier_hz: float) -> str | None:
    """Return ``"FR1"``, ``"FR2"`` or None when the carrier is in neither."""
    if FR1[0] <= carrier_hz <= FR1[1]:
        return "FR1"
    if FR2[0] <= carrier_hz <= FR2[1]:
        return "FR2"
    return None


def validate_band(carrier_hz: float, mu: int, strict: bool = False) -> bool:
    """Check whether ``mu`` is allowed in the band containing ``carrier_hz``.

    A carrier outside both FR1 and FR2 raises in strict mode. Otherwise it
    is assigned to the nearer range with a :class:`BandWarning`, which lets
    24 GHz (just under the FR2 floor) be simulated as FR2.
    """
    if carrier_hz <= 0:
        raise ConfigurationError("carrier frequency must be positive")
    numerology_from_mu(mu)
    band = frequency_range(carrier_hz)
    if band is None:
        if strict:
            raise UnsupportedBandError(
                f"{carrier_hz / 1e9:.3f} GHz is outside FR1 and FR2")
        gap_fr1 = min(abs(carrier_hz - f) for f in FR1)
        gap_fr2 = min(abs(carrier_hz - f) for f in FR2)
        band = "FR1" if gap_fr1 <= gap_fr2 else "FR2"
        warnings.warn(
            f"{carrier_hz / 1e9:.3f} GHz is outside FR1/FR2; treated as {band}",
            BandWarning, stacklevel=2)
    allowed = _FR1_MU if band == "FR1" else _FR2_MU
    return mu in allowed
