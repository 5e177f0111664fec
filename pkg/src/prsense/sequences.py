"""Pseudo-random bit streams and reference-signal symbol sequences.

The Gold generator follows the 3GPP length-31 construction::

    x1(n+31) = (x1(n+3) + x1(n)) mod 2
    x2(n+31) = (x2(n+3) + x2(n+2) + x2(n+1) + x2(n)) mod 2
    c(n)     = (x1(n+Nc) + x2(n+Nc)) mod 2,    Nc = 1600

with x1 initialised to 1, 0, ..., 0 and x2 to the bits of ``c_init``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConfigurationError
from .numerology import SYMBOLS_PER_SLOT, NumerologyConfig

GOLD_NC = 1600
_REG = 31
# Largest block for which the recursion only reads already-known bits.
_BLOCK = 28

SS_LENGTH = 127


@dataclass(frozen=True)
class PrsSequenceId:
    """Identity of one PRS sequence: sequence ID, slot and symbol.

    ``slot_index`` is checked against a concrete numerology with
    :meth:`check`; on its own only the widest range (mu = 4) is enforced.
    """

    n_id_seq: int = 0
    slot_index: int = 0
    symbol_index: int = 0

    def __post_init__(self):
        if not 0 <= self.n_id_seq <= 4095:
            raise ConfigurationError(f"n_id_seq must be in 0..4095, got {self.n_id_seq}")
        if not 0 <= self.symbol_index < SYMBOLS_PER_SLOT:
            raise ConfigurationError(f"symbol_index must be in 0..13, got {self.symbol_index}")
        if not 0 <= self.slot_index < 160:
            raise ConfigurationError(f"slot_index out of range: {self.slot_index}")

    def check(self, numerology: NumerologyConfig) -> "PrsSequenceId":
        if self.slot_index >= numerology.n_slot_frame:
            raise ConfigurationError(
                f"slot_index {self.slot_index} >= {numerology.n_slot_frame} slots/frame "
                f"for mu={numerology.mu}")
        return self

    def advanced(self, symbols: int, n_slot_frame: int) -> "PrsSequenceId":
        """Identity of the symbol ``symbols`` later, wrapping slots within a frame."""
        absolute = self.slot_index * SYMBOLS_PER_SLOT + self.symbol_index + symbols
        slot, symbol = divmod(absolute, SYMBOLS_PER_SLOT)
        return PrsSequenceId(self.n_id_seq, slot % n_slot_frame, symbol)


def _register_bits(value: int) -> np.ndarray:
    return np.array([(value >> i) & 1 for i in range(_REG)], dtype=np.uint8)


@lru_cache(maxsize=256)
def _gold_cached(c_init: int, length: int) -> bytes:
    total = length + GOLD_NC
    x1 = np.zeros(total + _REG, dtype=np.uint8)
    x2 = np.zeros(total + _REG, dtype=np.uint8)
    x1[0] = 1
    x2[:_REG] = _register_bits(c_init)
    for n in range(0, total, _BLOCK):
        stop = min(n + _BLOCK, total)
        x1[n + _REG:stop + _REG] = x1[n + 3:stop + 3] ^ x1[n:stop]
        x2[n + _REG:stop + _REG] = (x2[n + 3:stop + 3] ^ x2[n + 2:stop + 2]
                                    ^ x2[n + 1:stop + 1] ^ x2[n:stop])
    return (x1[GOLD_NC:total] ^ x2[GOLD_NC:total]).tobytes()


def gold_bits(c_init: int, length: int) -> np.ndarray:
    """Return ``c(0..length-1)`` of the 3GPP Gold sequence seeded by ``c_init``."""
    if length < 1:
        raise ConfigurationError("length must be >= 1")
    if not 0 <= c_init < 2**31:
        raise ConfigurationError("c_init must fit in 31 bits")
    return np.frombuffer(_gold_cached(int(c_init), int(length)), dtype=np.uint8).copy()


def prs_c_init(seq_id: PrsSequenceId) -> int:
    """Initial x2 register value for a PRS symbol."""
    n_id = seq_id.n_id_seq
    value = (2**22 * (n_id // 1024)
             + 2**10 * (SYMBOLS_PER_SLOT * seq_id.slot_index + seq_id.symbol_index + 1)
             * (2 * (n_id % 1024) + 1)
             + n_id % 1024)
    return value % 2**31


def qpsk_from_bits(bits: np.ndarray) -> np.ndarray:
    """Map bit pairs ``(b0, b1)`` to ``((1-2b0) + 1j(1-2b1)) / sqrt(2)``."""
    bits = np.asarray(bits, dtype=np.int8).reshape(-1, 2)
    return ((1 - 2 * bits[:, 0]) + 1j * (1 - 2 * bits[:, 1])) / np.sqrt(2)


def prs_symbols(seq_id: PrsSequenceId, count: int) -> np.ndarray:
    """First ``count`` QPSK symbols of the PRS sequence for ``seq_id``."""
    if count < 1:
        raise ConfigurationError("count must be >= 1")
    return qpsk_from_bits(gold_bits(prs_c_init(seq_id), 2 * count))


@lru_cache(maxsize=1)
def _m_sequence_127() -> np.ndarray:
    # x(i+7) = (x(i+4) + x(i)) mod 2, initial x(6..0) = 1110110
    x = np.zeros(SS_LENGTH, dtype=np.int8)
    x[:7] = [0, 1, 1, 0, 1, 1, 1]
    for i in range(SS_LENGTH - 7):
        x[i + 7] = (x[i + 4] + x[i]) % 2
    return x


def baseline_sequence(kind: str, length: int, seed: int = 0) -> np.ndarray:
    """Reference sequences of the comparison signals.

    ``"SS"`` returns a BPSK-mapped length-127 M-sequence (cyclic shift
    ``43 * (seed mod 3)``, as for the PSS). ``"DMRS"`` runs the PRS Gold/QPSK
    pipeline with ``seed`` standing in for the sequence ID.
    """
    kind = kind.upper()
    if length < 1:
        raise ConfigurationError("length must be >= 1")
    if kind == "SS":
        if length > SS_LENGTH:
            raise ConfigurationError(f"SS sequences are at most {SS_LENGTH} long, got {length}")
        x = _m_sequence_127()
        n = (np.arange(length) + 43 * (seed % 3)) % SS_LENGTH
        return (1 - 2 * x[n]).astype(complex)
    if kind == "DMRS":
        return prs_symbols(PrsSequenceId(n_id_seq=seed % 4096), length)
    raise ConfigurationError(f"unknown baseline kind {kind!r}")
