"""Frequency-domain OFDM resource grids carrying comb-mapped reference signals.

A grid is the ``N x M`` matrix of modulation symbols (subcarriers x OFDM
symbols). No IFFT/CP synthesis happens here: the whole sensing chain works
on modulation symbols.
"""
from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, PatternError, StandardsWarning
from .numerology import NumerologyConfig
from .sequences import PrsSequenceId, prs_symbols, qpsk_from_bits

# Per-slot time-domain offset schedules k'(m), indexed by comb size then symbol count.
PRS_OFFSET_TABLE: dict[int, dict[int, tuple[int, ...]]] = {
    2: {2: (0, 1), 4: (0, 1, 0, 1), 6: (0, 1, 0, 1, 0, 1), 12: (0, 1) * 6},
    4: {4: (0, 2, 1, 3), 12: (0, 2, 1, 3) * 3},
    6: {6: (0, 3, 1, 4, 2, 5), 12: (0, 3, 1, 4, 2, 5) * 2},
    12: {12: (0, 6, 3, 9, 1, 7, 4, 10, 2, 8, 5, 11)},
}

PRB_SUBCARRIERS = 12
PRS_PRB_RANGE = range(24, 273, 4)


@dataclass(frozen=True)
class PrsPattern:
    """Comb pattern of a PRS resource.

    Up to 12 symbols the (comb, symbols) pair must appear in
    :data:`PRS_OFFSET_TABLE`. Longer multi-slot allocations must be a
    multiple of the comb size and repeat the per-slot schedule cyclically.
    """

    comb_size: int
    num_symbols: int
    re_offset: int = 0

    def __post_init__(self):
        k, m = self.comb_size, self.num_symbols
        if k not in PRS_OFFSET_TABLE:
            raise PatternError(f"comb size must be one of 2, 4, 6, 12; got {k}")
        if m < 1:
            raise PatternError("num_symbols must be positive")
        if m <= 12 and m not in PRS_OFFSET_TABLE[k]:
            raise PatternError(f"comb {k} with {m} symbols is not a supported PRS pattern")
        if m > 12 and m % k:
            raise PatternError(
                f"multi-slot PRS with comb {k} needs a multiple of {k} symbols, got {m}")
        if not 0 <= self.re_offset < k:
            raise PatternError("re_offset must lie in [0, comb_size)")

    @classmethod
    def spanning(cls, comb_size: int, total_symbols: int, re_offset: int = 0) -> "PrsPattern":
        """Pattern whose PRS occasions cover ``total_symbols`` symbol durations.

        The sensing model places consecutive PRS columns ``comb_size`` symbol
        durations apart, so ``total_symbols / comb_size`` PRS symbols are used.
        """
        if total_symbols % comb_size:
            raise PatternError("total_symbols must be a multiple of comb_size")
        return cls(comb_size, total_symbols // comb_size, re_offset)

    @property
    def base_schedule(self) -> tuple[int, ...]:
        row = PRS_OFFSET_TABLE[self.comb_size]
        return row[min(row)][: self.comb_size]

    @property
    def offset_schedule(self) -> tuple[int, ...]:
        return tuple(k0_for_symbol(self, m) for m in range(self.num_symbols))

    @property
    def span_symbols(self) -> int:
        return self.comb_size * self.num_symbols


def k0_for_symbol(pattern: PrsPattern, m: int) -> int:
    """First PRS subcarrier of PRS symbol ``m`` (0-based)."""
    if m < 0:
        raise ConfigurationError("symbol index must be non-negative")
    base = pattern.base_schedule
    return (pattern.re_offset + base[m % len(base)]) % pattern.comb_size


def comb4_offset(m: int) -> int:
    """Closed-form comb-4 offset ``(m mod 4)/2 + 3/4 (1 - (-1)^(m mod 4))``."""
    r = m % 4
    value = r / 2 + 0.75 * (1 - (-1) ** r)
    return int(round(value))


@dataclass(frozen=True, eq=False)
class ResourceGrid:
    """Modulation-symbol grid with a reference-signal mask.

    Attributes:
        cells: Complex ``(N, M)`` matrix, subcarriers by OFDM symbols.
        prs_mask: Boolean ``(N, M)`` matrix marking reference-signal REs.
        numerology: Timing of the carrier.
        comb_size: Frequency stride between reference subcarriers.
        prs_symbols: Grid symbol indices that carry the reference signal.
        k0: First reference subcarrier of each entry of ``prs_symbols``.
        kind: Reference signal family (``"PRS"``, ``"SS"``, ``"DMRS"``).
        carrier_hz: Carrier of the echo, set on received grids only.
        prs_start: Ordinal of the first PRS column in a longer observation;
            used to keep the Doppler phase continuous across frames.
    """

    cells: np.ndarray
    prs_mask: np.ndarray
    numerology: NumerologyConfig
    comb_size: int
    prs_symbols: np.ndarray
    k0: np.ndarray
    kind: str = "PRS"
    carrier_hz: float | None = None
    prs_start: int = 0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        n = self.cells.shape[0]
        if self.cells.shape != self.prs_mask.shape:
            raise ConfigurationError("cells and prs_mask shapes differ")
        if n % self.comb_size:
            raise ConfigurationError(
                f"{n} subcarriers not divisible by comb size {self.comb_size}")
        if len(self.prs_symbols) != len(self.k0):
            raise ConfigurationError("one k0 per PRS symbol required")
        for arr in (self.cells, self.prs_mask, self.prs_symbols, self.k0):
            arr.flags.writeable = False

    @property
    def num_subcarriers(self) -> int:
        return self.cells.shape[0]

    @property
    def num_symbols(self) -> int:
        return self.cells.shape[1]

    @property
    def n_j(self) -> int:
        return self.num_subcarriers // self.comb_size

    @property
    def m_prs(self) -> int:
        return len(self.prs_symbols)

    @property
    def data_symbols(self) -> np.ndarray:
        return np.setdiff1d(np.arange(self.num_symbols), self.prs_symbols)

    def prs_rows(self, j: int) -> np.ndarray:
        """Subcarrier indices of the ``j``-th reference-bearing symbol."""
        return self.k0[j] + self.comb_size * np.arange(self.n_j)

    def prs_values(self) -> np.ndarray:
        """Reference symbols as an ``(N_J, M_prs)`` matrix."""
        out = np.empty((self.n_j, self.m_prs), dtype=complex)
        for j, g in enumerate(self.prs_symbols):
            out[:, j] = self.cells[self.prs_rows(j), g]
        return out

    def with_cells(self, cells: np.ndarray, **changes) -> "ResourceGrid":
        return replace(self, cells=np.array(cells, dtype=complex),
                       prs_mask=self.prs_mask.copy(), prs_symbols=self.prs_symbols.copy(),
                       k0=self.k0.copy(), meta=dict(self.meta), **changes)


def prb_check(n_subcarriers: int) -> bool:
    """True when ``n_subcarriers`` is a PRS-allowed whole number of PRBs."""
    if n_subcarriers <= 0 or n_subcarriers % PRB_SUBCARRIERS:
        return False
    return n_subcarriers // PRB_SUBCARRIERS in PRS_PRB_RANGE


def map_reference(values: np.ndarray, comb_size: int, k0, n_subcarriers: int,
                  numerology: NumerologyConfig, n_symbols_total: int | None = None,
                  start_symbol: int = 0, kind: str = "PRS") -> ResourceGrid:
    """Place an ``(N_J, M_ref)`` symbol matrix on a comb.

    Column ``j`` lands on grid symbol ``start_symbol + j`` at subcarriers
    ``comb_size * k + k0[j]``; all other cells are zero.
    """
    values = np.atleast_2d(np.asarray(values, dtype=complex))
    if n_subcarriers % comb_size:
        raise ConfigurationError(
            f"{n_subcarriers} subcarriers not divisible by comb size {comb_size}")
    n_j = n_subcarriers // comb_size
    if values.shape[0] != n_j:
        raise ConfigurationError(f"expected {n_j} rows, got {values.shape[0]}")
    m_ref = values.shape[1]
    k0 = np.broadcast_to(np.asarray(k0, dtype=int), (m_ref,)).copy()
    if np.any((k0 < 0) | (k0 >= comb_size)):
        raise ConfigurationError("k0 must lie in [0, comb_size)")
    total = start_symbol + m_ref if n_symbols_total is None else n_symbols_total
    if start_symbol < 0 or start_symbol + m_ref > total:
        raise ConfigurationError("reference symbols do not fit in the grid")
    cells = np.zeros((n_subcarriers, total), dtype=complex)
    mask = np.zeros((n_subcarriers, total), dtype=bool)
    symbols = start_symbol + np.arange(m_ref)
    for j, g in enumerate(symbols):
        rows = k0[j] + comb_size * np.arange(n_j)
        cells[rows, g] = values[:, j]
        mask[rows, g] = True
    return ResourceGrid(cells, mask, numerology, comb_size, symbols, k0, kind=kind)


def map_prs(pattern: PrsPattern, seq_id: PrsSequenceId, n_subcarriers: int,
            numerology: NumerologyConfig, n_symbols_total: int | None = None,
            start_symbol: int = 0) -> ResourceGrid:
    """Build a grid carrying PRS on ``pattern`` starting at ``start_symbol``.

    Each PRS symbol gets its own sequence, with the slot/symbol part of the
    identity advanced to that symbol's position in the frame.
    """
    seq_id.check(numerology)
    if n_subcarriers % pattern.comb_size:
        raise ConfigurationError(
            f"{n_subcarriers} subcarriers not divisible by comb size {pattern.comb_size}")
    if not prb_check(n_subcarriers):
        warnings.warn(f"{n_subcarriers} subcarriers is not a PRS-conformant PRB allocation",
                      StandardsWarning, stacklevel=2)
    n_j = n_subcarriers // pattern.comb_size
    values = np.empty((n_j, pattern.num_symbols), dtype=complex)
    for j in range(pattern.num_symbols):
        sym_id = seq_id.advanced(start_symbol + j, numerology.n_slot_frame)
        values[:, j] = prs_symbols(sym_id, n_j)
    grid = map_reference(values, pattern.comb_size, pattern.offset_schedule, n_subcarriers,
                         numerology, n_symbols_total, start_symbol, kind="PRS")
    grid.meta.update(pattern=pattern, seq_id=seq_id)
    return grid


def fill_data(grid: ResourceGrid, seed: int | None = 0) -> ResourceGrid:
    """Fill every symbol without reference signal with random QPSK."""
    data = grid.data_symbols
    if data.size == 0:
        return grid
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, size=(grid.num_subcarriers * data.size * 2), dtype=np.int8)
    cells = np.array(grid.cells)
    cells[:, data] = qpsk_from_bits(bits).reshape(grid.num_subcarriers, data.size)
    return grid.with_cells(cells)


def write_grid_csv(grid: ResourceGrid, path) -> Path:
    """Dump a grid as ``subcarrier, symbol, re_im, is_prs`` rows."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["subcarrier", "symbol", "re_im", "is_prs"])
        for n in range(grid.num_subcarriers):
            for m in range(grid.num_symbols):
                z = grid.cells[n, m]
                writer.writerow([n, m, f"{z.real:.17g}{z.imag:+.17g}j",
                                 int(grid.prs_mask[n, m])])
    return path


def read_grid_csv(path) -> tuple[np.ndarray, np.ndarray]:
    """Read back ``(cells, prs_mask)`` from :func:`write_grid_csv` output."""
    with Path(path).open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    n = max(int(r["subcarrier"]) for r in rows) + 1
    m = max(int(r["symbol"]) for r in rows) + 1
    cells = np.zeros((n, m), dtype=complex)
    mask = np.zeros((n, m), dtype=bool)
    for r in rows:
        i, j = int(r["subcarrier"]), int(r["symbol"])
        cells[i, j] = complex(r["re_im"])
        mask[i, j] = r["is_prs"] == "1"
    return cells, mask
