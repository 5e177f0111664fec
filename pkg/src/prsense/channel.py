"""Point-target radar channel and the received/transmitted quotient matrix.

PRS column ``m`` of an observation is taken to be received ``comb_size * m``
symbol durations after the first one: a given comb offset recurs every
``comb_size`` symbols, so that is the spacing of the samples the velocity
estimator sees.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import AmbiguityWarning, ConfigurationError, DivisionHazardError
from .grid import ResourceGrid
from .numerology import SPEED_OF_LIGHT, NumerologyConfig

PHASE_MODES = ("comb_free", "physical")
NOISE_CONVENTIONS = ("complex", "per_quadrature")


@dataclass(frozen=True)
class TargetScenario:
    """Ground truth for one point target.

    ``snr_db`` is the ratio of received reference-symbol power
    ``attenuation**2 * E|s|^2`` to the noise power.
    """

    range_m: float
    velocity_mps: float = 0.0
    attenuation: float = 1.0
    snr_db: float = 5.0
    carrier_hz: float = 24e9

    def __post_init__(self):
        if self.range_m < 0:
            raise ConfigurationError("range_m must be non-negative")
        if self.attenuation <= 0:
            raise ConfigurationError("attenuation must be positive")
        if self.carrier_hz <= 0:
            raise ConfigurationError("carrier_hz must be positive")

    @property
    def delay_s(self) -> float:
        return 2 * self.range_m / SPEED_OF_LIGHT

    @property
    def doppler_hz(self) -> float:
        return 2 * self.velocity_mps * self.carrier_hz / SPEED_OF_LIGHT

    @property
    def snr_linear(self) -> float:
        return 10 ** (self.snr_db / 10)


@dataclass(frozen=True, eq=False)
class QuotientMatrix:
    """Element-wise received/transmitted ratio on the reference REs.

    ``values[k, m]`` belongs to the ``k``-th reference subcarrier of the
    ``m``-th reference-bearing symbol.
    """

    values: np.ndarray
    comb_size: int
    numerology: NumerologyConfig
    carrier_hz: float | None
    k0: np.ndarray
    prs_start: int = 0
    kind: str = "PRS"

    @property
    def n_j(self) -> int:
        return self.values.shape[0]

    @property
    def m_j(self) -> int:
        return self.values.shape[1]

    @property
    def n_subcarriers(self) -> int:
        return self.comb_size * self.n_j

    @property
    def span_symbols(self) -> int:
        return self.comb_size * self.m_j


def _as_generator(rng_seed) -> np.random.Generator:
    if isinstance(rng_seed, np.random.Generator):
        return rng_seed
    return np.random.default_rng(rng_seed)


def max_unambiguous(grid: ResourceGrid, carrier_hz: float) -> tuple[float, float]:
    """``(R_max, v_max)`` for the comb and timing of ``grid``."""
    num = grid.numerology
    r_max = SPEED_OF_LIGHT / (2 * grid.comb_size * num.delta_f)
    v_max = SPEED_OF_LIGHT / (2 * grid.comb_size * num.t_symbol * carrier_hz)
    return r_max, v_max


def check_scenario(grid: ResourceGrid, scenario: TargetScenario) -> bool:
    """Warn when the target aliases; returns True when it is unambiguous."""
    r_max, v_max = max_unambiguous(grid, scenario.carrier_hz)
    ok = True
    if scenario.range_m >= r_max:
        warnings.warn(f"range {scenario.range_m} m >= R_max {r_max:.2f} m; estimate will wrap",
                      AmbiguityWarning, stacklevel=3)
        ok = False
    if grid.m_prs > 1 and abs(scenario.velocity_mps) >= v_max:
        warnings.warn(f"|v| {abs(scenario.velocity_mps)} m/s >= v_max {v_max:.2f} m/s",
                      AmbiguityWarning, stacklevel=3)
        ok = False
    return ok


def echo_cells(grid: ResourceGrid, scenario: TargetScenario, phase_mode: str = "comb_free") -> np.ndarray:
    """Noiseless received cells.

    Reference cells get ``xi * exp(-j2pi f tau) * exp(j2pi K m T_s f_d)``;
    in ``"comb_free"`` mode ``f = K k delta_f`` (the comb offset is dropped), in
    ``"physical"`` mode ``f = (K k + k0(m)) delta_f``. Other cells are
    echoed at their own subcarrier and symbol time.
    """
    if phase_mode not in PHASE_MODES:
        raise ConfigurationError(f"phase_mode must be one of {PHASE_MODES}")
    num = grid.numerology
    tau, fd, xi = scenario.delay_s, scenario.doppler_hz, scenario.attenuation
    k_comb = grid.comb_size
    n = np.arange(grid.num_subcarriers)
    g = np.arange(grid.num_symbols)
    out = (xi * np.exp(-2j * np.pi * n * num.delta_f * tau)[:, None]
           * np.exp(2j * np.pi * g * num.t_symbol * fd)[None, :]) * grid.cells
    k = np.arange(grid.n_j)
    for j, col in enumerate(grid.prs_symbols):
        rows = grid.prs_rows(j)
        f_k = k_comb * k if phase_mode == "comb_free" else rows
        m = grid.prs_start + j
        phase = (np.exp(-2j * np.pi * f_k * num.delta_f * tau)
                 * np.exp(2j * np.pi * k_comb * m * num.t_symbol * fd))
        out[rows, col] = xi * phase * grid.cells[rows, col]
    return out


def noise_variance(grid: ResourceGrid, scenario: TargetScenario) -> float:
    """Total complex noise power giving ``scenario.snr_db`` on reference REs."""
    ref = grid.cells[grid.prs_mask]
    power = float(np.mean(np.abs(ref) ** 2)) if ref.size else 1.0
    return scenario.attenuation**2 * power / scenario.snr_linear


def apply_echo(grid: ResourceGrid, scenario: TargetScenario, phase_mode: str = "comb_free",
               rng_seed=None, noise: bool = True,
               noise_convention: str = "complex") -> ResourceGrid:
    """Pass ``grid`` through the point-target channel and add AWGN.

    Args:
        grid: Transmitted grid.
        scenario: Target and SNR.
        phase_mode: ``"comb_free"`` or ``"physical"`` delay phase, see
            :func:`echo_cells`.
        rng_seed: Seed or ``numpy.random.Generator`` for the noise.
        noise: Disable to get the noiseless echo.
        noise_convention: ``"complex"`` draws circular noise of total
            variance sigma^2 (sigma^2/2 per quadrature) so the measured SNR
            equals ``snr_db``; ``"per_quadrature"`` puts sigma^2 on each of
            I and Q, the convention under which the closed-form bounds are
            exact.
    """
    if noise_convention not in NOISE_CONVENTIONS:
        raise ConfigurationError(f"noise_convention must be one of {NOISE_CONVENTIONS}")
    check_scenario(grid, scenario)
    cells = echo_cells(grid, scenario, phase_mode)
    sigma2 = noise_variance(grid, scenario)
    if noise:
        rng = _as_generator(rng_seed)
        scale = np.sqrt(sigma2 / 2 if noise_convention == "complex" else sigma2)
        cells = cells + scale * (rng.standard_normal(cells.shape)
                                 + 1j * rng.standard_normal(cells.shape))
    out = grid.with_cells(cells, carrier_hz=scenario.carrier_hz)
    out.meta.update(noise_var=sigma2 if noise else 0.0, phase_mode=phase_mode,
                    noise_convention=noise_convention)
    return out


def quotient(received: ResourceGrid, transmitted: ResourceGrid) -> QuotientMatrix:
    """Divide received by transmitted symbols on the reference REs only."""
    if received.cells.shape != transmitted.cells.shape:
        raise ConfigurationError("received and transmitted grids differ in shape")
    if (received.comb_size != transmitted.comb_size
            or not np.array_equal(received.prs_mask, transmitted.prs_mask)):
        raise ConfigurationError("received and transmitted grids differ in reference layout")
    tx = transmitted.prs_values()
    if np.any(np.abs(tx) < 1e-9):
        raise DivisionHazardError("transmitted reference symbol with magnitude below 1e-9")
    return QuotientMatrix(
        values=received.prs_values() / tx,
        comb_size=transmitted.comb_size,
        numerology=transmitted.numerology,
        carrier_hz=received.carrier_hz,
        k0=np.array(transmitted.k0),
        prs_start=received.prs_start,
        kind=transmitted.kind,
    )
