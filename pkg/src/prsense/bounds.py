"""Cramer-Rao bounds for delay/Doppler estimation and the PRS ambiguity function."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (ApproximationWarning, ConfigurationError, SingularFisherError,
                     UndefinedBoundError)
from .grid import ResourceGrid
from .numerology import SPEED_OF_LIGHT, NumerologyConfig

_LARGE = 16


@dataclass(frozen=True)
class CrlbReport:
    """Bounds on delay, Doppler, range and velocity variance.

    ``source`` is ``"closed_form"`` or ``"fisher_oracle"``.
    """

    crlb_range_m2: float
    crlb_velocity_mps2: float
    crlb_delay_s2: float
    crlb_doppler_hz2: float
    inputs: dict = field(default_factory=dict)
    source: str = "closed_form"

    @property
    def root_range_m(self) -> float:
        return float(np.sqrt(self.crlb_range_m2))

    @property
    def root_velocity_mps(self) -> float:
        return float(np.sqrt(self.crlb_velocity_mps2))


def _dims(n: int, m: int, comb: int) -> tuple[int, int]:
    if comb < 1 or n < 1 or m < 1:
        raise ConfigurationError("n, m and comb must be positive")
    if n % comb or m % comb:
        raise ConfigurationError(f"n={n} and m={m} must be multiples of comb {comb}")
    return n // comb, m // comb


def _report(crlb_tau: float, crlb_fd: float, f_c: float, inputs: dict, source: str) -> CrlbReport:
    return CrlbReport(
        crlb_range_m2=SPEED_OF_LIGHT**2 / 4 * crlb_tau,
        crlb_velocity_mps2=SPEED_OF_LIGHT**2 / (4 * f_c**2) * crlb_fd,
        crlb_delay_s2=crlb_tau,
        crlb_doppler_hz2=crlb_fd,
        inputs=inputs,
        source=source,
    )


def crlb_radar(snr_linear: float, xi: float, numerology: NumerologyConfig, n: int, m: int,
               comb: int, f_c: float = 24e9) -> CrlbReport:
    """Large-``M, N`` closed-form CRLB of joint delay/Doppler estimation.

    ``n`` subcarriers and ``m`` symbol durations are spanned by the comb, so
    ``N_J = n / comb`` and ``M_J = m / comb`` reference samples are observed
    per symbol and per subcarrier.

    Raises:
        UndefinedBoundError: ``N_J <= 1`` or ``M_J <= 1``.
    """
    if snr_linear <= 0 or xi <= 0 or f_c <= 0:
        raise ConfigurationError("snr_linear, xi and f_c must be positive")
    n_j, m_j = _dims(n, m, comb)
    if n_j <= 1 or m_j <= 1:
        raise UndefinedBoundError(f"bound undefined for N_J={n_j}, M_J={m_j}")
    if n < _LARGE or m < _LARGE:
        warnings.warn(f"closed-form bound assumes M, N >> 1 (got M={m}, N={n})",
                      ApproximationWarning, stacklevel=2)
    gain = xi**2 * snr_linear * (2 * np.pi) ** 2
    t, t_s = numerology.t_useful, numerology.t_symbol
    crlb_tau = t**2 / gain * 48 / (m * n * (n_j - 1) * (7 * n_j + 1))
    crlb_fd = 1 / (gain * t_s**2) * 48 / (n * m * (m_j - 1) * (7 * m_j + 1))
    inputs = dict(xi=xi, snr_linear=snr_linear, T=t, T_s=t_s, M=m, N=n, N_J=n_j, M_J=m_j,
                  f_c=f_c, comb=comb)
    return _report(crlb_tau, crlb_fd, f_c, inputs, "closed_form")


def fisher_matrix(snr_linear: float, xi: float, numerology: NumerologyConfig, n: int, m: int,
                  comb: int, complex_noise: bool = False) -> np.ndarray:
    """Fisher information of ``(tau, f_d)`` by explicit summation.

    Observations are ``xi * exp(j2pi K m T_s f_d) * exp(-j2pi n K df tau)``
    for ``n < N_J`` and ``m < M_J``, with noise variance ``1/snr_linear``.
    ``complex_noise`` uses the circular complex likelihood, which doubles
    the information.
    """
    n_j, m_j = _dims(n, m, comb)
    kk = np.arange(n_j)[:, None]
    mm = np.arange(m_j)[None, :]
    s = xi * np.ones((n_j, m_j), dtype=complex)
    d_tau = -2j * np.pi * kk * comb * numerology.delta_f * s
    d_fd = 2j * np.pi * comb * mm * numerology.t_symbol * s
    grads = (d_tau, d_fd)
    scale = snr_linear * (2 if complex_noise else 1)
    return scale * np.array([[np.sum(np.real(a * np.conj(b))) for b in grads] for a in grads])


def fisher_oracle(snr_linear: float, xi: float, numerology: NumerologyConfig, n: int, m: int,
                  comb: int, f_c: float = 24e9, complex_noise: bool = False) -> CrlbReport:
    """CRLB from the inverse of :func:`fisher_matrix`, without approximation.

    Raises:
        SingularFisherError: The Fisher matrix is singular (e.g. ``M_J = 1``).
    """
    if n * m // comb**2 > 10**7:
        raise ConfigurationError("fisher_oracle is limited to 1e7 summation terms")
    f = fisher_matrix(snr_linear, xi, numerology, n, m, comb, complex_noise)
    det = f[0, 0] * f[1, 1] - f[0, 1] * f[1, 0]
    if f[0, 0] <= 0 or f[1, 1] <= 0 or det <= 1e-12 * f[0, 0] * f[1, 1]:
        raise SingularFisherError("Fisher information matrix is singular")
    inv = np.linalg.inv(f)
    n_j, m_j = _dims(n, m, comb)
    inputs = dict(xi=xi, snr_linear=snr_linear, T=numerology.t_useful, T_s=numerology.t_symbol,
                  M=m, N=n, N_J=n_j, M_J=m_j, f_c=f_c, comb=comb, fisher=f)
    return _report(float(inv[0, 0]), float(inv[1, 1]), f_c, inputs, "fisher_oracle")


def crlb_positioning(snr_linear: float, numerology: NumerologyConfig, n: int, comb: int) -> float:
    """Single-symbol ranging bound in m^2 with equal subcarrier power weights.

    Raises:
        UndefinedBoundError: ``N_J <= 1``.
    """
    if snr_linear <= 0:
        raise ConfigurationError("snr_linear must be positive")
    if n % comb:
        raise ConfigurationError(f"n={n} must be a multiple of comb {comb}")
    n_j = n // comb
    if n_j <= 1:
        raise UndefinedBoundError(f"bound undefined for N_J={n_j}")
    t = numerology.t_useful
    return (SPEED_OF_LIGHT**2 * t**2
            / (4 * np.pi**2 / 3 * snr_linear * n * (n_j - 1) * (2 * n_j - 1)))


@dataclass(frozen=True, eq=False)
class AmbiguitySurface:
    """Ambiguity function sampled on a delay x Doppler grid.

    Attributes:
        delays: Delay axis, seconds.
        dopplers: Doppler axis, Hz.
        values: Complex ``chi``, shape ``(len(delays), len(dopplers))``.
        normalization: ``|chi(0, 0)|``.
    """

    delays: np.ndarray
    dopplers: np.ndarray
    values: np.ndarray
    normalization: float

    @property
    def magnitude(self) -> np.ndarray:
        """``|chi|`` divided by the origin magnitude."""
        return np.abs(self.values) / self.normalization


def _symbols(grid: ResourceGrid):
    if grid.m_prs == 0:
        raise ConfigurationError("grid carries no reference symbols")
    num = grid.numerology
    starts = grid.prs_symbols * num.t_symbol
    freqs = [grid.prs_rows(j) * num.delta_f for j in range(grid.m_prs)]
    return grid.prs_values(), starts, freqs, num.t_symbol


def _overlap(t1: float, t2: float, t_s: float):
    t_max = min(t1 + t_s, t2 + t_s)
    t_min = max(t1, t2)
    return t_max - t_min, (t_max + t_min) / 2


def _origin_value(grid: ResourceGrid) -> complex:
    return complex(ambiguity(grid, np.array([0.0]), np.array([0.0]), normalize=False).values[0, 0])


def ambiguity(grid: ResourceGrid, delays=None, dopplers=None, points: int = 65,
              normalize: bool = True) -> AmbiguitySurface:
    """Evaluate the closed-form ambiguity function of the reference signal.

    Symbol ``g`` of the grid occupies ``[g T_s, (g+1) T_s)`` and reference
    subcarrier ``n`` sits at ``n * delta_f``. Per symbol pair the double sum
    over subcarriers is regrouped by subcarrier difference, so each pair
    costs one correlation plus one sinc kernel per Doppler bin. Pairs that do
    not overlap are skipped.

    Args:
        grid: Transmitted grid.
        delays: Delay samples in seconds; default ``points`` values over
            ``+-M T_s``.
        dopplers: Doppler samples in Hz; default ``points`` values over
            ``+-1/T_s``.
        points: Default axis length; odd so the origin is sampled.
        normalize: Compute ``chi(0, 0)`` for :attr:`AmbiguitySurface.magnitude`.
    """
    s, starts, freqs, t_s = _symbols(grid)
    span = grid.num_symbols * t_s
    delays = np.linspace(-span, span, points) if delays is None else np.atleast_1d(delays)
    dopplers = (np.linspace(-1 / t_s, 1 / t_s, points) if dopplers is None
                else np.atleast_1d(dopplers))
    delays = np.asarray(delays, dtype=float)
    dopplers = np.asarray(dopplers, dtype=float)
    if delays.size == 0 or dopplers.size == 0:
        raise ConfigurationError("delay and Doppler grids must be nonempty")
    n_j = s.shape[0]
    lags = np.arange(-(n_j - 1), n_j)
    out = np.zeros((delays.size, dopplers.size), dtype=complex)
    for i, tau in enumerate(delays):
        for m1 in range(len(starts)):
            for m2 in range(len(starts)):
                length, t_avg = _overlap(starts[m1], tau + starts[m2], t_s)
                if length <= 0:
                    continue
                v = s[:, m2] * np.exp(-2j * np.pi * freqs[m2] * tau)
                corr = np.correlate(s[:, m1], v, "full")
                # freqs[m1][k + d] - freqs[m2][k] is the same for every k
                delta = freqs[m1][0] - freqs[m2][0] + lags * (freqs[m1][1] - freqs[m1][0]
                                                              if n_j > 1 else 0.0)
                nu = delta[None, :] + dopplers[:, None]
                kernel = length * np.sinc(nu * length) * np.exp(2j * np.pi * nu * t_avg)
                out[i] += kernel @ corr
    norm = abs(_origin_value(grid)) if normalize else 1.0
    return AmbiguitySurface(delays, dopplers, out, norm)


def ambiguity_direct(grid: ResourceGrid, delays, dopplers) -> np.ndarray:
    """Term-by-term quadruple sum of the closed form; for small grids only."""
    s, starts, freqs, t_s = _symbols(grid)
    delays = np.atleast_1d(np.asarray(delays, dtype=float))
    dopplers = np.atleast_1d(np.asarray(dopplers, dtype=float))
    out = np.zeros((delays.size, dopplers.size), dtype=complex)
    for i, tau in enumerate(delays):
        for j, fd in enumerate(dopplers):
            total = 0j
            for m1 in range(len(starts)):
                for m2 in range(len(starts)):
                    length, t_avg = _overlap(starts[m1], tau + starts[m2], t_s)
                    if length <= 0:
                        continue
                    for k1 in range(s.shape[0]):
                        for k2 in range(s.shape[0]):
                            nu = freqs[m1][k1] - freqs[m2][k2] + fd
                            total += (s[k1, m1] * np.conj(s[k2, m2])
                                      * np.exp(2j * np.pi * freqs[m2][k2] * tau)
                                      * length * np.sinc(nu * length)
                                      * np.exp(2j * np.pi * nu * t_avg))
            out[i, j] = total
    return out
