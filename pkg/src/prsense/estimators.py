"""Range and velocity estimation from the quotient matrix.

Every column of the quotient matrix is a sampled complex exponential in
delay, every row one in Doppler. Range comes from a zero-padded inverse
DFT down each column, velocity from a zero-padded forward DFT along each
row. All peak indices are 0-based.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import QuotientMatrix
from .errors import ConfigurationError, DegenerateInputError
from .numerology import SPEED_OF_LIGHT, NumerologyConfig

AVERAGING = ("estimate", "spectrum")


@dataclass(frozen=True)
class RangeEstimate:
    """Range estimate of one quotient matrix.

    Attributes:
        range_m: Estimated range, meters.
        peak_index: Rounded consensus peak index in ``[0, m_a * N_J)``.
        oversampling: Zero-padding factor ``m_a``.
        spectrum_peak_mag: Mean unnormalized magnitude at the column peaks.
        mean_index: Unrounded averaged index the range is computed from.
        column_indices: Per-column argmax indices.
        spectrum: Column-averaged magnitude spectrum, length ``m_a * N_J``.
    """

    range_m: float
    peak_index: int
    oversampling: int
    spectrum_peak_mag: float
    mean_index: float
    column_indices: np.ndarray = field(repr=False)
    spectrum: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class VelocityEstimate:
    """Velocity estimate of one or more concatenated quotient matrices.

    ``symbols_per_frame`` lists the symbol span ``S_i`` of each frame.
    """

    velocity_mps: float
    peak_index: int
    oversampling: int
    spectrum_peak_mag: float
    mean_index: float
    frames_used: int = 1
    symbols_per_frame: tuple[int, ...] = ()
    row_indices: np.ndarray = field(default=None, repr=False)
    spectrum: np.ndarray = field(default=None, repr=False)


@dataclass(frozen=True)
class FrameMetrics:
    overhead: float
    refresh_s: float
    data_rate_bps: float


def _check_oversampling(m_a) -> int:
    if isinstance(m_a, bool) or int(m_a) != m_a or m_a < 1:
        raise ConfigurationError(f"m_a must be an integer >= 1, got {m_a!r}")
    return int(m_a)


def _positive(**kwargs):
    for name, value in kwargs.items():
        if not value > 0:
            raise ConfigurationError(f"{name} must be positive, got {value!r}")


def _consensus(indices: np.ndarray, length: int) -> float:
    """Mean of indices on a circle of ``length`` points, in ``[0, length)``.

    Indices are unwrapped around their circular mean first so that peaks
    straddling the wrap point average correctly.
    """
    angles = 2 * np.pi * indices / length
    # integer reference keeps the unwrap exact for integer indices
    ref = int(np.round(np.angle(np.mean(np.exp(1j * angles))) * length / (2 * np.pi))) % length
    unwrapped = ref + (indices - ref + length // 2) % length - length // 2
    return float(np.mean(unwrapped) % length)


def _peak_search(spectra: np.ndarray, axis: int, average: str):
    """Argmax along ``axis`` and the averaged index; ties go to the lowest index."""
    if average not in AVERAGING:
        raise ConfigurationError(f"average must be one of {AVERAGING}")
    length = spectra.shape[axis]
    mean_spec = spectra.mean(axis=1 - axis)
    indices = np.argmax(spectra, axis=axis)
    if average == "spectrum":
        peak = int(np.argmax(mean_spec))
        return float(peak), peak, float(mean_spec[peak]), indices, mean_spec
    peaks = np.take_along_axis(spectra, np.expand_dims(indices, axis), axis=axis)
    mean_index = _consensus(indices, length)
    peak = int(np.floor(mean_index + 0.5)) % length
    return mean_index, peak, float(np.mean(peaks)), indices, mean_spec


def estimate_range(q: QuotientMatrix, m_a: int = 1, average: str = "estimate") -> RangeEstimate:
    """Estimate range from the columns of ``q``.

    Each column gets an ``m_a * N_J``-point zero-padded inverse DFT; the
    per-column argmax indices are averaged (``average="estimate"``) or the
    magnitude spectra are averaged before one argmax (``"spectrum"``).

    Raises:
        DegenerateInputError: A column is identically zero.
    """
    m_a = _check_oversampling(m_a)
    values = np.asarray(q.values)
    if values.size == 0:
        raise DegenerateInputError("empty quotient matrix")
    if np.any(~values.any(axis=0)):
        raise DegenerateInputError("quotient matrix has an all-zero column")
    length = m_a * q.n_j
    spectra = np.abs(np.fft.ifft(values, n=length, axis=0)) * length
    mean_index, peak, mag, indices, spec = _peak_search(spectra, 0, average)
    step = SPEED_OF_LIGHT / (2 * m_a * q.n_subcarriers * q.numerology.delta_f)
    return RangeEstimate(mean_index * step, peak, m_a, mag, mean_index, indices, spec)


def _velocity_step(m_a: int, span_symbols: int, numerology: NumerologyConfig,
                   carrier_hz: float | None) -> float:
    if carrier_hz is None:
        raise ConfigurationError("quotient matrix carries no carrier frequency")
    return SPEED_OF_LIGHT / (2 * m_a * span_symbols * numerology.t_symbol * carrier_hz)


def estimate_velocity(q: QuotientMatrix, m_a: int = 1, average: str = "estimate",
                      signed: bool = False) -> VelocityEstimate:
    """Estimate radial velocity from the rows of ``q``.

    Each row gets an ``m_a * M_J``-point zero-padded forward DFT. Velocities
    lie in ``[0, v_max)`` unless ``signed`` maps the upper half of the
    spectrum to negative values.

    Raises:
        DegenerateInputError: A row is identically zero.
    """
    return _estimate_velocity(q, m_a, average, signed, (q.span_symbols,))


def _estimate_velocity(q, m_a, average, signed, frames) -> VelocityEstimate:
    m_a = _check_oversampling(m_a)
    values = np.asarray(q.values)
    if values.size == 0:
        raise DegenerateInputError("empty quotient matrix")
    if np.any(~values.any(axis=1)):
        raise DegenerateInputError("quotient matrix has an all-zero row")
    step = _velocity_step(m_a, q.span_symbols, q.numerology, q.carrier_hz)
    length = m_a * q.m_j
    spectra = np.abs(np.fft.fft(values, n=length, axis=1))
    mean_index, peak, mag, indices, spec = _peak_search(spectra, 1, average)
    signed_index = mean_index - length if signed and mean_index >= length / 2 else mean_index
    return VelocityEstimate(signed_index * step, peak, m_a, mag, mean_index,
                            frames_used=len(frames), symbols_per_frame=tuple(frames),
                            row_indices=indices, spectrum=spec)


def estimate_velocity_multiframe(frames: list[QuotientMatrix], m_a: int = 1,
                                 average: str = "estimate",
                                 signed: bool = False) -> VelocityEstimate:
    """Velocity from PRS symbols gathered over several frames.

    The frames' columns are concatenated and treated as one uniformly spaced
    sequence (``comb_size`` symbols apart), ignoring the gaps between the
    PRS bursts of consecutive frames.

    Raises:
        ConfigurationError: Frames differ in comb, numerology, carrier or
            subcarrier count, or the list is empty.
    """
    if not frames:
        raise ConfigurationError("at least one frame is required")
    first = frames[0]
    for f in frames[1:]:
        if (f.comb_size, f.n_j, f.numerology, f.carrier_hz) != (
                first.comb_size, first.n_j, first.numerology, first.carrier_hz):
            raise ConfigurationError("frames do not share pattern, numerology and carrier")
    joined = QuotientMatrix(
        values=np.concatenate([f.values for f in frames], axis=1),
        comb_size=first.comb_size,
        numerology=first.numerology,
        carrier_hz=first.carrier_hz,
        k0=np.concatenate([f.k0 for f in frames]),
        prs_start=first.prs_start,
        kind=first.kind,
    )
    return _estimate_velocity(joined, m_a, average, signed,
                              tuple(f.span_symbols for f in frames))


def range_resolution(n: int, delta_f: float) -> float:
    """``c / (2 N delta_f)``."""
    _positive(n=n, delta_f=delta_f)
    return SPEED_OF_LIGHT / (2 * n * delta_f)


def max_unambiguous_range(comb: int, delta_f: float) -> float:
    """``c / (2 K delta_f)``; independent of ``m_a``."""
    _positive(comb=comb, delta_f=delta_f)
    return SPEED_OF_LIGHT / (2 * comb * delta_f)


def velocity_resolution(m: int, t_s: float, f_c: float) -> float:
    """``c / (2 M T_s f_c)`` for a span of ``m`` symbols."""
    _positive(m=m, t_s=t_s, f_c=f_c)
    return SPEED_OF_LIGHT / (2 * m * t_s * f_c)


def max_unambiguous_velocity(comb: int, t_s: float, f_c: float) -> float:
    """``c / (2 K T_s f_c)``."""
    _positive(comb=comb, t_s=t_s, f_c=f_c)
    return SPEED_OF_LIGHT / (2 * comb * t_s * f_c)


def velocity_resolution_multiframe(s_i, t_s: float, f_c: float, n_f: int | None = None) -> float:
    """Velocity resolution ``c / (2 T_s f_c sum S_i)`` over several frames.

    ``s_i`` is either a list of per-frame symbol spans or one span repeated
    ``n_f`` times.
    """
    spans = [s_i] * n_f if n_f is not None else list(np.atleast_1d(s_i))
    total = int(np.sum(spans))
    _positive(total_symbols=total, t_s=t_s, f_c=f_c)
    return SPEED_OF_LIGHT / (2 * t_s * f_c * total)


def frame_metrics(s_i: int, numerology: NumerologyConfig, n_f: int = 1, m_d: int = 0,
                  bits_per_symbol: int = 2, n_subcarriers: int = 256) -> FrameMetrics:
    """PRS overhead, sensing refresh time and peak data rate.

    Args:
        s_i: PRS symbols in one frame.
        numerology: Carrier timing.
        n_f: Frames per velocity measurement.
        m_d: Data symbols per frame.
        bits_per_symbol: ``log2`` of the data constellation size.
        n_subcarriers: Subcarriers carrying data.

    Raises:
        ConfigurationError: ``s_i`` or ``s_i + m_d`` exceeds the frame.
    """
    capacity = numerology.symbols_per_frame
    if not 0 <= s_i <= capacity:
        raise ConfigurationError(f"s_i={s_i} exceeds the {capacity} symbols of a frame")
    if m_d < 0 or s_i + m_d > capacity:
        raise ConfigurationError(f"s_i + m_d = {s_i + m_d} exceeds {capacity} symbols")
    _positive(n_f=n_f)
    t_f = numerology.frame_duration
    return FrameMetrics(
        overhead=s_i / capacity,
        refresh_s=n_f * t_f,
        data_rate_bps=m_d * n_subcarriers * bits_per_symbol / t_f,
    )


def travel_distance(speed_kmh: float, seconds: float) -> float:
    """Distance in meters covered at ``speed_kmh`` during ``seconds``."""
    return speed_kmh / 3.6 * seconds
