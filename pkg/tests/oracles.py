"""Independent reference implementations used only by the tests."""
from __future__ import annotations

import numpy as np

SPEED_OF_LIGHT = 3e8


def gold_reference(c_init: int, length: int, nc: int = 1600) -> list[int]:
    """Bit-at-a-time Gold sequence with plain Python integers."""
    x1 = [1] + [0] * 30
    x2 = [(c_init >> i) & 1 for i in range(31)]
    for n in range(length + nc):
        x1.append((x1[n + 3] + x1[n]) % 2)
        x2.append((x2[n + 3] + x2[n + 2] + x2[n + 1] + x2[n]) % 2)
    return [(x1[n + nc] + x2[n + nc]) % 2 for n in range(length)]


def signal(values, starts, freqs, t_s, t):
    """Continuous-time multi-symbol OFDM waveform with rectangular symbols."""
    t = np.asarray(t, dtype=float)
    out = np.zeros(t.shape, dtype=complex)
    for j, t0 in enumerate(starts):
        inside = (t >= t0) & (t < t0 + t_s)
        if inside.any():
            out[inside] = np.exp(2j * np.pi * np.outer(t[inside], freqs[j])) @ values[:, j]
    return out


def ambiguity_quadrature(values, starts, freqs, t_s, tau, fd, sub=64, order=32):
    """Integrate x(t) x*(t - tau) exp(j2pi fd t) with composite Gauss-Legendre."""
    starts = np.asarray(starts, dtype=float)
    edges = np.unique(np.concatenate([starts, starts + t_s, tau + starts, tau + starts + t_s]))
    lo = max(starts.min(), tau + starts.min())
    hi = min(starts.max() + t_s, tau + starts.max() + t_s)
    if hi <= lo:
        return 0j
    edges = edges[(edges >= lo) & (edges <= hi)]
    nodes, weights = np.polynomial.legendre.leggauss(order)
    total = 0j
    for a, b in zip(edges[:-1], edges[1:]):
        cuts = np.linspace(a, b, sub + 1)
        for p, q in zip(cuts[:-1], cuts[1:]):
            # midpoint-shifted nodes never sit on a symbol boundary
            t = (q - p) / 2 * nodes + (q + p) / 2
            f = (signal(values, starts, freqs, t_s, t)
                 * np.conj(signal(values, starts, freqs, t_s, t - tau))
                 * np.exp(2j * np.pi * fd * t))
            total += (q - p) / 2 * np.dot(weights, f)
    return total


def c_init_reference(n_id: int, slot: int, symbol: int) -> int:
    """Gold initializer of a PRS symbol, evaluated with Python integers."""
    return (2**22 * (n_id // 1024) + 2**10 * (14 * slot + symbol + 1) * (2 * (n_id % 1024) + 1)
            + (n_id % 1024)) % 2**31


def m_sequence_reference() -> list[int]:
    """Length-127 M-sequence of the PSS, x(i+7) = x(i+4) + x(i) mod 2."""
    x = [0, 1, 1, 0, 1, 1, 1]
    while len(x) < 127:
        i = len(x) - 7
        x.append((x[i + 4] + x[i]) % 2)
    return x


def phase_slope(column: np.ndarray) -> float:
    """Least-squares slope of the unwrapped phase, radians per sample."""
    phase = np.unwrap(np.angle(column))
    k = np.arange(len(column))
    return float(np.polyfit(k, phase, 1)[0])


def brute_force_search(values: np.ndarray, range_points: int, doppler_points: int):
    """Exhaustive delay-Doppler correlation search on a discrete grid.

    Returns the ``(p, q)`` maximizing
    ``|sum_{k,m} S[k,m] exp(j2pi p k / P) exp(-j2pi q m / Q)|``; ties go to the
    lowest ``p`` then lowest ``q``.
    """
    n_j, m_j = values.shape
    best, best_pq = -1.0, (0, 0)
    k = np.arange(n_j)[:, None]
    m = np.arange(m_j)[None, :]
    for p in range(range_points):
        for q in range(doppler_points):
            steer = np.exp(2j * np.pi * p * k / range_points) * np.exp(-2j * np.pi * q * m / doppler_points)
            metric = abs(np.sum(values * steer))
            if metric > best * (1 + 1e-12):
                best, best_pq = metric, (p, q)
    return best_pq
