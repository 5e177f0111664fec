"""Static SVG rendering of result tables with matplotlib's Agg backend."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

# Fixed hash salt keeps repeated SVG output byte-identical.
plt.rcParams["svg.hashsalt"] = "prsense"


def line_plot(path, series, xlabel: str, ylabel: str, title: str | None = None,
              logy: bool = False, logx: bool = False) -> Path:
    """Draw ``(label, x, y[, style])`` series and save to ``path``."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for item in series:
        label, x, y = item[:3]
        style = item[3] if len(item) > 3 else "-o"
        ax.plot(x, y, style, label=label, markersize=3)
    if logy:
        ax.set_yscale("log")
    if logx:
        ax.set_xscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    if len(series) > 1:
        ax.legend(fontsize=8)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, metadata={"Date": None})
    plt.close(fig)
    return path


def surface_plot(path, x: np.ndarray, y: np.ndarray, z: np.ndarray, xlabel: str, ylabel: str,
                 title: str | None = None, zlabel: str = "|chi| (normalized)") -> Path:
    """Pseudo-colour map of ``z[i, j]`` over ``x[i]``, ``y[j]``."""
    fig, ax = plt.subplots(figsize=(6, 4.5))
    mesh = ax.pcolormesh(x, y, z.T, shading="nearest", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label=zlabel)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, metadata={"Date": None})
    plt.close(fig)
    return path


def rmse_plot(path, result, column: str, crlb_column: str | None, ylabel: str,
              title: str | None = None) -> Path:
    """RMSE versus SNR for every (kind, m_a) of a sweep, with root-CRLB lines."""
    series = []
    keys = sorted({(r.kind, r.m_a) for r in result.rows}, key=lambda k: (k[0], k[1]))
    for kind, m_a in keys:
        snr, y = result.series(kind, m_a, column)
        if np.all(np.isnan(y)):
            continue
        series.append((f"{kind} m_a={m_a}", snr, y))
    if crlb_column:
        for kind in sorted({k for k, _ in keys}):
            snr, y = result.series(kind, keys[0][1], crlb_column)
            if not np.all(np.isnan(y)):
                series.append((f"{kind} root CRLB", snr, y, "--"))
    return line_plot(path, series, "SNR (dB)", ylabel, title, logy=True)
