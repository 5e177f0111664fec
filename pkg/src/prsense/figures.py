"""Executable recipes that regenerate each result figure as CSV (and SVG)."""
from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import ambiguity
from .channel import apply_echo, quotient
from .errors import StandardsWarning
from .estimators import estimate_range, estimate_velocity, range_resolution, velocity_resolution
from .grid import PrsPattern, map_prs
from .harness import (SweepSpec, compare_combs, compare_signals, multiframe_sweep,
                      numerology_sweep, run_sweep, save_manifest, tradeoff_tables, write_table)
from .numerology import numerology_from_mu
from .sequences import PrsSequenceId

SNR_GRID = (-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0)


@dataclass
class FigureContext:
    """Shared inputs of one reproduction run."""

    base: SweepSpec = field(default_factory=SweepSpec)
    trials: int = 200
    seed: int = 0
    points: int = 65
    plot: bool = False
    cache: dict = field(default_factory=dict)

    def spec(self, **changes) -> SweepSpec:
        return replace(self.base, trials=self.trials, master_seed=self.seed, **changes)


def _baseline_sweep(ctx: FigureContext):
    if "baseline" not in ctx.cache:
        ctx.cache["baseline"] = run_sweep(ctx.spec(snr_grid=SNR_GRID, m_a_values=(1, 10)))
    return ctx.cache["baseline"]


def _noiseless_quotient(ctx: FigureContext):
    spec = ctx.spec()
    tx = map_prs(spec.pattern, PrsSequenceId(spec.n_id_seq), spec.n_subcarriers, spec.numerology)
    rx = apply_echo(tx, spec.scenario, spec.phase_mode, noise=False)
    return quotient(rx, tx)


def fig05(ctx, out):
    num = numerology_from_mu(ctx.base.mu)
    grid = map_prs(PrsPattern(4, 4), PrsSequenceId(), 1024, num)
    surf = ambiguity(grid, points=ctx.points)
    mag = surf.magnitude
    rows = [(float(t), float(f), float(mag[i, j]))
            for i, t in enumerate(surf.delays) for j, f in enumerate(surf.dopplers)]
    _plot(ctx, out, "surface", surf.delays * 1e6, surf.dopplers / 1e3, mag,
          "delay (us)", "Doppler (kHz)")
    return ("delay_s", "doppler_hz", "magnitude"), rows


def fig06(ctx, out):
    q = _noiseless_quotient(ctx)
    rows, series = [], []
    for m_a in (1, 10):
        est = estimate_range(q, m_a)
        step = range_resolution(q.n_subcarriers, q.numerology.delta_f) / m_a
        idx = np.arange(est.spectrum.size)
        rows += [(m_a, int(i), float(i * step), float(v)) for i, v in zip(idx, est.spectrum)]
        series.append((f"m_a={m_a}", idx * step, est.spectrum / est.spectrum.max(), "-"))
    _plot(ctx, out, "lines", series, "range (m)", "normalized magnitude")
    return ("m_a", "index", "range_m", "magnitude"), rows


def fig09(ctx, out):
    q = _noiseless_quotient(ctx)
    rows, series = [], []
    for m_a in (1, 10):
        est = estimate_velocity(q, m_a)
        step = velocity_resolution(q.span_symbols, q.numerology.t_symbol, q.carrier_hz) / m_a
        idx = np.arange(est.spectrum.size)
        rows += [(m_a, int(i), float(i * step), float(v)) for i, v in zip(idx, est.spectrum)]
        series.append((f"m_a={m_a}", idx * step, est.spectrum / est.spectrum.max(), "-"))
    _plot(ctx, out, "lines", series, "velocity (m/s)", "normalized magnitude")
    return ("m_a", "index", "velocity_mps", "magnitude"), rows


def _sweep_table(ctx, out, result, column, crlb, ylabel):
    if ctx.plot:
        from .plotting import rmse_plot
        rmse_plot(out.with_suffix(".svg"), result, column, crlb, ylabel)
    return result


def fig07(ctx, out):
    res = compare_signals(ctx.spec(pattern=PrsPattern(4, 4), snr_grid=SNR_GRID))
    return _sweep_table(ctx, out, res, "rmse_range_m", None, "range RMSE (m)")


def fig08(ctx, out):
    res = compare_combs(ctx.spec(pattern=PrsPattern(4, 4), snr_grid=SNR_GRID))
    return _sweep_table(ctx, out, res, "rmse_range_m", None, "range RMSE (m)")


def fig10(ctx, out):
    return _sweep_table(ctx, out, _baseline_sweep(ctx), "rmse_range_m", "root_crlb_range_m",
                        "range RMSE (m)")


def fig11(ctx, out):
    m_a = (1, 2, 4, 6, 8, 10, 12, 16, 20)
    res = run_sweep(ctx.spec(snr_grid=(0.0, 5.0, 10.0), m_a_values=m_a))
    series = []
    for snr in (0.0, 5.0, 10.0):
        series.append((f"SNR={snr:g} dB", m_a, [res.row(snr, m).rmse_range_m for m in m_a]))
    _plot(ctx, out, "lines", series, "m_a", "range RMSE (m)", logy=True)
    return res


def fig12(ctx, out):
    return _sweep_table(ctx, out, _baseline_sweep(ctx), "rmse_velocity_mps", "root_crlb_velocity_mps",
                        "velocity RMSE (m/s)")


def fig13(ctx, out):
    header, rows = tradeoff_tables((0, 1, 2, 3, 4), ctx.spec())["overhead"]
    series = []
    for s_i in sorted({r[1] for r in rows if r[0] == 2}):
        pts = [r for r in rows if r[0] == 2 and r[1] == s_i]
        series.append((f"mu=2 S_i={s_i}", [r[4] for r in pts], [r[5] for r in pts]))
    _plot(ctx, out, "lines", series, "sensing refresh time (s)", "velocity resolution (m/s)")
    return header, rows


def fig14(ctx, out):
    res = numerology_sweep(ctx.spec(pattern=PrsPattern.spanning(4, 128), snr_grid=SNR_GRID))
    return _sweep_table(ctx, out, res, "rmse_velocity_mps", None, "velocity RMSE (m/s)")


def fig15(ctx, out):
    spec = ctx.spec(mu=2, pattern=PrsPattern.spanning(4, 128), snr_grid=(-10.0, -5.0, 0.0, 5.0, 10.0),
                    velocity_jitter_mps=5.0)
    res = multiframe_sweep(spec)
    return _sweep_table(ctx, out, res, "rmse_velocity_mps", None, "velocity RMSE (m/s)")


def fig16(ctx, out):
    header, rows = tradeoff_tables((0, 1, 2, 3, 4), ctx.spec(), snr_db_values=(0.0, 10.0, 20.0))["crlb"]
    series = [(f"SNR={snr:g} dB", [r[2] for r in rows if r[1] == snr],
               [r[3] for r in rows if r[1] == snr]) for snr in (0.0, 10.0, 20.0)]
    _plot(ctx, out, "lines", series, "CRLB range (m^2)", "CRLB velocity (m/s)^2",
          logx=True, logy=True)
    return header, rows


def _plot(ctx, out: Path, kind: str, *args, **kwargs):
    if not ctx.plot:
        return
    from .plotting import line_plot, surface_plot
    if kind == "surface":
        surface_plot(out.with_suffix(".svg"), *args, **kwargs)
    else:
        line_plot(out.with_suffix(".svg"), *args, **kwargs)


FIGURES = {
    "fig05_ambiguity": fig05,
    "fig06_range_peak": fig06,
    "fig07_signal_compare": fig07,
    "fig08_comb_compare": fig08,
    "fig09_velocity_peak": fig09,
    "fig10_range_rmse": fig10,
    "fig11_range_rmse_vs_ma": fig11,
    "fig12_velocity_rmse": fig12,
    "fig13_overhead_tradeoff": fig13,
    "fig14_velocity_vs_scs": fig14,
    "fig15_multiframe_rmse": fig15,
    "fig16_crlb_tradeoff": fig16,
}


def reproduce(out_dir, ctx: FigureContext | None = None, names=None) -> dict:
    """Write ``<name>.csv`` (plus ``.svg`` when plotting) and ``manifest.json``."""
    ctx = ctx or FigureContext()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    names = list(FIGURES) if names is None else list(names)
    unknown = [n for n in names if n not in FIGURES]
    if unknown:
        from .errors import ConfigurationError
        raise ConfigurationError(f"unknown figures {unknown}; choose from {list(FIGURES)}")
    manifest = dict(version=__version__, seed=ctx.seed, trials=ctx.trials,
                    base=ctx.base.to_dict(), figures={})
    for name in names:
        out = out_dir / f"{name}.csv"
        start = time.perf_counter()
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", StandardsWarning)
            produced = FIGURES[name](ctx, out)
        if isinstance(produced, tuple):
            write_table(*produced, path=out)
            specs = []
        else:
            produced.to_csv(out)
            specs = [s.to_dict() for s in produced.specs]
        entry = dict(csv=out.name, wall_time_s=time.perf_counter() - start, specs=specs)
        if ctx.plot:
            entry["svg"] = out.with_suffix(".svg").name
        manifest["figures"][name] = entry
    save_manifest(out_dir / "manifest.json", manifest)
    return manifest
