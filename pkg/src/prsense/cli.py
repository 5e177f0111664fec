"""Command-line interface: ``prsense <command> [options]``.

Every command prints CSV or JSON to stdout, or writes files under ``--out``.
Failures exit nonzero with a one-line JSON error record on stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from dataclasses import replace
from pathlib import Path

import numpy as np

from .bounds import ambiguity, crlb_positioning, crlb_radar, fisher_oracle
from .config import load_config, spec_from_config
from .errors import ApproximationWarning, PrsenseError, StandardsWarning
from .estimators import (frame_metrics, max_unambiguous_range, max_unambiguous_velocity,
                         range_resolution, travel_distance, velocity_resolution,
                         velocity_resolution_multiframe)
from .figures import FIGURES, FigureContext, reproduce
from .grid import PrsPattern, map_prs
from .harness import (SweepSpec, build_transmit, compare_combs, compare_signals, run_sweep,
                      save_manifest, tradeoff_tables, write_table, estimate_once)
from .sequences import PrsSequenceId


def _floats(tokens) -> list[float]:
    return [float(x) for tok in tokens for x in str(tok).split(",") if x.strip()]


def _ints(tokens) -> list[int]:
    return [int(x) for tok in tokens for x in str(tok).split(",") if x.strip()]


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="TOML config file (block syntax allowed)")
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--trials", type=int, help="Monte Carlo trials per point")
    p.add_argument("--snr-db", nargs="+", help="SNR values in dB, space or comma separated")
    p.add_argument("--ma", nargs="+", help="oversampling factors m_a")
    p.add_argument("--out", help="output directory; stdout when omitted")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--plot", action="store_true", help="also render SVG figures (needs --out)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="prsense", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "simulate": "one noisy realization: estimates and peak indices",
        "sweep": "Monte Carlo RMSE versus SNR",
        "compare": "PRS versus SS/DMRS and comb 2 versus comb 4",
        "ambiguity": "ambiguity function surface",
        "crlb": "closed-form and Fisher-oracle bounds, plus the numerology trade-off",
        "plan": "resolutions, unambiguous limits, overhead, refresh time and data rate",
        "figures": "regenerate every figure table (and SVGs with --plot)",
    }
    cmds = {name: sub.add_parser(name, help=text) for name, text in helps.items()}
    for p in cmds.values():
        _common(p)
    cmds["compare"].add_argument("--what", choices=("signals", "combs", "both"), default="both")
    cmds["ambiguity"].add_argument("--points", type=int, help="samples per axis (default 65)")
    cmds["plan"].add_argument("--frames", type=int, default=3, help="frames per measurement")
    cmds["plan"].add_argument("--data-symbols", type=int, default=432)
    cmds["figures"].add_argument("--only", nargs="+", choices=sorted(FIGURES))
    return parser


def _spec(args, **defaults) -> tuple[SweepSpec, dict]:
    cfg = load_config(args.config) if args.config else {}
    spec = spec_from_config(cfg, replace(SweepSpec(), **defaults))
    changes = {}
    if args.seed is not None:
        changes["master_seed"] = args.seed
    if args.trials is not None:
        changes["trials"] = args.trials
    if args.snr_db:
        changes["snr_grid"] = tuple(_floats(args.snr_db))
    if args.ma:
        changes["m_a_values"] = tuple(_ints(args.ma))
    return replace(spec, **changes), cfg


def _emit(args, name: str, header, rows, manifest: dict | None = None):
    rows = [list(r) for r in rows]
    if args.format == "json":
        text = json.dumps([dict(zip(header, r)) for r in rows], indent=2, default=float) + "\n"
    else:
        text = write_table(header, rows)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        path = out / f"{name}.{args.format}"
        path.write_text(text)
        if manifest is not None:
            save_manifest(out / f"{name}_manifest.json", manifest)
        print(path)
    else:
        sys.stdout.write(text)


def _emit_sweep(args, name: str, result, plot_cols=None):
    if args.format == "json":
        header = ("kind", "trial", "snr_db", "m_a", "est_range_m", "est_velocity_mps",
                  "peak_indices")
        rows = [[rec[h] for h in header] for rec in result.trial_records()]
        _emit(args, name, header, rows, result.manifest())
    elif args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        result.to_csv(out / f"{name}.csv")
        save_manifest(out / f"{name}_manifest.json", result.manifest())
        print(out / f"{name}.csv")
    else:
        sys.stdout.write(result.to_csv())
    if args.plot and args.out and plot_cols:
        from .plotting import rmse_plot
        for suffix, column, crlb, label in plot_cols:
            rmse_plot(Path(args.out) / f"{name}{suffix}.svg", result, column, crlb, label)


def cmd_simulate(args):
    spec, _ = _spec(args)
    tx = build_transmit(spec)
    snr = spec.snr_grid[0]
    scenario = replace(spec.scenario, snr_db=snr)
    rng = np.random.default_rng(spec.master_seed)
    header = ("snr_db", "m_a", "true_range_m", "est_range_m", "range_peak", "true_velocity_mps",
              "est_velocity_mps", "velocity_peak")
    rows = []
    for m_a in spec.m_a_values:
        r, v = estimate_once(spec, tx, scenario, m_a, rng)
        rows.append((snr, m_a, scenario.range_m, r.range_m, r.peak_index, scenario.velocity_mps,
                     v.velocity_mps if v else float("nan"), v.peak_index if v else -1))
    _emit(args, "simulate", header, rows, dict(spec=spec.to_dict()))


def cmd_sweep(args):
    spec, _ = _spec(args)
    _emit_sweep(args, "sweep", run_sweep(spec),
                [("_range", "rmse_range_m", "root_crlb_range_m", "range RMSE (m)"),
                 ("_velocity", "rmse_velocity_mps", "root_crlb_velocity_mps",
                  "velocity RMSE (m/s)")])


def cmd_compare(args):
    spec, _ = _spec(args, pattern=PrsPattern(4, 4))
    if args.what in ("signals", "both"):
        _emit_sweep(args, "fig07_signal_compare", compare_signals(spec),
                    [("", "rmse_range_m", None, "range RMSE (m)")])
    if args.what in ("combs", "both"):
        _emit_sweep(args, "fig08_comb_compare", compare_combs(spec),
                    [("", "rmse_range_m", None, "range RMSE (m)")])


def cmd_ambiguity(args):
    spec, cfg = _spec(args)
    acfg = cfg.get("ambiguity", {})
    points = args.points or int(acfg.get("points", 65))
    comb, symbols = int(acfg.get("comb", 4)), int(acfg.get("symbols", 4))
    grid = map_prs(PrsPattern(comb, symbols), PrsSequenceId(spec.n_id_seq),
                   int(acfg.get("subcarriers", 1024)), spec.numerology)
    surf = ambiguity(grid, points=points)
    mag = surf.magnitude
    rows = [(float(t), float(f), float(mag[i, j]))
            for i, t in enumerate(surf.delays) for j, f in enumerate(surf.dopplers)]
    _emit(args, "fig05_ambiguity", ("delay_s", "doppler_hz", "magnitude"), rows)
    if args.plot and args.out:
        from .plotting import surface_plot
        surface_plot(Path(args.out) / "fig05_ambiguity.svg", surf.delays * 1e6,
                     surf.dopplers / 1e3, mag, "delay (us)", "Doppler (kHz)")


def cmd_crlb(args):
    spec, _ = _spec(args)
    snr_grid = spec.snr_grid if args.snr_db else (-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0)
    n, m, comb = spec.n_subcarriers, spec.pattern.span_symbols, spec.pattern.comb_size
    xi, f_c = spec.scenario.attenuation, spec.scenario.carrier_hz
    rows = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ApproximationWarning)
        for snr_db in snr_grid:
            lin = 10 ** (snr_db / 10)
            for rep in (crlb_radar(lin, xi, spec.numerology, n, m, comb, f_c),
                        fisher_oracle(lin, xi, spec.numerology, n, m, comb, f_c)):
                rows.append((snr_db, rep.crlb_range_m2, rep.crlb_velocity_mps2, rep.source))
            rows.append((snr_db, crlb_positioning(lin, spec.numerology, n, comb),
                          float("nan"), "positioning"))
    _emit(args, "crlb", ("snr_db", "crlb_range_m2", "crlb_velocity_mps2", "source"), rows)
    if args.out:
        header, trows = tradeoff_tables((0, 1, 2, 3, 4), spec)["crlb"]
        _emit(args, "fig16_crlb_tradeoff", header, trows)


def cmd_plan(args):
    spec, _ = _spec(args)
    num, f_c = spec.numerology, spec.scenario.carrier_hz
    comb, span, n = spec.pattern.comb_size, spec.pattern.span_symbols, spec.n_subcarriers
    s_i = min(span, num.symbols_per_frame)
    data_symbols = min(args.data_symbols, num.symbols_per_frame - s_i)
    fm = frame_metrics(s_i, num, args.frames, data_symbols, 2, n)
    plan = dict(
        mu=num.mu, delta_f_hz=num.delta_f, t_symbol_s=num.t_symbol, n_subcarriers=n,
        comb=comb, span_symbols=span, carrier_hz=f_c,
        range_resolution_m=range_resolution(n, num.delta_f),
        max_unambiguous_range_m=max_unambiguous_range(comb, num.delta_f),
        velocity_resolution_mps=velocity_resolution(span, num.t_symbol, f_c),
        max_unambiguous_velocity_mps=max_unambiguous_velocity(comb, num.t_symbol, f_c),
        frames=args.frames,
        velocity_resolution_multiframe_mps=velocity_resolution_multiframe(
            s_i, num.t_symbol, f_c, n_f=args.frames),
        overhead=fm.overhead, refresh_s=fm.refresh_s, data_symbols=data_symbols,
        data_rate_bps=fm.data_rate_bps,
        travel_m_at_54kmh=travel_distance(54.0, fm.refresh_s),
    )
    _emit(args, "plan", tuple(plan), [tuple(plan.values())])


def cmd_figures(args):
    spec, cfg = _spec(args)
    if not args.out:
        raise PrsenseError("figures needs --out")
    ctx = FigureContext(base=spec, trials=args.trials or 200, seed=spec.master_seed,
                        points=int(cfg.get("ambiguity", {}).get("points", 65)), plot=args.plot)
    manifest = reproduce(args.out, ctx, args.only)
    print(json.dumps({k: v["csv"] for k, v in manifest["figures"].items()}, indent=2))


COMMANDS = {
    "simulate": cmd_simulate, "sweep": cmd_sweep, "compare": cmd_compare,
    "ambiguity": cmd_ambiguity, "crlb": cmd_crlb, "plan": cmd_plan, "figures": cmd_figures,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.plot and not args.out:
        print(json.dumps({"error": "UsageError", "message": "--plot requires --out"}),
              file=sys.stderr)
        return 2
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("once", StandardsWarning)
            COMMANDS[args.command](args)
    except (PrsenseError, ValueError, OSError) as exc:
        record = {"error": type(exc).__name__, "message": str(exc),
                  "command": args.command}
        seed = getattr(exc, "seed", None)
        if seed is not None:
            record["seed"] = list(seed)
        print(json.dumps(record), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
