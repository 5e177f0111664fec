"""Monte Carlo RMSE sweeps, signal comparisons and trade-off tables.

Every trial draws its randomness from
``SeedSequence([master_seed, snr_index, m_a_index, trial])`` so results do
not depend on evaluation order, and the CSV output of a sweep is a pure
function of its :class:`SweepSpec`.
"""
from __future__ import annotations

import csv
import io
import json
import time
import warnings
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from .bounds import crlb_radar
from .channel import PHASE_MODES, NOISE_CONVENTIONS, TargetScenario, apply_echo, quotient
from .errors import ApproximationWarning, ConfigurationError, PrsenseError, TrialError, \
    UndefinedBoundError
from .estimators import (AVERAGING, estimate_range, estimate_velocity,
                         estimate_velocity_multiframe, frame_metrics, velocity_resolution_multiframe)
from .grid import PrsPattern, ResourceGrid, map_prs, map_reference
from .numerology import NumerologyConfig, numerology_from_mu
from .sequences import PrsSequenceId, baseline_sequence

SIGNAL_KINDS = ("PRS", "SS", "DMRS")
DMRS_COMB = 4

CSV_COLUMNS = ("kind", "snr_db", "m_a", "trials", "rmse_range_m", "rmse_velocity_mps",
               "root_crlb_range_m", "root_crlb_velocity_mps", "floor_range_m",
               "floor_velocity_mps")


@dataclass(frozen=True)
class SweepSpec:
    """One Monte Carlo experiment: a scenario swept over SNR and ``m_a``.

    For ``signal_kind="SS"`` the reference is one symbol of ``n_subcarriers``
    contiguous BPSK subcarriers (at most 127); for ``"DMRS"`` one comb-4
    symbol over ``n_subcarriers``. ``pattern`` only applies to PRS.
    ``range_jitter_m`` and ``velocity_jitter_mps`` draw each trial's truth
    uniformly from ``scenario value +- jitter``.
    """

    scenario: TargetScenario = TargetScenario(50.0, 15.0)
    pattern: PrsPattern = PrsPattern(4, 32)
    snr_grid: tuple[float, ...] = (5.0,)
    trials: int = 1000
    m_a_values: tuple[int, ...] = (1,)
    signal_kind: str = "PRS"
    frames: int = 1
    master_seed: int = 0
    mu: int = 3
    n_subcarriers: int = 256
    n_id_seq: int = 0
    phase_mode: str = "comb_free"
    noise_convention: str = "complex"
    average: str = "estimate"
    range_jitter_m: float = 0.0
    velocity_jitter_mps: float = 0.0
    signed_velocity: bool = False
    label: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "snr_grid", tuple(float(s) for s in np.atleast_1d(self.snr_grid)))
        object.__setattr__(self, "m_a_values", tuple(int(m) for m in np.atleast_1d(self.m_a_values)))
        if self.trials < 1:
            raise ConfigurationError("trials must be >= 1")
        if not self.snr_grid:
            raise ConfigurationError("snr_grid must not be empty")
        if not self.m_a_values or min(self.m_a_values) < 1:
            raise ConfigurationError("m_a values must be integers >= 1")
        if self.signal_kind not in SIGNAL_KINDS:
            raise ConfigurationError(f"signal_kind must be one of {SIGNAL_KINDS}")
        if self.frames < 1:
            raise ConfigurationError("frames must be >= 1")
        if self.master_seed < 0:
            raise ConfigurationError("master_seed must be non-negative")
        if self.phase_mode not in PHASE_MODES:
            raise ConfigurationError(f"phase_mode must be one of {PHASE_MODES}")
        if self.noise_convention not in NOISE_CONVENTIONS:
            raise ConfigurationError(f"noise_convention must be one of {NOISE_CONVENTIONS}")
        if self.average not in AVERAGING:
            raise ConfigurationError(f"average must be one of {AVERAGING}")
        if self.range_jitter_m < 0 or self.velocity_jitter_mps < 0:
            raise ConfigurationError("jitter must be non-negative")
        numerology_from_mu(self.mu)

    @property
    def numerology(self) -> NumerologyConfig:
        return numerology_from_mu(self.mu)

    @property
    def kind(self) -> str:
        return self.label or self.signal_kind

    def to_dict(self) -> dict:
        out = asdict(self)
        out["snr_grid"] = list(self.snr_grid)
        out["m_a_values"] = list(self.m_a_values)
        return out


@dataclass(frozen=True)
class SweepRow:
    kind: str
    snr_db: float
    m_a: int
    trials: int
    rmse_range_m: float
    rmse_velocity_mps: float
    root_crlb_range_m: float
    root_crlb_velocity_mps: float
    floor_range_m: float
    floor_velocity_mps: float


@dataclass(frozen=True, eq=False)
class TrialDetail:
    """Per-trial truths, estimates and peak indices of one sweep point."""

    true_range_m: np.ndarray
    true_velocity_mps: np.ndarray
    est_range_m: np.ndarray
    est_velocity_mps: np.ndarray
    range_peak: np.ndarray
    velocity_peak: np.ndarray


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_table(header, rows, path=None) -> str:
    """Render rows as CSV text with round-trip float formatting; write if ``path``."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text


@dataclass
class SweepResult:
    """Rows ordered by (kind, snr, m_a) plus per-trial detail and timing.

    Wall time is kept out of the CSV so identical specs give identical bytes.
    """

    rows: list[SweepRow]
    specs: list[SweepSpec]
    details: dict = field(default_factory=dict, repr=False)
    wall_time_s: dict = field(default_factory=dict)

    def row(self, snr_db: float, m_a: int = 1, kind: str | None = None) -> SweepRow:
        for r in self.rows:
            if r.snr_db == snr_db and r.m_a == m_a and (kind is None or r.kind == kind):
                return r
        raise KeyError((kind, snr_db, m_a))

    def series(self, kind: str, m_a: int, column: str) -> tuple[np.ndarray, np.ndarray]:
        rows = [r for r in self.rows if r.kind == kind and r.m_a == m_a]
        return (np.array([r.snr_db for r in rows]),
                np.array([getattr(r, column) for r in rows]))

    def to_csv(self, path=None) -> str:
        return write_table(CSV_COLUMNS, ([getattr(r, c) for c in CSV_COLUMNS] for r in self.rows),
                           path)

    def trial_records(self) -> list[dict]:
        """One JSON-ready record per trial."""
        out = []
        for (kind, snr_db, m_a), d in self.details.items():
            for i in range(len(d.est_range_m)):
                out.append(dict(kind=kind, trial=i, snr_db=snr_db, m_a=m_a,
                                est_range_m=float(d.est_range_m[i]),
                                est_velocity_mps=float(d.est_velocity_mps[i]),
                                peak_indices=[int(d.range_peak[i]), int(d.velocity_peak[i])]))
        return out

    def manifest(self) -> dict:
        return dict(
            specs=[s.to_dict() for s in self.specs],
            rows=len(self.rows),
            wall_time_s={f"{k[0]}|{k[1]}|{k[2]}": v for k, v in self.wall_time_s.items()},
        )

    @classmethod
    def merge(cls, results: list["SweepResult"]) -> "SweepResult":
        merged = cls([], [])
        for r in results:
            merged.rows.extend(r.rows)
            merged.specs.extend(r.specs)
            merged.details.update(r.details)
            merged.wall_time_s.update(r.wall_time_s)
        return merged


def build_transmit(spec: SweepSpec) -> list[ResourceGrid]:
    """Transmitted grids of every frame of ``spec``.

    Frames are identical except for the PRS ordinal of their first column,
    which keeps the Doppler phase running across frames.
    """
    num = spec.numerology
    n = spec.n_subcarriers
    if spec.signal_kind == "PRS":
        base = map_prs(spec.pattern, PrsSequenceId(spec.n_id_seq), n, num)
    elif spec.signal_kind == "SS":
        values = baseline_sequence("SS", n, seed=spec.n_id_seq)
        base = map_reference(values[:, None], 1, 0, n, num, kind="SS")
    else:
        if n % DMRS_COMB:
            raise ConfigurationError(f"DMRS needs a multiple of {DMRS_COMB} subcarriers")
        values = baseline_sequence("DMRS", n // DMRS_COMB, seed=spec.n_id_seq)
        base = map_reference(values[:, None], DMRS_COMB, 0, n, num, kind="DMRS")
    return [base if f == 0 else base.with_cells(base.cells, prs_start=f * base.m_prs)
            for f in range(spec.frames)]


def estimate_once(spec: SweepSpec, tx: list[ResourceGrid], scenario: TargetScenario, m_a: int,
              rng=None, noise: bool = True):
    qs = [quotient(apply_echo(g, scenario, spec.phase_mode, rng_seed=rng, noise=noise,
                              noise_convention=spec.noise_convention), g) for g in tx]
    r = estimate_range(qs[0], m_a, spec.average)
    if sum(q.m_j for q in qs) < 2:
        return r, None
    if len(qs) == 1:
        v = estimate_velocity(qs[0], m_a, spec.average, spec.signed_velocity)
    else:
        v = estimate_velocity_multiframe(qs, m_a, spec.average, spec.signed_velocity)
    return r, v


def _root_crlb(spec: SweepSpec, tx: list[ResourceGrid], snr_db: float) -> tuple[float, float]:
    g = tx[0]
    span = g.comb_size * g.m_prs * spec.frames
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ApproximationWarning)
            rep = crlb_radar(10 ** (snr_db / 10), spec.scenario.attenuation, spec.numerology,
                             g.num_subcarriers, span, g.comb_size, spec.scenario.carrier_hz)
    except (UndefinedBoundError, ConfigurationError):
        return float("nan"), float("nan")
    return rep.root_range_m, rep.root_velocity_mps


def quantization_floor(spec: SweepSpec, m_a: int, tx: list[ResourceGrid] | None = None):
    """Noiseless absolute range and velocity errors at the nominal truth."""
    tx = build_transmit(spec) if tx is None else tx
    r, v = estimate_once(spec, tx, spec.scenario, m_a, noise=False)
    v_err = abs(v.velocity_mps - spec.scenario.velocity_mps) if v is not None else float("nan")
    return abs(r.range_m - spec.scenario.range_m), v_err


def _rmse(err: np.ndarray) -> float:
    return float(np.sqrt(np.mean(np.square(err)))) if np.all(np.isfinite(err)) else float("nan")


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Monte Carlo RMSE of range and velocity at every (SNR, ``m_a``) point.

    Raises:
        TrialError: A trial failed; the error carries its seed.
    """
    tx = build_transmit(spec)
    result = SweepResult([], [spec])
    for si, snr_db in enumerate(spec.snr_grid):
        crlb_r, crlb_v = _root_crlb(spec, tx, snr_db)
        for ai, m_a in enumerate(spec.m_a_values):
            start = time.perf_counter()
            floor_r, floor_v = quantization_floor(spec, m_a, tx)
            cols = {k: np.full(spec.trials, np.nan) for k in
                    ("tr", "tv", "er", "ev", "pr", "pv")}
            for trial in range(spec.trials):
                seed = (spec.master_seed, si, ai, trial)
                truth_seq, noise_seq = np.random.SeedSequence(list(seed)).spawn(2)
                du, dv = np.random.default_rng(truth_seq).uniform(-1, 1, 2)
                scenario = replace(spec.scenario, snr_db=snr_db,
                                   range_m=spec.scenario.range_m + du * spec.range_jitter_m,
                                   velocity_mps=spec.scenario.velocity_mps
                                   + dv * spec.velocity_jitter_mps)
                try:
                    r, v = estimate_once(spec, tx, scenario, m_a, np.random.default_rng(noise_seq))
                except PrsenseError as exc:
                    raise TrialError(str(exc), seed) from exc
                cols["tr"][trial], cols["tv"][trial] = scenario.range_m, scenario.velocity_mps
                cols["er"][trial], cols["pr"][trial] = r.range_m, r.peak_index
                if v is not None:
                    cols["ev"][trial], cols["pv"][trial] = v.velocity_mps, v.peak_index
            has_v = not np.isnan(cols["ev"]).any()
            result.rows.append(SweepRow(
                kind=spec.kind, snr_db=snr_db, m_a=m_a, trials=spec.trials,
                rmse_range_m=_rmse(cols["er"] - cols["tr"]),
                rmse_velocity_mps=_rmse(cols["ev"] - cols["tv"]) if has_v else float("nan"),
                root_crlb_range_m=crlb_r,
                root_crlb_velocity_mps=crlb_v if has_v else float("nan"),
                floor_range_m=floor_r, floor_velocity_mps=floor_v))
            key = (spec.kind, snr_db, m_a)
            result.details[key] = TrialDetail(cols["tr"], cols["tv"], cols["er"], cols["ev"],
                                              cols["pr"].astype(int),
                                              np.nan_to_num(cols["pv"], nan=-1).astype(int))
            result.wall_time_s[key] = time.perf_counter() - start
    return result


def signal_specs(spec: SweepSpec, readings=("matched_length", "matched_bandwidth")) -> list:
    """Specs for the SS / DMRS / PRS ranging comparison.

    PRS runs on comb 4 with ``spec.pattern.num_symbols`` symbols in up to two
    readings: ``matched_length`` uses 127 PRS subcarriers (508-subcarrier
    span), ``matched_bandwidth`` spans the SS's 128-subcarrier width.
    """
    out = [replace(spec, signal_kind="SS", n_subcarriers=127, label="SS"),
           replace(spec, signal_kind="DMRS", n_subcarriers=240, label="DMRS")]
    pattern = PrsPattern(4, spec.pattern.num_symbols)
    widths = {"matched_length": (4 * 127, "PRS"), "matched_bandwidth": (128, "PRS_matched_bw")}
    for reading in readings:
        if reading not in widths:
            raise ConfigurationError(f"unknown PRS reading {reading!r}")
        n, label = widths[reading]
        out.append(replace(spec, signal_kind="PRS", pattern=pattern, n_subcarriers=n, label=label))
    return out


def compare_signals(spec: SweepSpec, readings=("matched_length", "matched_bandwidth")) -> SweepResult:
    """Ranging RMSE of SS, DMRS and PRS at matched SNR."""
    return SweepResult.merge([run_sweep(s) for s in signal_specs(spec, readings)])


def compare_combs(spec: SweepSpec, combs=(2, 4)) -> SweepResult:
    """Ranging RMSE for several comb sizes at equal bandwidth and symbol count."""
    specs = [replace(spec, pattern=PrsPattern(c, spec.pattern.num_symbols), label=f"comb{c}")
             for c in combs]
    return SweepResult.merge([run_sweep(s) for s in specs])


def multiframe_sweep(spec: SweepSpec, frame_counts=(1, 2, 3, 4)) -> SweepResult:
    """Velocity RMSE as PRS from more frames is accumulated."""
    return SweepResult.merge([run_sweep(replace(spec, frames=f, label=f"N_f={f}"))
                              for f in frame_counts])


def numerology_sweep(spec: SweepSpec, mus=(2, 3, 4)) -> SweepResult:
    """Velocity RMSE at the same symbol span for several subcarrier spacings."""
    return SweepResult.merge([run_sweep(replace(spec, mu=mu, label=f"mu={mu}")) for mu in mus])


def tradeoff_tables(numerologies, spec: SweepSpec | None = None, s_i_values=(32, 64, 128, 256),
                    n_f_values=(1, 2, 3, 4), snr_db_values=(0.0, 10.0, 20.0)) -> dict:
    """Overhead/refresh/resolution grid and the range-velocity CRLB trade-off.

    Returns:
        ``{"overhead": (header, rows), "crlb": (header, rows)}``. Overhead
        rows cover every (mu, S_i, N_f) with ``S_i`` fitting in a frame;
        CRLB rows use the ``n_subcarriers``, symbol span and carrier of
        ``spec``.
    """
    if not len(numerologies):
        raise ConfigurationError("numerology list must not be empty")
    spec = spec or SweepSpec()
    f_c = spec.scenario.carrier_hz
    overhead = []
    for mu in numerologies:
        num = numerology_from_mu(mu)
        for s_i in s_i_values:
            if s_i > num.symbols_per_frame:
                continue
            for n_f in n_f_values:
                fm = frame_metrics(s_i, num, n_f)
                overhead.append((int(mu), int(s_i), int(n_f), fm.overhead, fm.refresh_s,
                                 velocity_resolution_multiframe(s_i, num.t_symbol, f_c, n_f=n_f)))
    crlb = []
    comb, span = spec.pattern.comb_size, spec.pattern.span_symbols
    for mu in numerologies:
        num = numerology_from_mu(mu)
        for snr_db in snr_db_values:
            rep = crlb_radar(10 ** (snr_db / 10), spec.scenario.attenuation, num,
                             spec.n_subcarriers, span, comb, f_c)
            crlb.append((int(mu), float(snr_db), rep.crlb_range_m2, rep.crlb_velocity_mps2))
    return {
        "overhead": (("mu", "s_i", "n_f", "overhead", "refresh_s", "delta_v_multi_mps"), overhead),
        "crlb": (("mu", "snr_db", "crlb_range_m2", "crlb_velocity_mps2"), crlb),
    }


def save_manifest(path, payload: dict) -> Path:
    path = Path(path)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n")
    return path
