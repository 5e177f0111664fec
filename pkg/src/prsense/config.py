"""Experiment configuration files.

Files are TOML. Sections may also be written in block form on one or more
lines, ``prs { comb = 4, symbols = 4, n_id = 0 }``, which is rewritten to a
``[prs]`` table before parsing.
"""
from __future__ import annotations

import re
import sys
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .channel import TargetScenario
from .errors import ConfigurationError
from .grid import PrsPattern
from .harness import SweepSpec

_BLOCK = re.compile(r"^[ \t]*([A-Za-z_][\w-]*)[ \t]*\{(.*?)\}[ \t]*$", re.MULTILINE | re.DOTALL)

SECTIONS = {
    "numerology": {"mu"},
    "prs": {"comb", "symbols", "span", "n_id", "re_offset"},
    "grid": {"subcarriers"},
    "target": {"range_m", "velocity_mps", "attenuation", "snr_db", "carrier_hz"},
    "sweep": {"snr_db", "trials", "m_a", "signal_kind", "frames", "seed", "phase_mode",
              "noise_convention", "average", "range_jitter_m", "velocity_jitter_mps",
              "signed_velocity"},
    "ambiguity": {"points", "symbols", "subcarriers", "comb"},
}


def _split_items(body: str) -> list[str]:
    """Split on commas and newlines outside brackets and quotes."""
    items, depth, quote, cur = [], 0, None, []
    for ch in body:
        if quote:
            quote = None if ch == quote else quote
        elif ch in "\"'":
            quote = ch
        elif ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        elif ch in ",\n" and depth == 0:
            items.append("".join(cur).strip())
            cur = []
            continue
        cur.append(ch)
    items.append("".join(cur).strip())
    return [i for i in items if i and not i.startswith("#")]


def _blocks_to_toml(text: str) -> str:
    return _BLOCK.sub(lambda m: f"[{m.group(1)}]\n" + "\n".join(_split_items(m.group(2))), text)


def parse_config(text: str) -> dict:
    """Parse config text into nested dicts, validating section and key names."""
    try:
        data = tomllib.loads(_blocks_to_toml(text))
    except tomllib.TOMLDecodeError as exc:
        raise ConfigurationError(f"invalid config: {exc}") from exc
    for section, values in data.items():
        if section not in SECTIONS or not isinstance(values, dict):
            raise ConfigurationError(f"unknown config section {section!r}")
        unknown = set(values) - SECTIONS[section]
        if unknown:
            raise ConfigurationError(f"unknown keys in [{section}]: {sorted(unknown)}")
    return data


def load_config(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)


def spec_from_config(cfg: dict, base: SweepSpec | None = None) -> SweepSpec:
    """Overlay a parsed config on ``base`` (default :class:`SweepSpec`)."""
    spec = base or SweepSpec()
    target = cfg.get("target", {})
    prs = cfg.get("prs", {})
    sweep = cfg.get("sweep", {})
    changes = {}
    if target:
        fields = dict(range_m=spec.scenario.range_m, velocity_mps=spec.scenario.velocity_mps,
                      attenuation=spec.scenario.attenuation, snr_db=spec.scenario.snr_db,
                      carrier_hz=spec.scenario.carrier_hz)
        fields.update({k: float(v) for k, v in target.items()})
        changes["scenario"] = TargetScenario(**fields)
        if "snr_db" in target and "snr_db" not in sweep:
            changes["snr_grid"] = (float(target["snr_db"]),)
    if prs:
        comb = int(prs.get("comb", spec.pattern.comb_size))
        offset = int(prs.get("re_offset", spec.pattern.re_offset))
        if "span" in prs:
            changes["pattern"] = PrsPattern.spanning(comb, int(prs["span"]), offset)
        else:
            changes["pattern"] = PrsPattern(comb, int(prs.get("symbols", spec.pattern.num_symbols)),
                                            offset)
        if "n_id" in prs:
            changes["n_id_seq"] = int(prs["n_id"])
    if "mu" in cfg.get("numerology", {}):
        changes["mu"] = int(cfg["numerology"]["mu"])
    if "subcarriers" in cfg.get("grid", {}):
        changes["n_subcarriers"] = int(cfg["grid"]["subcarriers"])
    renames = {"snr_db": "snr_grid", "m_a": "m_a_values", "seed": "master_seed"}
    for key, value in sweep.items():
        changes[renames.get(key, key)] = value
    try:
        return SweepSpec(**{**_spec_fields(spec), **changes})
    except TypeError as exc:
        raise ConfigurationError(str(exc)) from exc


def _spec_fields(spec: SweepSpec) -> dict:
    return {f: getattr(spec, f) for f in spec.__dataclass_fields__}
