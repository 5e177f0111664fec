import json

import pytest

from prsense.cli import main
from prsense.config import load_config, parse_config, spec_from_config
from prsense.errors import ConfigurationError

BLOCK = """
numerology { mu = 3 }
prs { comb = 4, span = 128, n_id = 5 }
grid { subcarriers = 256 }
target {
  range_m = 60.0,
  velocity_mps = -10.0,
  snr_db = 0
}
sweep { trials = 12, m_a = [1, 10], seed = 3, signed_velocity = true }
"""


def test_block_syntax():
    cfg = parse_config(BLOCK)
    spec = spec_from_config(cfg)
    assert spec.pattern.num_symbols == 32 and spec.n_id_seq == 5
    assert spec.scenario.range_m == 60.0 and spec.scenario.velocity_mps == -10.0
    assert spec.snr_grid == (0.0,) and spec.m_a_values == (1, 10)
    assert (spec.trials, spec.master_seed, spec.signed_velocity) == (12, 3, True)


def test_plain_toml_equals_block_form():
    toml = "[prs]\ncomb = 2\nsymbols = 4\n[sweep]\nsnr_db = [-5, 5]\n"
    block = "prs { comb = 2, symbols = 4 }\nsweep { snr_db = [-5, 5] }\n"
    assert parse_config(toml) == parse_config(block)


@pytest.mark.parametrize("text", ["radar { x = 1 }", "prs { comb = 4, width = 3 }", "prs {"])
def test_bad_config(text):
    with pytest.raises(ConfigurationError):
        parse_config(text)


def test_bad_values_surface_as_configuration_errors():
    with pytest.raises(ConfigurationError):
        spec_from_config(parse_config("prs { comb = 5, symbols = 4 }"))
    with pytest.raises(ConfigurationError):
        load_config("/nonexistent/prsense.toml")


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_plan_json(capsys):
    code, out, _ = _run(capsys, "plan", "--format", "json")
    plan = json.loads(out)[0]
    assert code == 0
    assert plan["range_resolution_m"] == pytest.approx(4.8828125)
    assert plan["refresh_s"] == pytest.approx(0.03)


def test_simulate_and_sweep(capsys, tmp_path):
    cfg = tmp_path / "run.toml"
    cfg.write_text(BLOCK)
    code, out, _ = _run(capsys, "simulate", "--config", str(cfg), "--ma", "1,10")
    assert code == 0 and len(out.strip().splitlines()) == 3
    outs = []
    for name in ("a", "b"):
        code, _, _ = _run(capsys, "sweep", "--config", str(cfg), "--snr-db", "0", "10",
                          "--out", str(tmp_path / name))
        assert code == 0
        outs.append((tmp_path / name / "sweep.csv").read_bytes())
    assert outs[0] == outs[1]
    assert (tmp_path / "a" / "sweep_manifest.json").exists()


def test_sweep_json_records(capsys):
    code, out, _ = _run(capsys, "sweep", "--trials", "3", "--format", "json")
    records = json.loads(out)
    assert code == 0 and len(records) == 3 and len(records[0]["peak_indices"]) == 2


def test_error_record(capsys):
    code, _, err = _run(capsys, "sweep", "--trials", "0")
    record = json.loads(err)
    assert code == 1 and record["error"] == "ConfigurationError"


def test_plot_needs_out(capsys):
    code, _, err = _run(capsys, "plan", "--plot")
    assert code == 2 and "--out" in err


def test_ambiguity_and_figures(capsys, tmp_path):
    code, out, _ = _run(capsys, "ambiguity", "--points", "5")
    assert code == 0 and len(out.strip().splitlines()) == 26
    code, _, _ = _run(capsys, "figures", "--only", "fig13_overhead_tradeoff", "fig06_range_peak",
                      "--out", str(tmp_path), "--plot")
    assert code == 0
    for name in ("fig13_overhead_tradeoff", "fig06_range_peak"):
        assert (tmp_path / f"{name}.csv").exists() and (tmp_path / f"{name}.svg").exists()
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert set(manifest["figures"]) == {"fig13_overhead_tradeoff", "fig06_range_peak"}


def test_crlb_command(capsys):
    code, out, _ = _run(capsys, "crlb", "--snr-db", "5")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 4
    assert lines[1].startswith("5.0,0.000648133846")
