import json
import math
import subprocess
import sys

import numpy as np
import pytest

from hybrid_coherence import cli, config, sweeps


def run_cli(*args, cwd=None):
    return subprocess.run([sys.executable, "-m", "hybrid_coherence", *args],
                          capture_output=True, text=True, cwd=cwd)


# --- configuration ------------------------------------------------------------------

def test_defaults_per_command():
    fig4 = config.default_config("fig4")
    assert fig4["bath"]["s_exp"] == 0.5 and fig4["bath"]["xi_c"] == 3.0
    assert fig4["rates"]["model"] == "no-lamb"
    assert config.default_config("fig2")["sweep"]["gamma0"] == [0.01, 0.02, 0.05, 0.1]
    assert math.isinf(config.default_config("evolve")["bath"]["inv_temp"])


def test_yaml_file_and_overrides(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("bath:\n  gamma0: 0.05\nsweep:\n  inv_temp: [0.01, 0.1]\n")
    cfg = config.resolve("fig3", path, ["system.g=0.05", "rates.model=flat"])
    assert cfg["bath"]["gamma0"] == 0.05 and cfg["bath"]["xi_c"] == 1.0
    assert cfg["system"]["g"] == 0.05 and cfg["rates"]["model"] == "flat"
    assert config.make_grid(cfg["sweep"]["inv_temp"], "x").tolist() == [0.01, 0.1]


@pytest.mark.parametrize("overrides", [
    ["system.g=0.6"],                 # 2g >= omega0
    ["rates.model=markov"],
    ["sweep.inv_temp=[1.0, 0.1]"],    # unsorted
    ["sweep.inv_temp=[]"],
    ["run.workers=0"],
    ["bath.gamma0=-1"],
    ["nonsense"],
])
def test_invalid_configurations(overrides):
    with pytest.raises(config.ConfigError):
        config.resolve("fig3", None, overrides)


def test_zero_temperature_commands_reject_finite_temperature():
    with pytest.raises(config.ConfigError):
        config.resolve("fig2", None, ["bath.inv_temp=1.0"])


def test_grids():
    assert config.make_grid({"start": 1e-3, "stop": 1e2, "num": 6, "log": True}, "x") == \
        pytest.approx(np.geomspace(1e-3, 1e2, 6))
    assert config.make_grid(0.3, "x").tolist() == [0.3]
    assert math.isinf(config.bath_params({"bath": {"gamma0": 0.02, "xi_c": 1, "s_exp": 1,
                                                    "inv_temp": "inf"}}).inv_temp)


# --- sweeps -----------------------------------------------------------------------------

def test_fig2_table_at_zero_coupling_and_half_width():
    hw = 0.02 * math.sqrt(3) / 2
    cfg = config.resolve("fig2", None, [f"sweep.g=[0.0, {hw}]", "sweep.gamma0=[0.02]",
                                        "rates.model=flat", "run.workers=1"])
    table = sweeps.run_fig2(cfg)
    assert table.header[:3] == ["gamma0", "g", "exact_abs"]
    assert table.column("exact_abs")[0] == pytest.approx(0.5, abs=1e-6)
    assert table.column("bm_abs")[0] == pytest.approx(0.5, abs=1e-12)
    assert table.column("bm_abs")[1] == pytest.approx(0.25, rel=1e-12)


def test_fig3_table():
    cfg = config.resolve("fig3", None, ["sweep.inv_temp={start: 0.001, stop: 100, num: 6, log: true}",
                                        "run.workers=1"])
    table = sweeps.run_fig3(cfg)
    assert len(table.rows) == 6
    hot = table.rows[0]
    assert hot[1] == pytest.approx(0.25, abs=0.01) and hot[2] == pytest.approx(0.25, abs=0.01)
    cold = table.column("kappa_minus_re")[-1]
    assert abs(cold) < 1e-6
    flags = table.column("qss_meaningful")
    assert flags[0] == 1 and flags[3] == 0   # omega0/kT = 1: no quasi steady state
    for name in ("r_lower_abs", "r_upper_abs"):
        assert np.all(table.column(name) <= 0.5 + 1e-6)


def test_fig4_table():
    cfg = config.resolve("fig4", None, ["sweep.inv_temp=[0.01, 0.05, 0.1]", "mc.n_traj=20000",
                                        "run.workers=1"])
    table = sweeps.run_fig4(cfg)
    width = table.column("width")
    assert np.allclose(width, math.sqrt(54))
    ratio = table.column("markov_ratio")
    assert ratio[1] < 0.2
    mc = table.column("mc_rate")
    assert np.isfinite(mc[0]) and np.all(np.isnan(mc[1:]))
    err = table.column("mc_stderr")[0]
    assert abs(mc[0] - table.column("kappa_sc")[0]) < 3 * err


def test_evolve_table_analytic_and_integrated_columns_agree():
    cfg = config.resolve("evolve", None, ["ode.n_samples=21", "bath.inv_temp=1.0"])
    table = sweeps.run_evolve(cfg)
    first = dict(zip(table.header, table.rows[0]))
    assert first["t"] == 0 and first["lower_re"] == 0
    assert first["upper_re"] == pytest.approx(0.5, rel=1e-15)
    for part in ("lower_re", "lower_im", "upper_re", "upper_im"):
        assert np.max(np.abs(table.column(part) - table.column("ode_" + part))) < 1e-8


def test_evolve_long_time_equals_fig2_born_markov_value():
    cfg = config.resolve("evolve", None, ["ode.t_final=10000", "ode.n_samples=5"])
    table = sweeps.run_evolve(cfg)
    lower = table.column("lower_re")[-1] + 1j * table.column("lower_im")[-1]
    fig2 = sweeps._fig2_point((config.resolve("fig2", None, []), 0.02, 0.1))
    assert abs(lower) == pytest.approx(fig2[5], abs=1e-12)


def test_parallel_map_preserves_order():
    cfg = config.resolve("fig3", None, ["sweep.inv_temp=[0.01, 0.1, 1.0, 10.0]"])
    serial = sweeps.run_fig3({**cfg, "run": {**cfg["run"], "workers": 1}})
    parallel = sweeps.run_fig3({**cfg, "run": {**cfg["run"], "workers": 2}})
    assert sweeps.to_csv(serial) == sweeps.to_csv(parallel)


def test_csv_format():
    table = sweeps.Table(["a", "b", "flag"], [[1 / 3, 2.0, True], [1e-20, math.nan, False]])
    text = sweeps.to_csv(table)
    assert text == "a,b,flag\n0.333333333333,2,1\n1e-20,nan,0\n"


# --- command line ------------------------------------------------------------------------

def test_cli_writes_identical_files(tmp_path):
    args = ["fig3", "--set", "sweep.inv_temp=[0.01, 1.0]", "--workers", "1"]
    assert run_cli(*args, "--out", str(tmp_path / "a.csv")).returncode == 0
    assert run_cli(*args, "--out", str(tmp_path / "b.csv")).returncode == 0
    a = (tmp_path / "a.csv").read_bytes()
    assert a == (tmp_path / "b.csv").read_bytes()
    assert a.startswith(b"inv_temp,r_lower_abs,")


def test_cli_print_config_and_flags(capsys):
    assert cli.main(["fig4", "--print-config", "--flat-bath", "--seed", "7", "--workers", "3"]) == 0
    out = capsys.readouterr().out
    assert "model: flat" in out and "seed: 7" in out and "workers: 3" in out


def test_cli_reports_errors_as_json():
    proc = run_cli("fig3", "--set", "system.g=0.7")
    assert proc.returncode != 0
    payload = json.loads(proc.stderr.strip().splitlines()[-1])
    assert payload["error"] == "ConfigError" and payload["command"] == "fig3"


def test_cli_rejects_conflicting_rate_flags():
    proc = run_cli("fig3", "--flat-bath", "--no-lamb-shift")
    assert proc.returncode == 2


def test_cli_stdout_and_config_file(tmp_path):
    path = tmp_path / "cfg.yaml"
    path.write_text("sweep:\n  inv_temp: [0.5]\nrun:\n  workers: 1\n")
    proc = run_cli("fig3", "--config", str(path), "--no-lamb-shift")
    assert proc.returncode == 0
    lines = proc.stdout.strip().splitlines()
    assert len(lines) == 2 and lines[1].startswith("0.5,")
