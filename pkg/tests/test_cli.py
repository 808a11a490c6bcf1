"""Command-line interface: subcommands, exit codes, deterministic tables."""

import json
from pathlib import Path

import numpy as np
import pytest

from coolspec import EmptyGrid
from coolspec.cli import build_grid, main

BASE_CFG = """\
quality_factor = 1e4
input_power = 10.0
gain = 1e3
scheme = "cold_damping"
detection_efficiency = 0.8
temperature = 1e5
"""

FORCE_WINDOW = """
[force]
amplitude = 1.0
duration = 1.0
arrival_time = 3.0
carrier = 1.0

[window]
duration = 100.0
cooling_time = 0.1
"""


@pytest.fixture
def cfg(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(BASE_CFG + FORCE_WINDOW, encoding="utf-8")
    return str(path)


def read_table(path):
    meta, rows = [], []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        (meta if line.startswith("#") else rows).append(line)
    header = rows[0].split(",")
    data = np.array([[float(v) for v in row.split(",")] for row in rows[1:]])
    return meta, header, data


def test_build_grid_modes():
    lin = build_grid(0.0, 2.0, 5, log=False)
    assert np.allclose(lin, [0.0, 0.5, 1.0, 1.5, 2.0])
    logg = build_grid(0.1, 10.0, 3, log=True)
    assert np.allclose(logg, [0.1, 1.0, 10.0])


def test_build_grid_rejects_empty_or_inverted():
    with pytest.raises(EmptyGrid):
        build_grid(0.0, 2.0, 0, log=False)
    with pytest.raises(EmptyGrid):
        build_grid(2.0, 1.0, 5, log=False)
    with pytest.raises(EmptyGrid):
        build_grid(0.0, 2.0, 5, log=True)


def test_spectrum_stationary_table(cfg, tmp_path):
    out = tmp_path / "out"
    rc = main(["spectrum", "--config", cfg, "--out", str(out),
               "--points", "11"])
    assert rc == 0
    meta, header, data = read_table(out / "spectrum_stationary.csv")
    assert header == ["omega", "value"]
    assert data.shape == (11, 2)
    assert np.all(data[:, 1] > 0)
    assert any("config:" in line for line in meta)
    sidecar = json.loads((out / "spectrum_stationary.csv.manifest.json")
                         .read_text(encoding="utf-8"))
    assert sidecar["command"] == "spectrum"


def test_spectrum_nonstationary_records_initial_moments(cfg, tmp_path):
    out = tmp_path / "out"
    rc = main(["spectrum", "--config", cfg, "--mode", "nonstationary",
               "--out", str(out), "--points", "5"])
    assert rc == 0
    meta, _, _ = read_table(out / "spectrum_nonstationary.csv")
    assert any("q_var_init" in line for line in meta)


def test_tables_are_bit_identical_between_runs(cfg, tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    for out in (out1, out2):
        assert main(["spectrum", "--config", cfg, "--out", str(out),
                     "--points", "31"]) == 0
    t1 = (out1 / "spectrum_stationary.csv").read_text(encoding="utf-8")
    t2 = (out2 / "spectrum_stationary.csv").read_text(encoding="utf-8")
    assert t1 == t2


def test_snr_requires_force_block(tmp_path):
    path = tmp_path / "noforce.cfg"
    path.write_text(BASE_CFG + "\n[window]\nduration = 100.0\n",
                    encoding="utf-8")
    rc = main(["snr", "--config", str(path), "--out", str(tmp_path)])
    assert rc == 2


def test_snr_stationary_runs(cfg, tmp_path):
    out = tmp_path / "out"
    rc = main(["snr", "--config", cfg, "--out", str(out),
               "--omega-min", "0.5", "--omega-max", "1.5", "--points", "7"])
    assert rc == 0
    _, _, data = read_table(out / "snr_stationary.csv")
    assert np.all(data[:, 1] > 0)


def test_snr_averaged_requires_cooling_time(tmp_path):
    path = tmp_path / "nocool.cfg"
    path.write_text(BASE_CFG + "\n[force]\namplitude = 1.0\nduration = 1.0\n"
                    "\n[window]\nduration = 100.0\n", encoding="utf-8")
    rc = main(["snr", "--config", str(path), "--mode", "averaged",
               "--out", str(tmp_path)])
    assert rc == 2


def test_config_errors_exit_2(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("quality_factor = 1e4\nbogus = 3\n", encoding="utf-8")
    assert main(["spectrum", "--config", str(bad),
                 "--out", str(tmp_path)]) == 2


def test_numerical_failures_exit_3(tmp_path):
    # a pulse longer than a tenth of the window is a numerical-domain error
    path = tmp_path / "short.cfg"
    path.write_text(BASE_CFG + "\n[force]\namplitude = 1.0\n"
                    "duration = 50.0\n\n[window]\nduration = 100.0\n"
                    "cooling_time = 0.0\n", encoding="utf-8")
    rc = main(["snr", "--config", str(path), "--mode", "averaged",
               "--out", str(tmp_path), "--points", "3",
               "--omega-min", "0.9", "--omega-max", "1.1"])
    assert rc == 3


def test_unknown_figure_exits_2(tmp_path):
    assert main(["reproduce", "nosuchfigure", "--out", str(tmp_path)]) == 2


def test_validate_config_echoes_normal_form(cfg, capsys):
    assert main(["validate-config", "--config", cfg]) == 0
    echoed = capsys.readouterr().out
    assert "quality_factor = 10000.0" in echoed
    assert 'scheme = "cold_damping"' in echoed


def test_no_feedback_equals_cold_damping_at_zero_gain(tmp_path):
    tables = {}
    for name, scheme_line in (("free", 'scheme = "no_feedback"'),
                              ("cd0", 'scheme = "cold_damping"')):
        path = tmp_path / f"{name}.cfg"
        path.write_text("quality_factor = 1e4\ninput_power = 10.0\n"
                        f"gain = 0.0\n{scheme_line}\n"
                        "detection_efficiency = 0.8\ntemperature = 1e5\n",
                        encoding="utf-8")
        out = tmp_path / name
        assert main(["spectrum", "--config", str(path), "--out", str(out),
                     "--points", "21"]) == 0
        _, _, data = read_table(out / "spectrum_stationary.csv")
        tables[name] = data
    assert np.array_equal(tables["free"][:, 1], tables["cd0"][:, 1])


def test_oracle_subcommand_small_run(cfg, tmp_path):
    out = tmp_path / "out"
    rc = main(["oracle", "--config", cfg, "--out", str(out),
               "--seed", "3", "--ensemble", "48", "--steps", str(1 << 17),
               "--omega-min", "0.8", "--omega-max", "1.2", "--points", "10"])
    assert rc == 0
    _, header, data = read_table(out / "oracle_periodogram.csv")
    assert header == ["omega", "value", "stderr", "analytic", "z"]
    assert np.max(np.abs(data[:, 4])) < 4.0


def test_reproduce_emits_curves_and_plot_script(tmp_path):
    out = tmp_path / "figs"
    assert main(["reproduce", "nonstatm", "--out", str(out)]) == 0
    outdir = out / "nonstatm"
    csvs = sorted(outdir.glob("nonstatm_*.csv"))
    assert len(csvs) == 4
    assert (outdir / "nonstatm.gp").exists()
    # resonance values strictly decrease with shorter measurement windows
    peaks = []
    for gtm in ("0.1", "0.01", "0.001", "0.0001"):
        _, _, data = read_table(outdir / f"nonstatm_gTm{gtm}.csv")
        peaks.append(data[:, 1].max())
    assert all(a > b for a, b in zip(peaks, peaks[1:]))
