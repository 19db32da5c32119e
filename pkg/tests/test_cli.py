"""End-to-end CLI behavior: scenario runs, output files, exit codes."""

import json

import numpy as np
import pytest

from qbounce.cli import main

FAST_CFG = """
packet.kind = gaussian
method = wall-mirror
times.start = 0.0
times.stop = 1.0
times.step = 0.1
times.snapshots = 0.0, 1.0
grid.position.n = 2048
grid.momentum.n = 1024
quadrature.closed_form = true
output.dir = out
"""


@pytest.fixture
def cfg_path(tmp_path):
    path = tmp_path / "fast.cfg"
    path.write_text(FAST_CFG)
    return path


def test_list_scenarios(capsys):
    assert main(["list-scenarios"]) == 0
    names = capsys.readouterr().out.split()
    assert "standard.cfg" in names
    assert len(names) >= 10


def test_run_writes_expected_files(cfg_path, tmp_path, capsys):
    out = tmp_path / "results"
    assert main(["run", str(cfg_path), "--output-dir", str(out)]) == 0
    produced = {p.name for p in out.iterdir()}
    assert produced == {"series.csv", "summary.json",
                        "snapshot_x_0.000.csv", "snapshot_p_0.000.csv",
                        "snapshot_x_1.000.csv", "snapshot_p_1.000.csv"}
    summary = json.loads((out / "summary.json").read_text())
    assert summary["classical_collision_time"] == pytest.approx(1.0)
    assert summary["norm_drift"] < 1e-7
    series = (out / "series.csv").read_text().splitlines()
    assert series[0] == "t,norm,mean_x,dx,mean_p,dp,product"
    assert len(series) == 12  # header + 11 rows


def test_runs_are_deterministic(cfg_path, tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    main(["run", str(cfg_path), "--output-dir", str(out1)])
    main(["run", str(cfg_path), "--output-dir", str(out2)])
    for p1 in sorted(out1.iterdir()):
        assert p1.read_bytes() == (out2 / p1.name).read_bytes()


def test_jsonl_format_override(cfg_path, tmp_path):
    out = tmp_path / "jl"
    assert main(["run", str(cfg_path), "--output-dir", str(out),
                 "--format", "jsonl"]) == 0
    rows = [json.loads(line)
            for line in (out / "series.jsonl").read_text().splitlines()]
    assert len(rows) == 11
    assert rows[0]["t"] == 0.0
    assert rows[0]["product"] == pytest.approx(0.5, abs=1e-6)


def test_threaded_snapshots_match_serial(cfg_path, tmp_path):
    serial, threaded = tmp_path / "s", tmp_path / "t"
    main(["run", str(cfg_path), "--output-dir", str(serial)])
    main(["run", str(cfg_path), "--output-dir", str(threaded), "--threads", "4"])
    for p in sorted(serial.iterdir()):
        assert p.read_bytes() == (threaded / p.name).read_bytes()


def test_output_root_env_var(cfg_path, tmp_path, monkeypatch):
    monkeypatch.setenv("QBOUNCE_OUTPUT_ROOT", str(tmp_path))
    assert main(["run", str(cfg_path)]) == 0
    assert (tmp_path / "out" / "series.csv").exists()


def test_unknown_scenario_name_is_an_error():
    assert main(["run", "no-such-scenario"]) == 1


def test_snapshot_density_matches_series_norm(cfg_path, tmp_path):
    out = tmp_path / "n"
    main(["run", str(cfg_path), "--output-dir", str(out)])
    data = np.loadtxt(out / "snapshot_x_1.000.csv", delimiter=",", skiprows=1)
    x, re, im, abs2 = data.T
    np.testing.assert_allclose(abs2, re ** 2 + im ** 2, atol=1e-15)
    assert np.trapezoid(abs2, x) == pytest.approx(1.0, abs=1e-9)


def test_invalid_config_exit_code(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("method = warp\n")
    assert main(["run", str(bad)]) == 1


def test_wall_packet_must_start_left_of_wall(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("packet.x0 = 5.0\nmethod = wall-mirror\n"
                   "grid.position.min = -10.0\ngrid.position.max = 0.0\n")
    assert main(["run", str(bad), "--output-dir", str(tmp_path / "o")]) == 1


def test_under_resolved_quadrature_exit_code(tmp_path):
    bad = tmp_path / "coarse.cfg"
    bad.write_text("""
method = wall-sine
times.start = 0.0
times.stop = 2.0
times.step = 1.0
quadrature.n_nodes = 64
quadrature.closed_form = false
""")
    assert main(["run", str(bad), "--output-dir", str(tmp_path / "o")]) == 2
