import csv
import io
import json
import math
import subprocess
import sys

import pytest

from lambda_cqed.cli import EXIT_COMPUTE, EXIT_CONFIG, EXIT_OK, main
from lambda_cqed.hamiltonian import SystemParams
from lambda_cqed.sweep import RECORD_COLUMNS, find_magic


def run(*args, cwd=None):
    return subprocess.run(
        [sys.executable, "-m", "lambda_cqed", *args],
        capture_output=True,
        text=True,
        cwd=cwd,
    )


def write_cfg(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc) if isinstance(doc, dict) else doc)
    return str(path)


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_help():
    res = run("--help")
    assert res.returncode == 0
    for mode in ("eigen", "steady", "sweep1d", "sweep2d", "magic", "g2tau"):
        assert mode in res.stdout


def test_sweep1d_default_profile_row_count(tmp_path):
    out = tmp_path / "spectrum.csv"
    res = run("sweep1d", "--out", str(out))
    assert res.returncode == EXIT_OK, res.stderr
    rows = read_csv(out.read_text())
    assert len(rows) == 801
    assert list(rows[0]) == list(RECORD_COLUMNS)
    assert float(rows[0]["delta_p"]) == -20.0 and float(rows[-1]["delta_p"]) == 20.0
    assert "points=801" in res.stdout


def test_eigen_ladder_csv(tmp_path):
    cfg = write_cfg(tmp_path, {"mode": "eigen", "g": 20})
    res = run("eigen", "--config", cfg)
    assert res.returncode == EXIT_OK, res.stderr
    rows = read_csv(res.stdout)
    assert len(rows) == 81 * 2
    first = rows[0]
    assert (float(first["omega_L"]), int(first["n"])) == (0.0, 1)
    assert float(first["lambda_plus"]) == pytest.approx(20.0)
    row = next(r for r in rows if float(r["omega_L"]) == 15.0 and r["n"] == "2")
    assert float(row["lambda_plus"]) == pytest.approx(math.sqrt(225 + 800), abs=1e-9)
    assert float(row["lambda_zero"]) == pytest.approx(0.0, abs=1e-9)


def test_steady_to_stdout_jsonl():
    res = run("steady", "--format", "jsonl", "--nmax", "5")
    assert res.returncode == EXIT_OK
    rec = json.loads(res.stdout)
    assert set(rec) == set(RECORD_COLUMNS)
    assert rec["converged"] is True
    assert "mode=steady" in res.stderr


def test_g2tau_rows(tmp_path):
    cfg = write_cfg(
        tmp_path,
        {"omega_L": 11.0, "delta_p": -14.866068747318506, "n_max": 5, "tau_points": 20, "tau_max": 5},
    )
    res = run("g2tau", "--config", cfg)
    assert res.returncode == EXIT_OK, res.stderr
    rows = read_csv(res.stdout)
    assert len(rows) == 20
    assert float(rows[0]["tau"]) == 0.0
    assert float(rows[-1]["tau"]) == pytest.approx(5.0)


def test_magic_matches_library(tmp_path):
    doc = {
        "mode": "magic",
        "n_max": 5,
        "delta_p_grid": {"start": -12, "stop": -9, "step": 0.1},
        "omega_L_grid": {"start": 2, "stop": 6, "step": 0.5},
    }
    out = tmp_path / "magic.json"
    res = run("magic", "--config", write_cfg(tmp_path, doc), "--out", str(out))
    assert res.returncode == EXIT_OK, res.stderr
    got = json.loads(out.read_text())
    ref = find_magic(
        SystemParams(n_max=5),
        [2 + 0.5 * i for i in range(9)],
        [round(-12 + 0.1 * i, 12) for i in range(31)],
        0.003,
    )
    assert got["omega_L_star"] == ref.omega_L_star
    assert got["delta_p_star"] == ref.delta_p_star
    assert got["g2_min"] == pytest.approx(ref.g2_min, rel=1e-11)
    assert got["delta_L"] == 0.0
    assert got["photon_floor"] == 0.003


def test_byte_identical_outputs(tmp_path):
    doc = {
        "mode": "sweep2d",
        "n_max": 4,
        "delta_p_grid": {"start": -12, "stop": -8, "step": 0.5},
        "omega_L_grid": {"start": 0, "stop": 6, "step": 1.5},
    }
    cfg = write_cfg(tmp_path, doc)
    outs = []
    for name, workers in (("a.csv", "1"), ("b.csv", "1"), ("c.csv", "4")):
        res = run("sweep2d", "--config", cfg, "--out", str(tmp_path / name), "--workers", workers)
        assert res.returncode == EXIT_OK, res.stderr
        outs.append((tmp_path / name).read_bytes())
    assert outs[0] == outs[1] == outs[2]


@pytest.mark.parametrize(
    "content, needle",
    [
        ("", "mode"),
        ('{"gamma_ge": -1.5}', "gamma_ge"),
        ('{"g": 10, "detuning": 3}', "detuning"),
        ('{"mode": "eigen"}', "mode"),
        ("{not json", "line 1"),
    ],
)
def test_config_errors_exit_code(tmp_path, content, needle):
    res = run("steady", "--config", write_cfg(tmp_path, content))
    assert res.returncode == EXIT_CONFIG
    assert needle in res.stderr
    assert res.stdout == ""


def test_bad_flag_override():
    assert run("steady", "--nmax", "0").returncode == EXIT_CONFIG


def test_compute_errors_exit_code(tmp_path):
    cfg = write_cfg(
        tmp_path,
        {
            "photon_floor": 1e6,
            "n_max": 3,
            "delta_p_grid": {"start": -1, "stop": 0, "step": 0.5},
            "omega_L_grid": {"start": 0, "stop": 1, "step": 1},
        },
    )
    res = run("magic", "--config", cfg)
    assert res.returncode == EXIT_COMPUTE
    assert "n_cav" in res.stderr
    res = run("g2tau", "--config", write_cfg(tmp_path, {"eta": 0, "n_max": 3}, "vac.json"))
    assert res.returncode == EXIT_COMPUTE


def test_main_in_process(tmp_path, capsys):
    out = tmp_path / "s.csv"
    assert main(["steady", "--nmax", "4", "--out", str(out)]) == EXIT_OK
    assert len(read_csv(out.read_text())) == 1
    assert "out=" in capsys.readouterr().out
