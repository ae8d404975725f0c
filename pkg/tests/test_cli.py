import subprocess
import sys

import pytest

from nfrht.cli import main

CONFIG = """
[quadrature]
near_field = true
[sweep]
kind = spectrum_vs_omega
min = 1.70e14
max = 1.80e14
count = 5
"""


def test_spectrum_to_files(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(CONFIG)
    assert main(["spectrum", "--config", str(cfg), "--out", str(tmp_path / "a.csv"),
                 "--plot", str(tmp_path / "a.svg")]) == 0
    assert (tmp_path / "a.svg").read_text().startswith("<svg")


def test_stdout_when_no_out(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(CONFIG)
    assert main(["spectrum", "--config", str(cfg)]) == 0
    assert "x,value,error_estimate,flag" in capsys.readouterr().out


def test_config_error_exit_code(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("[particle]\nradius_m = -1\n")
    assert main(["spectrum", "--config", str(cfg)]) == 2
    assert "radius_a > 0" in capsys.readouterr().err
    assert main(["spectrum", "--config", str(tmp_path / "absent.cfg")]) == 2


def test_numeric_failure_exit_code(tmp_path):
    cfg = tmp_path / "starved.cfg"
    cfg.write_text("[quadrature]\nnear_field = true\nrel_tol = 1e-9\nmax_subdivisions = 1\n"
                   "[sweep]\nkind = power_vs_omega0\nmin = 1e12\nmax = 1e13\ncount = 2\n")
    assert main(["power-omega0", "--config", str(cfg), "--out", str(tmp_path / "f.csv")]) == 3
    assert "QUAD_FAIL" in (tmp_path / "f.csv").read_text()


def test_repeated_runs_are_byte_identical(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(CONFIG)
    outs = []
    for name in ("a.csv", "b.csv"):
        out = tmp_path / name
        subprocess.run([sys.executable, "-m", "nfrht.cli", "spectrum", "--config", str(cfg), "--out", str(out)],
                       check=True)
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_fast_validate(capsys):
    assert main(["validate", "--fast"]) == 0
    assert "oracle checks passed" in capsys.readouterr().out


def test_usage_error():
    with pytest.raises(SystemExit):
        main(["nonsense"])
