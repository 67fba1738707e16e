import subprocess
import sys

import numpy as np
import pytest

from elrkfv.cli import EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, main


def test_single_run_writes_csv(tmp_path, capsys):
    out, diag = tmp_path / "u.csv", tmp_path / "d.csv"
    code = main(["--problem", "burgers_sin_1d", "--nx", "32", "--cfl", "2", "--tfinal", "0.3",
                 "--out", str(out), "--diagnostics", str(diag)])
    assert code == EXIT_OK
    data = np.loadtxt(out, delimiter=",", skiprows=1)
    assert data.shape == (32, 2)
    assert "burgers_sin_1d" in capsys.readouterr().out
    assert diag.exists()


def test_convergence_table(tmp_path, capsys):
    out = tmp_path / "t.csv"
    code = main(["--problem", "varcoeff_1d", "--convergence", "20,40", "--cfl", "3.2",
                 "--tfinal", "0.5", "--recon", "wenoao3", "--out", str(out)])
    assert code == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 3 and lines[1].split()[0] == "20"
    assert out.read_text().startswith("N,l1,order")


def test_convergence_with_exclusion(capsys):
    code = main(["--problem", "riemann_shock_1d", "--convergence", "40,80", "--rk", "1",
                 "--recon", "const", "--cfl", "0.5", "--exclude", "1.8,2.6"])
    assert code == EXIT_OK


def test_2d_run(tmp_path):
    out = tmp_path / "u2.csv"
    code = main(["--problem", "riemann_2d", "--nx", "8", "--quadrants", "1,2,4,3", "--tfinal", "0.02",
                 "--out", str(out)])
    assert code == EXIT_OK
    assert np.loadtxt(out, delimiter=",", skiprows=1).shape == (64, 3)


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["--problem", "nope"],
        ["--problem", "burgers_sin_1d", "--rk", "4"],
        ["--problem", "burgers_sin_1d", "--nx", "0"],
        ["--problem", "burgers_sin_1d", "--cfl", "-1"],
        ["--problem", "burgers_sin_1d", "--tfinal", "-1"],
        ["--problem", "burgers_sin_1d", "--exclude", "3,1"],
        ["--problem", "burgers_sin_1d", "--quadrants", "1,2,3,4"],
        ["--problem", "riemann_2d", "--quadrants", "1,2,3"],
        ["--problem", "riemann_2d", "--convergence", "10,20"],
        ["--problem", "burgers_sin_1d", "--convergence", "20,10"],
        ["--problem", "burgers_sin_1d", "--convergence", "a,b"],
    ],
)
def test_usage_errors(argv, capsys):
    assert main(argv) == EXIT_USAGE


def test_strict_dt_numeric_failure(capsys):
    code = main(["--problem", "riemann_shock_1d", "--nx", "40", "--cfl", "6", "--strict-dt"])
    assert code == EXIT_NUMERIC
    assert "numeric failure" in capsys.readouterr().err


def test_help():
    assert main(["--help"]) == EXIT_OK


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "elrkfv", "--problem", "burgers_sin_1d", "--nx", "32",
                          "--tfinal", "0.1"], capture_output=True, text=True)
    assert res.returncode == 0, res.stderr
