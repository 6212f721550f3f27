import subprocess
import sys

import pytest

from clarkesat.cli import main
from clarkesat.partition import build_partition, save


@pytest.fixture(scope="module")
def partition_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "p30.splitpart"
    save(build_partition(30), path)
    return str(path)


def run_cli(*argv):
    return main(list(argv))


def test_build_writes_deterministic_file(tmp_path):
    out1 = tmp_path / "a.splitpart"
    out2 = tmp_path / "b.splitpart"
    assert run_cli("build", "--stages", "6", "--out", str(out1)) == 0
    assert run_cli("build", "--stages", "6", "--out", str(out2)) == 0
    assert out1.read_bytes() == out2.read_bytes()
    assert out1.read_text().startswith("SPLITPART v1\n")


def test_build_round_trips_through_eval(tmp_path, capsys):
    out = tmp_path / "p.splitpart"
    assert run_cli("build", "--stages", "8", "--out", str(out)) == 0
    capsys.readouterr()
    code = run_cli(
        "eval", "--partition", str(out), "--mu", "0:1/1", "--x", "1/2", "--tol", "1/1024"
    )
    assert code == 0
    assert capsys.readouterr().out == "0/1 0/1\n"


def test_eval_at_base_point_prints_zero(partition_file, capsys):
    assert run_cli("eval", "--partition", partition_file, "--mu", "0:1/1", "--x", "1/2") == 0
    assert capsys.readouterr().out == "0/1 0/1\n"


def test_eval_decimal_flag(partition_file, capsys):
    code = run_cli(
        "eval", "--partition", partition_file, "--mu", "0:1/1",
        "--x", "3/4", "--decimal",
    )
    assert code == 0
    out = capsys.readouterr().out
    lines = out.strip().split("\n")
    assert len(lines) == 2
    assert lines[1].startswith("approx ")


def test_eval_antisymmetric_pair(partition_file, capsys):
    from fractions import Fraction

    run_cli("eval", "--partition", partition_file, "--mu", "0:1/1", "--x", "5/8")
    fwd = [Fraction(part) for part in capsys.readouterr().out.split()]
    run_cli(
        "eval", "--partition", partition_file, "--mu", "0:1/1",
        "--x", "1/2", "--x0", "5/8",
    )
    rev = [Fraction(part) for part in capsys.readouterr().out.split()]
    assert rev == [-fwd[1], -fwd[0]]


def test_eval_bad_mu_is_usage_error(partition_file, capsys):
    assert run_cli("eval", "--partition", partition_file, "--mu", "0=1", "--x", "1/2") == 2


def test_eval_tolerance_exhausted_exit_code(tmp_path, capsys):
    out = tmp_path / "small.splitpart"
    run_cli("build", "--stages", "3", "--out", str(out))
    capsys.readouterr()
    code = run_cli(
        "eval", "--partition", str(out), "--mu", "ones", "--x", "1/3",
        "--tol", "1/1000000000",
    )
    assert code == 4


def test_missing_partition_is_io_error(capsys):
    code = run_cli("eval", "--partition", "/nonexistent.splitpart", "--mu", "0:1/1", "--x", "1/2")
    assert code == 5


def test_certify_prints_hull(partition_file, capsys):
    code = run_cli(
        "certify", "--partition", partition_file, "--mu", "0:1/1",
        "--point", "1/2", "--radius", "1/4",
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "conclusion: gradient hull contains [-1/1,1/1]" in out


def test_certify_not_yet_covered_exit_code(partition_file, capsys):
    code = run_cli(
        "certify", "--partition", partition_file, "--mu", "0:1/1",
        "--point", "1/2", "--radius", "1/100000",
    )
    assert code == 3
    assert "stages" in capsys.readouterr().err


def test_certify_shifted_hull(partition_file, capsys):
    code = run_cli(
        "certify", "--partition", partition_file, "--mu", "0:3/1",
        "--point", "1/2", "--radius", "1/4",
        "--shift", "2/1", "--shift-radius", "3/1",
    )
    assert code == 0
    assert "[-1/1,5/1]" in capsys.readouterr().out


def test_measure_positive_lower_bound(partition_file, capsys):
    code = run_cli(
        "measure", "--partition", partition_file, "--k", "1",
        "--window", "0/1,1/1", "--tol", "1/4",
    )
    assert code == 0
    lo, hi = capsys.readouterr().out.split()
    num, den = lo.split("/")
    assert int(num) > 0
    assert int(den) > 0


def test_stress_writes_csv(partition_file, tmp_path, capsys):
    out = tmp_path / "traj.csv"
    code = run_cli(
        "stress", "--partition", partition_file, "--mu", "0:1/1",
        "--steps", "5", "--out", str(out),
    )
    assert code == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "t,x1,f_lo,f_hi,gap"
    assert len(lines) == 7


def test_plot_grid(partition_file, tmp_path, capsys):
    out = tmp_path / "plot.csv"
    code = run_cli(
        "plot", "--partition", partition_file, "--k", "0",
        "--grid", "7", "--out", str(out), "--tol", "1/4096",
    )
    assert code == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "x,f_lo,f_hi"
    assert len(lines) == 8


def test_plot_zero_grid_is_usage_error(partition_file, capsys):
    code = run_cli(
        "plot", "--partition", partition_file, "--k", "0",
        "--grid", "0", "--out", "/tmp/unused.csv",
    )
    assert code == 2


def test_console_entry_point(partition_file):
    result = subprocess.run(
        [sys.executable, "-m", "clarkesat.cli", "eval",
         "--partition", partition_file, "--mu", "0:1/1", "--x", "1/2"],
        capture_output=True, text=True,
    )
    assert result.returncode == 0
    assert result.stdout == "0/1 0/1\n"


def test_usage_error_without_command():
    assert run_cli() == 2
