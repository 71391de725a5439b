import csv
import io
import math
import shlex
import subprocess
import sys

import numpy as np
import pytest

from charburg.cli import build_parser, main, resolve


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def table(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], np.array(rows[1:], dtype=float)


def test_sample_homogeneous_example(capsys):
    code, out, _ = run(capsys, "sample", "--source", "zero", "--ic", "affine", "--a", "1", "--b", "0",
                       "--t", "1", "--nx", "3", "--xmin", "0", "--xmax", "1")
    assert code == 0
    head, data = table(out)
    assert head == ["x", "t", "q", "y", "residual"]
    np.testing.assert_allclose(data[:, 2], [0.0, 0.25, 0.5], atol=1e-10)
    assert "\r" not in out and not any(line.endswith(",") for line in out.splitlines())


def test_sample_full_precision(capsys):
    _, out, _ = run(capsys, "sample", "--t", "0.1", "--nx", "7")
    _, data = table(out)
    for line, row in zip(out.splitlines()[1:], data):
        assert line.split(",")[2] == f"{row[2]:.17g}"


def test_sample_at_t_zero_is_initial_condition(capsys):
    _, out, _ = run(capsys, "sample", "--t", "0", "--nx", "11")
    _, data = table(out)
    np.testing.assert_array_equal(data[:, 2], np.sin(2 * math.pi * data[:, 0]))


def test_figure2_range(capsys):
    code, out, _ = run(capsys, "figure", "2")
    assert code == 0
    head, data = table(out)
    assert head[-1] == "h0" and data.shape[0] == 400
    # grid extremes lie inside the exact range [-1/0.7, 1/1.3] and close to it
    assert -1 / 0.7 - 1e-12 <= data[:, 2].min() <= -1 / 0.7 + 1e-3
    assert 1 / 1.3 - 1e-3 <= data[:, 2].max() <= 1 / 1.3 + 1e-12


def test_figure1_range(capsys):
    _, out, _ = run(capsys, "figure", "1")
    _, data = table(out)
    assert data[:, 2].max() == pytest.approx(3 * math.exp(-0.4), abs=1e-9)
    assert data[:, 2].min() == pytest.approx(2 * math.exp(-0.4), abs=1e-9)


def test_shock_reported_with_x(capsys):
    code, out, err = run(capsys, "sample", "--t", "0.2")
    assert code == 2
    assert "MultivaluedSolution" in err and "x=" in err
    assert len(err.strip().splitlines()) == 1


def test_verify_default_passes(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[-1] == "all checks passed"
    assert all(line.startswith("PASS") for line in lines[:-1])


def test_verify_out_of_validity(capsys):
    code, out, err = run(capsys, "verify", "--source", "quadratic", "--beta", "2", "--t", "0.6",
                         "--ic", "affine", "--a", "0", "--b", "1")
    assert code == 2
    assert "OutOfValidity" in err


def test_verify_selected_problem_residuals(capsys):
    code, out, _ = run(capsys, "verify", "--preset", "fig3", "--tol", "1e-12")
    assert code == 0
    line = next(l for l in out.splitlines() if "algebraic residual" in l)
    assert float(line.split("worst=")[1].split()[0]) <= 1e-12


def test_verify_failure_exit_code(capsys, monkeypatch):
    from charburg import verification
    monkeypatch.setattr(verification, "default_suite",
                        lambda solver: [verification.CheckResult("forced", False, 1.0, 0.0)])
    code, out, _ = run(capsys, "verify")
    assert code == 1 and out.startswith("FAIL")


def test_converge_quadratic(capsys):
    code, out, _ = run(capsys, "converge", "--preset", "quadratic", "--nlevels", "4")
    assert code == 0
    head, data = table(out)
    assert head == ["cells", "L1", "Linf", "order"]
    assert list(data[:, 0]) == [64, 128, 256, 512]
    assert math.isnan(data[0, 3]) and data[-1, 3] >= 0.8


def test_converge_constant_state(capsys):
    code, out, _ = run(capsys, "converge", "--source", "zero", "--ic", "affine", "--a", "0", "--b", "1",
                       "--nlevels", "3", "--cells", "16")
    assert code == 0
    _, data = table(out)
    assert np.all(data[:, 1:3] == 0)


@pytest.mark.parametrize("argv", [["converge", "--nlevels", "1"], ["sample", "--nx", "1"],
                                  ["sample", "--xmin", "1", "--xmax", "0"], ["sample", "--t", "-1"],
                                  ["sample", "--gnuplot", "x.gp"], ["sample", "--bogus"],
                                  ["sample", "--source", "cubic"], ["figure", "4"], [],
                                  ["sample", "--levels", "1"]])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as info:
        raise SystemExit(main(argv))
    assert info.value.code == 64


@pytest.mark.parametrize("argv", [
    ["sample", "--t", "0.1"],
    ["figure", "3", "--nx", "50"],
    ["converge", "--preset", "quadratic", "--cfl", "0.5", "--splitting", "strang"],
    ["verify", "--source", "exponential", "--beta", "-0.1", "--ic", "smoothstep", "--levels", "0.5,-1",
     "--center", "0.123456789", "--eps", "3e-5", "--domain=-1,2", "--out", "o.csv"],
])
def test_print_spec_round_trip(capsys, argv):
    parser = build_parser()
    spec = resolve(parser.parse_args(argv))
    code, out, _ = run(capsys, *argv, "--print-spec")
    assert code == 0
    again = resolve(parser.parse_args(shlex.split(out)))
    assert again == spec


def test_byte_identical_runs():
    argv = [sys.executable, "-m", "charburg", "sample", "--preset", "fig3", "--nx", "257"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True, env={"CHARBURG_THREADS": "3",
                                                                       "PATH": ""}).stdout
    assert a == b and len(a.splitlines()) == 258


def test_out_and_gnuplot_files(tmp_path, capsys):
    out = tmp_path / "fig1.csv"
    gp = tmp_path / "fig1.gp"
    code, stdout, _ = run(capsys, "figure", "1", "--out", str(out), "--gnuplot", str(gp))
    assert code == 0 and stdout == ""
    assert out.read_text().startswith("x,t,q,y,residual,h0\n")
    script = gp.read_text()
    assert str(out) in script and "using 1:3" in script and "using 1:6" in script


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "charburg", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "sample" in r.stdout
