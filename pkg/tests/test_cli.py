import io
import subprocess
import sys

import pytest

from opineq.cli import main, parse_grid, UsageError


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_repro_passes():
    code, text = run("repro")
    assert code == 0
    assert "(v=0.3,x=0.7)" in text and "+0.00213682" in text
    assert "h(c)=-0.0000354367" in text
    assert "sign pattern +-+-" in text
    assert "FAIL" not in text


def test_repro_injected_fault_fails():
    code, text = run("repro", "--inject-fault")
    assert code == 1
    assert "FAIL" in text and "diff from reference" in text
    # the hook is restored afterwards
    assert run("repro")[0] == 0


def test_verify_small_run(tmp_path):
    code, text = run("verify", "--scope", "matrix", "--samples", "20", "--dim", "3",
                     "--out", str(tmp_path))
    assert code == 0
    assert "THM_B_CHAIN" in text and "REVIEW" in text
    assert (tmp_path / "report.txt").read_text() == text
    csv_text = (tmp_path / "report.csv").read_bytes()
    assert csv_text.startswith(b"id,dim,attempted,passed,failed,skipped,worst_margin,status\n")
    assert b"\r" not in csv_text
    assert list(tmp_path.glob("LIAO_n3.txt"))


@pytest.mark.parametrize("argv", [
    ["verify", "--dim", "64"],
    ["verify", "--dim", "1"],
    ["verify", "--samples", "0"],
    ["verify", "--scope", "both"],
    ["verify", "--tol", "-1"],
    ["frobnicate"],
    [],
])
def test_verify_usage_errors(argv):
    assert run(*argv)[0] == 2


def test_sweep_csv(tmp_path):
    path = tmp_path / "u.csv"
    args = ["sweep", "--target", "u_v", "--grid", "v=0.6:1:9", "--grid", "x=1:100:25:log",
            "--out", str(path)]
    assert run(*args)[0] == 0
    data = path.read_bytes()
    lines = data.decode().splitlines()
    assert lines[0] == "target,v,x,value,sign"
    assert len(lines) == 1 + 9 * 25
    assert b"\r\n" not in data
    rows = [ln.split(",") for ln in lines[1:]]
    # the minimum over x is nonnegative exactly from v = 0.7 on
    by_v = {}
    for _, v, _, val, _ in rows:
        by_v.setdefault(float(v), []).append(float(val))
    assert [min(vals) >= 0 for v, vals in sorted(by_v.items())] == [False, False] + [True] * 7
    assert run(*args)[0] == 0 and path.read_bytes() == data


def test_sweep_no_ordering_target_shows_both_signs():
    code, text = run("sweep", "--target", "m_minus_Kr", "--grid", "v=0.05:0.95:10",
                     "--grid", "x=0.01:1:20:log")
    assert code == 0
    signs = {line.rsplit(",", 1)[1] for line in text.splitlines()[1:]}
    assert {"+", "-"} <= signs


def test_sweep_seventeen_digits():
    _, text = run("sweep", "--target", "log_gap", "--grid", "t=0.2032:1:2")
    first = text.splitlines()[1].split(",")
    assert first[1] == "0.20319999999999999"


@pytest.mark.parametrize("grid", [["v=0.6:1:1", "x=1:2:3"], ["v=1:0.6:5", "x=1:2:3"],
                                  ["v=0.6:1:5"], ["q=0:1:3", "v=0:1:3", "x=1:2:2"],
                                  ["v=a:b:3", "x=1:2:3"]])
def test_sweep_usage_errors(grid):
    argv = ["sweep", "--target", "u_v"]
    for g in grid:
        argv += ["--grid", g]
    assert run(*argv)[0] == 2


def test_sweep_unknown_target_and_unwritable(tmp_path):
    assert run("sweep", "--target", "nope", "--grid", "x=1:2:3")[0] == 2
    bad = tmp_path / "missing" / "dir" / "out.csv"
    assert run("sweep", "--target", "log_gap", "--grid", "t=0.3:1:3", "--out", str(bad))[0] == 2


def test_parse_grid():
    assert parse_grid("x=1:100:200:log") == ("x", 1.0, 100.0, 200, "log")
    assert parse_grid("v=0:1:3") == ("v", 0.0, 1.0, 3, "lin")
    with pytest.raises(UsageError):
        parse_grid("x=0:1:3:log")


def test_hh_examples():
    code, text = run("hh", "square", "0", "2", "convex")
    assert code == 0 and text.startswith("1 <= 1.33333 <= 2 OK")
    code, text = run("hh", "lemma21_f(v=0.5)", "1", "4", "concave")
    assert code == 0 and ">=" in text and "OK" in text
    assert run("hh", "square", "0", "2", "concave")[0] == 1


@pytest.mark.parametrize("argv", [["hh", "square", "2", "0"], ["hh", "cube", "0", "1"],
                                  ["hh", "lemma21_f", "1", "2"], ["hh", "lemma21_f(v=2)", "1", "2"]])
def test_hh_usage_errors(argv):
    assert run(*argv)[0] == 2


def test_scan():
    assert run("scan", "lemma22_g(v=0.5)", "5.1", "50") == (0, "convex\n")
    code, text = run("scan", "lemma22_g(v=0.5)", "0.1", "50")
    assert code == 0 and text.startswith("mixed")


def test_module_entry_point_help():
    proc = subprocess.run([sys.executable, "-m", "opineq", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "verify" in proc.stdout
