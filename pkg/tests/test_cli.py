import csv
import io
import re
import subprocess
import sys

import numpy as np
import pytest

from pwlut.cli import main
from pwlut.hwmodel import load_descriptor

from conftest import LOG_EA

LOG_ARGS = ["--fn", "log", "--lo", "0.625", "--hi", "15.625", "--ea", "1.22e-4"]


def run(argv, capsys):
    out = io.StringIO()
    code = main(argv, out)
    return code, out.getvalue(), capsys.readouterr().err


def field(report, key):
    m = re.search(rf"^{re.escape(key)}=(\S+)", report, re.M)
    return m.group(1) if m else None


def test_generate_binary_log(capsys):
    code, out, _ = run(["generate", *LOG_ARGS, "--alg", "binary", "--omega", "0.3"], capsys)
    assert code == 0
    assert abs(int(field(out, "M_F^P")) - 182) <= 4
    assert abs(float(field(out, "reduction").rstrip("%")) - 76) <= 2
    assert "partition=0.625 2.5 4.375 8.125 15.625" in out
    assert "predicate=prose" in out and "cost=intervals" in out
    assert "cycles=9" in out and "eval=102.86ns" in out


def test_generate_reference_mode(capsys):
    code, out, _ = run(["generate", *LOG_ARGS, "--alg", "none"], capsys)
    assert code == 0 and field(out, "M_F^P") is None
    assert field(out, "reduction") == "0.00%" and field(out, "S") == "1"


def test_generate_echoes_compatibility_predicate(capsys):
    code, out, _ = run(["generate", *LOG_ARGS, "--alg", "binary", "--omega", "0.9",
                        "--predicate", "pseudocode", "--cost", "entries"], capsys)
    assert code == 0
    assert "predicate=pseudocode (left+right < omega*parent) cost=entries" in out


def test_generate_tan_band(capsys):
    code, out, _ = run(["generate", "--fn", "tan", "--lo", "-1.5", "--hi", "1.5", "--ea", "9.5367e-7",
                        "--alg", "hierarchical", "--omega", "0.1"], capsys)
    assert code == 0
    assert 75 <= float(field(out, "reduction").rstrip("%")) <= 91


def test_generate_writes_files(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("PWLUT_OUT_DIR", str(tmp_path))
    code, out, _ = run(["generate", *LOG_ARGS, "--alg", "binary", "--descriptor", "t.json",
                        "--mem", "t.mem"], capsys)
    assert code == 0
    assert (tmp_path / "t.json").exists()
    assert len((tmp_path / "t.mem").read_text().splitlines()) == int(field(out, "M_F^P"))


@pytest.fixture()
def log_ref_descriptor(tmp_path, capsys):
    path = tmp_path / "log_ref.json"
    code, _, _ = run(["generate", "--fn", "log", "--lo", "0.625", "--hi", "15.625",
                      "--ea", repr(LOG_EA), "--alg", "none", "--descriptor", str(path)], capsys)
    assert code == 0
    return path


def read_eval(path):
    rows = list(csv.reader(open(path)))
    return rows[0], rows[1:-1], rows[-1]


def test_eval_breakpoints_zero_error(tmp_path, capsys, log_ref_descriptor):
    t = load_descriptor(log_ref_descriptor)
    s = t.segments[0]
    xs = [s.breakpoint(m) for m in range(0, s.count - 1, 37)]
    (tmp_path / "in.txt").write_text("# breakpoints\n" + "\n".join(repr(x) for x in xs) + "\n")
    code, _, _ = run(["eval", "--descriptor", str(log_ref_descriptor), "--inputs",
                      str(tmp_path / "in.txt"), "--out", str(tmp_path / "e.csv")], capsys)
    assert code == 0
    header, rows, summary = read_eval(tmp_path / "e.csv")
    assert header[:4] == ["x", "y_real", "y_fixed", "abs_err"]
    for row in rows:
        x, y = float(row[0]), float(row[1])
        assert y == float(np.log(x)) and row[-1] == "ok"
    assert summary[0] == "max" and summary[-1] == "failures=0"


def test_eval_million_inputs_within_ea(tmp_path, capsys, log_ref_descriptor):
    xs = np.random.default_rng(0).uniform(0.625, 15.625, 10 ** 6)
    np.savetxt(tmp_path / "in.txt", xs, fmt="%.17g")
    code, _, _ = run(["eval", "--descriptor", str(log_ref_descriptor), "--inputs",
                      str(tmp_path / "in.txt"), "--out", str(tmp_path / "e.csv")], capsys)
    assert code == 0
    with open(tmp_path / "e.csv") as fh:
        last = fh.readlines()[-1].strip().split(",")
    assert float(last[3]) <= LOG_EA


def test_eval_marks_bad_rows(tmp_path, capsys, log_ref_descriptor):
    (tmp_path / "in.txt").write_text("1.0\n20\n0.1\n2.0\n")
    code, _, err = run(["eval", "--descriptor", str(log_ref_descriptor), "--inputs",
                        str(tmp_path / "in.txt"), "--out", str(tmp_path / "e.csv")], capsys)
    assert code == 3 and err.startswith("error code=RANGE")
    _, rows, summary = read_eval(tmp_path / "e.csv")
    assert [r[-1] for r in rows] == ["ok", "error:out_of_range", "error:out_of_range", "ok"]
    assert summary[-1] == "failures=2"


def test_eval_malformed_inputs(tmp_path, capsys, log_ref_descriptor):
    (tmp_path / "in.txt").write_text("1.0\n\n2.x\n")
    code, _, err = run(["eval", "--descriptor", str(log_ref_descriptor), "--inputs",
                        str(tmp_path / "in.txt")], capsys)
    assert code == 2
    assert err.startswith("error code=ARGUMENT") and "in.txt:3" in err
    assert err.count("\n") == 1


def test_study_rerun_byte_identical(tmp_path, capsys):
    args = ["study", "--fn", "gauss", "--lo", "-6", "--hi", "0", "--seed", "4", "--population", "4",
            "--omega-start", "0.1", "--omega-stop", "0.3", "--omega-step", "0.1"]
    outs = []
    for k in range(2):
        a, b = tmp_path / f"s{k}.csv", tmp_path / f"t{k}.csv"
        code, report, _ = run(args + ["--csv", str(a), "--ttest-csv", str(b)], capsys)
        assert code == 0 and "variance=pooled" in report and "predicate=prose" in report
        outs.append((a.read_bytes(), b.read_bytes()))
    assert outs[0] == outs[1]


def test_study_degenerate_interval(capsys):
    code, _, err = run(["study", "--fn", "gauss", "--lo", "1", "--hi", "1", "--seed", "0"], capsys)
    assert code == 2 and "error code=ARGUMENT" in err


def test_export(tmp_path, capsys, log_ref_descriptor):
    code, out, _ = run(["export", "--descriptor", str(log_ref_descriptor), "--mem",
                        str(tmp_path / "x.mem")], capsys)
    assert code == 0 and "words=769" in out
    assert len((tmp_path / "x.mem").read_text().splitlines()) == 769


@pytest.mark.parametrize("argv, code, tag", [
    (["generate", "--fn", "nope", "--lo", "0", "--hi", "1", "--ea", "1e-3"], 2, "ARGUMENT"),
    (["generate", "--fn", "log", "--lo", "-1", "--hi", "1", "--ea", "1e-3"], 3, "DOMAIN"),
    (["generate", "--fn", "exp", "--lo", "0", "--hi", "5", "--ea", "1e-3", "--out-fmt", "1:16:12"],
     3, "RANGE"),
    (["generate", "--fn", "log", "--lo", "1", "--hi", "2", "--ea", "1e-3", "--in-fmt", "x"], 2, "ARGUMENT"),
    (["export", "--descriptor", "/nonexistent/d.json", "--mem", "x.mem"], 4, "IO"),
    (["frobnicate"], 2, "ARGUMENT"),
])
def test_exit_codes(argv, code, tag, capsys):
    got, _, err = run(argv, capsys)
    assert got == code
    assert re.fullmatch(rf"error code={tag} msg=\S.*\n", err)


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "pwlut", "generate", *LOG_ARGS, "--alg", "binary"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "M_F^P=" in r.stdout
