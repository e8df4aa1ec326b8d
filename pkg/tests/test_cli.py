import json
import subprocess
import sys

import pytest

from bottkit.cli import AnalysisReport, analyze, main
from bottkit.core import BottMatrix
from conftest import FIXTURES

M7 = str(FIXTURES / "m7.mat")
H1 = str(FIXTURES / "h1.mat")
H2 = str(FIXTURES / "h2.mat")
H3 = str(FIXTURES / "h3.mat")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_text(capsys):
    code, out, _ = run(capsys, "analyze", M7)
    assert code == 0
    assert "e_1^+ + e_1^- = e_2^+ + e_3^+ + e_4^+ + 2 e_5^- + e_6^- + e_7^+    I_1 = {1, 5, 6}" in out
    assert "D_7 = D_1 + D_2 + D_3 + D_6 + D_{rho_7^+} = (6, 2, 2, 1, 1, 1, 1)" in out
    assert "classification: not weak Fano" in out


def test_analyze_oracle(capsys):
    code, out, _ = run(capsys, "analyze", M7, "--oracle")
    assert code == 0
    assert "oracle: 448 walls, 84 distinct wall classes" in out
    assert "all fast-path results confirmed" in out


def test_analyze_json_round_trip(capsys):
    code, out, _ = run(capsys, "analyze", M7, "--json", "--oracle")
    assert code == 0
    obj = json.loads(out)
    assert obj["schema"] == "bottkit.analysis/1"
    assert obj["relations"][0]["gamma"][3] == ["5-", "2"]
    assert obj["relations"][0]["pivots"] == [1, 5, 6]
    rep = AnalysisReport.from_json(out)
    assert rep == analyze(rep.matrix, with_oracle=True)
    assert AnalysisReport.from_json(rep.to_json()) == rep


def test_schema_checked():
    with pytest.raises(ValueError):
        AnalysisReport.from_json_obj({"schema": "other"})


@pytest.mark.parametrize("argv, code", [
    (["check", H1], 0),
    (["check", H1, "--require-ample"], 0),
    (["check", H2], 0),
    (["check", H2, "--require-ample"], 1),
    (["check", H3], 1),
    (["check", H3, "--log-fano", "--divisor", "2+:1/2"], 0),
    (["check", H3, "--log-fano", "--divisor", "2+:1/2", "--oracle"], 0),
    (["check", H3, "--log-fano", "--plus-divisor", "0,0"], 1),
    (["check", H2, "--oracle"], 0),
    (["check", H2, "--plus-divisor", "1,-1", "--oracle"], 1),
])
def test_check_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_check_json(capsys):
    code, out, _ = run(capsys, "check", H3, "--log-fano", "--divisor", "2+:1/2", "--json")
    obj = json.loads(out)
    assert obj["k"] == ["-1/2", "-3/2"] and obj["log_fano"] is True and obj["verdict"] is True


def test_input_errors(capsys, tmp_path):
    bad = tmp_path / "bad.mat"
    bad.write_text("2\n-1 3\n")
    code, _, err = run(capsys, "analyze", str(bad))
    assert code == 2 and "row 1: expected 1 entry, got 2" in err and "line 2" in err
    code, _, err = run(capsys, "analyze", str(tmp_path / "missing.mat"))
    assert code == 2 and "cannot read" in err
    assert run(capsys, "check", H1, "--divisor", "1+:0.5")[0] == 2
    assert run(capsys, "check", H1, "--divisor", "1+:1", "--plus-divisor", "1,1")[0] == 2
    assert run(capsys, "census", "6", "--lo", "-2", "--hi", "2")[0] == 2


def test_oracle_cap_exit(capsys, monkeypatch):
    assert run(capsys, "oracle", M7, "--oracle-cap", "6")[0] == 4
    monkeypatch.setenv("BOTTKIT_ORACLE_CAP", "3")
    assert run(capsys, "analyze", M7, "--oracle")[0] == 4
    monkeypatch.setenv("BOTTKIT_ORACLE_CAP", "nope")
    assert run(capsys, "analyze", M7, "--oracle")[0] == 2


def test_oracle_command(capsys):
    code, out, _ = run(capsys, "oracle", H1)
    assert code == 0 and "4 walls, 3 distinct wall classes" in out and "cross-check: ok" in out
    code, out, _ = run(capsys, "oracle", H2, "--json")
    obj = json.loads(out)
    assert obj["nef"] is True and obj["ample"] is False and obj["min_degree"] == "0"


def test_census_command(capsys):
    code, out, _ = run(capsys, "census", "2", "--lo", "-3", "--hi", "3", "--oracle-every", "1")
    assert code == 0
    assert "Fano                 3" in out and "weak Fano, not Fano  2" in out
    code, out, _ = run(capsys, "census", "3", "--lo", "-1", "--hi", "1", "--jobs", "2", "--json")
    obj = json.loads(out)
    assert obj["total"] == "27"
    assert sum(int(v) for v in obj["counts"].values()) == 27


def test_internal_error_exit(capsys, monkeypatch):
    import bottkit.cli as cli
    from bottkit.classify import InconsistencyError

    def boom(*a, **k):
        raise InconsistencyError("routes disagree")
    monkeypatch.setattr(cli, "classify_fano", boom)
    assert run(capsys, "analyze", H1)[0] == 5


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bottkit", "check", H1, "--require-ample"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "ample: True" in proc.stdout
