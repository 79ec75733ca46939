import json
import math
import subprocess
import sys

import pytest

from quadgraph.cli import cmd_run


def run(capsys, *argv):
    code = cmd_run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_connected_single(capsys):
    code, out, _ = run(capsys, "connected", "--p", "31", "--a", "12")
    assert code == 0 and json.loads(out) == {"connected": True}


def test_connected_count(capsys):
    code, out, _ = run(capsys, "connected", "--p", "5", "--list", "--threads", "1")
    r = json.loads(out)
    assert code == 0
    assert r["results"]["connected"] == {"I_p": 2, "connected_a": [1, 2]}


def test_sweep_cycles(capsys):
    code, out, _ = run(capsys, "sweep", "--p", "5", "--stats", "cycles", "--max-k", "4")
    r = json.loads(out)
    assert code == 0
    assert r["results"]["cycles"]["C_k"] == [5, 2, 1, 0]
    assert set(r) == {"meta", "results", "predicted", "timing"}
    assert r["meta"]["p"] == 5 and r["meta"]["version"]


def test_sweep_csv(capsys):
    code, out, _ = run(capsys, "sweep", "--p", "5", "--stats", "cycles", "--max-k", "4", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    i = lines.index("k,count")
    assert lines[i + 1 : i + 5] == ["1,5", "2,2", "3,1", "4,0"]


def test_predict(capsys):
    code, out, _ = run(capsys, "predict", "--p", "500009")
    r = json.loads(out)
    assert code == 0
    assert r["sqrt2p"] == pytest.approx(1000.009, abs=1e-3)
    assert r["sqrtPiP2"] == pytest.approx(886.235, abs=1e-3)
    # raw value 564.19466 is within 0.001 of the tabulated 564.194; rendered with rounding
    assert r["sqrt2POverPi"] == round(math.sqrt(2 * 500009 / math.pi), 3) == 564.195


def test_verify_pass(capsys):
    code, out, _ = run(capsys, "verify", "--p", "101", "--iso")
    assert code == 0
    assert "FAIL" not in out and "PASS p=101 iso classes = p" in out


def test_verify_range_iso(capsys):
    code, out, _ = run(capsys, "verify", "--p-range", "3:60", "--iso")
    assert code == 0
    assert "PASS p=17 iso classes != 17 (known exception)" in out


def test_verify_failure_exit_code(capsys, monkeypatch):
    import quadgraph.cli as cli
    from quadgraph.checks import CheckResult

    monkeypatch.setattr(cli, "oracle_checks", lambda ctx, L: [CheckResult("forced", False)])
    code, out, _ = run(capsys, "verify", "--p", "11")
    assert code == 2 and "FAIL forced" in out


@pytest.mark.parametrize("argv", [
    ["verify", "--p", "9"],
    ["verify"],
    ["verify", "--p", "5", "--p-range", "3:7"],
    ["sweep", "--p", "2"],
    ["sweep", "--p", "5", "--stats", "bogus"],
    ["sweep", "--p", "5", "--max-k", "5"],
    ["sweep", "--p", "5", "--resume"],
    ["connected", "--p", "5", "--pretest-depth", "0"],
    ["nosuchcommand"],
    [],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1 and err


def test_threads_env(capsys, monkeypatch):
    monkeypatch.setenv("QUADGRAPH_THREADS", "0")
    code, _, _ = run(capsys, "predict", "--p", "5")
    assert code == 1
    monkeypatch.setenv("QUADGRAPH_THREADS", "3")
    code, _, _ = run(capsys, "predict", "--p", "5")
    assert code == 0


def test_json_round_trip_and_thread_independence(capsys):
    outs = []
    for t in ("1", "4"):
        code, out, _ = run(capsys, "sweep", "--p", "211", "--threads", t, "--no-timing")
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]
    obj = json.loads(outs[0])
    assert json.dumps(obj, indent=2, sort_keys=True) + "\n" == outs[0]


def test_out_file(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "decompose", "--p", "31", "--a", "12", "--out", str(path))
    assert code == 0 and out == ""
    r = json.loads(path.read_text())["results"]
    assert r["connected"] and r["trees"] == 7 and r["cyclic_points"] == 8


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "quadgraph", "verify", "--p", "9"],
                         capture_output=True, text=True)
    assert res.returncode == 1
