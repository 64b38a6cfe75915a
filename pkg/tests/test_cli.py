import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from dqthermo.cli import main

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def _numbers_close(a, b, tol):
    if isinstance(a, dict):
        return a.keys() == b.keys() and all(_numbers_close(a[k], b[k], tol) for k in a)
    if isinstance(a, list):
        return len(a) == len(b) and all(_numbers_close(x, y, tol) for x, y in zip(a, b))
    if isinstance(a, float) or isinstance(b, float):
        return abs(a - b) <= tol
    return a == b


def _csv(text):
    return [{k: float(v) for k, v in row.items()} for row in csv.DictReader(io.StringIO(text))]


GOLDEN_RUNS = [
    (("analyze", "qubit_dtt.json"), "qubit_dtt.analyze.json"),
    (("refine", "qubit_dtt.json", "--tol", "1.4e-4", "--out", "csv"), "qubit_dtt.refine.csv"),
    (("extremal", "extremal_qubit.json", "--haar-samples", "10000", "--seed", "7"), "extremal_qubit.extremal.json"),
    (("carnot", "otto_cycle.json"), "otto_cycle.carnot.json"),
    (("carnot", "otto_cycle.json", "--refine", "64", "--sweep", "--out", "csv"), "otto_cycle.sweep.csv"),
    (("approx", "cooling_path.json", "--beta", "2"), "cooling_path.approx.json"),
]


@pytest.mark.parametrize("argv, expected", GOLDEN_RUNS, ids=[e for _, e in GOLDEN_RUNS])
def test_golden(capsys, argv, expected):
    argv = (argv[0], GOLDEN / argv[1], *argv[2:])
    code, out, _ = run(capsys, *argv)
    assert code == 0
    again = run(capsys, *argv)[1]
    assert out == again  # byte-stable
    want = (GOLDEN / expected).read_text()
    if expected.endswith(".csv"):
        assert out.splitlines()[0] == want.splitlines()[0]
        assert _numbers_close(_csv(out), _csv(want), 1e-9)
    else:
        assert _numbers_close(json.loads(out), json.loads(want), 1e-9)


def test_golden_reproduces_reference_values(capsys):
    res = json.loads(run(capsys, "analyze", GOLDEN / "qubit_dtt.json")[1])["result"]
    assert abs(res["total_heat"] + 0.149738) <= 1e-6
    assert abs(res["lambda_"] + 0.299476) <= 1e-6
    assert abs(res["delta_s"] + 0.216869) <= 1e-6
    assert abs(res["clausius_slack"] - 0.082607) <= 1e-6

    rows = _csv(run(capsys, "refine", GOLDEN / "qubit_dtt.json", "--tol", "1.4e-4", "--out", "csv")[1])
    assert abs(rows[0]["bound"] - 0.149738) <= 1e-6
    assert all(r["gap"] <= r["bound"] + 1e-9 for r in rows)
    assert [r["gap"] for r in rows if r["n"] == 1024][0] <= 1.5e-4

    res = json.loads(run(capsys, "extremal", GOLDEN / "extremal_qubit.json")[1])["result"]
    assert abs(res["q_min"] + 0.462117) <= 1e-6 and abs(res["q_max"]) <= 1e-6

    res = json.loads(run(capsys, "carnot", GOLDEN / "otto_cycle.json")[1])["result"]
    assert abs(res["q_hot"] - 0.299476) <= 1e-6 and abs(res["q_cold"] + 0.149738) <= 1e-6
    assert abs(res["efficiency"] - 0.5) <= 1e-6 and abs(res["carnot_bound"] - 0.75) <= 1e-6


def test_stdin_and_out_file(capsys, monkeypatch, tmp_path):
    monkeypatch.setattr(sys, "stdin", io.StringIO((GOLDEN / "qubit_dtt.json").read_text()))
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "analyze", "--out-file", target)
    assert code == 0 and out == ""
    assert json.loads(target.read_text()) == json.loads((GOLDEN / "qubit_dtt.analyze.json").read_text())


def test_validate(capsys):
    code, out, _ = run(capsys, "validate", GOLDEN / "otto_cycle.json")
    assert code == 0 and json.loads(out)["result"] == {"valid": True, "kind": "CycleSpec"}


def test_input_errors_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"dim": 2, "initial": {"hamiltonian": [[0, 0], [0, 1]], "rho": [[0.6, 0], [0, 0.6]]}, "steps": []}')
    code, _, err = run(capsys, "validate", bad)
    assert code == 2 and "initial.rho" in err and "trace is 1.2" in err
    assert run(capsys, "analyze", tmp_path / "missing.json")[0] == 2
    assert run(capsys, "analyze", GOLDEN / "otto_cycle.json")[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["carnot", "--out", "xml"])
    assert info.value.code == 2


def test_unmet_target_exits_1(capsys):
    code, out, _ = run(capsys, "approx", GOLDEN / "cooling_path.json", "--beta", "1")
    assert code == 1 and json.loads(out)["result"]["converged"] is False
    code, out, _ = run(capsys, "refine", GOLDEN / "qubit_dtt.json", "--tol", "1e-6", "--nmax", "8")
    assert code == 1 and json.loads(out)["result"]["converged"] is False


def test_invariant_violation_exits_1(capsys, tmp_path):
    # rank-deficient endpoint cannot be refined: reported as a failure, not a crash
    spec = {"initial": {"hamiltonian": [[0, 0], [0, 1]], "rho": [[1, 0], [0, 0]]}, "steps": [{"type": "DTT", "beta": 1}]}
    (tmp_path / "s.json").write_text(json.dumps(spec))
    code, _, err = run(capsys, "refine", tmp_path / "s.json")
    assert code == 1 and "full rank" in err


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "dqthermo", "extremal", str(GOLDEN / "extremal_qubit.json")], capture_output=True, text=True)
    assert proc.returncode == 0 and '"q_min": -0.46211715726' in proc.stdout
