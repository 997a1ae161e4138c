import json
import subprocess
import sys
from pathlib import Path

import pytest

from tbplan.cli import (EXIT_INVALID, EXIT_OK, EXIT_PARSE, EXIT_SOUNDNESS, EXIT_UNSAT_BOUNDED,
                        EXIT_UNSAT_PROVED, main)

from .conftest import EAGER_SRC, STRICT_SRC, WEAK_START_SRC

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def report(out):
    data = json.loads(out)
    assert data["schema"] == 1
    return data


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, src in [("eager", EAGER_SRC), ("strict", STRICT_SRC), ("weak", WEAK_START_SRC),
                      ("broken", "var x { values ; }"),
                      ("invalid", EAGER_SRC.replace("& end(a0) <= end(a1)", ""))]:
        p = tmp_path / f"{name}.tbp"
        p.write_text(src)
        out[name] = p
    return out


def test_check(capsys, files):
    code, out = run(capsys, "check", files["eager"])
    assert code == EXIT_OK and report(out)["status"] == "eager"
    code, out = run(capsys, "check", files["weak"])
    rep = report(out)
    assert code == EXIT_INVALID and rep["status"] == "non-eager"
    assert {v["condition"] for v in rep["violations"]} == {3}
    code, out = run(capsys, "check", files["broken"])
    assert code == EXIT_PARSE and report(out)["diagnostics"]
    code, out = run(capsys, "check", files["invalid"])
    assert code == EXIT_INVALID and report(out)["status"] == "invalid"
    code, _ = run(capsys, "check", files["eager"].parent / "missing.tbp")
    assert code == EXIT_PARSE


def test_solve_eager(capsys, files, tmp_path):
    plan_path = tmp_path / "plan.json"
    code, out = run(capsys, "solve", files["eager"], "--emit-plan", plan_path, "--oracle-horizon", 3)
    rep = report(out)
    assert code == EXIT_OK and rep["status"] == "sat" and rep["horizon"] == 1
    assert rep["oracle"]["agrees"]
    assert json.loads(plan_path.read_text()) == {
        "horizon": 1, "timelines": {"x0": [{"value": "v0", "duration": 1}],
                                    "x1": [{"value": "v1", "duration": 1}]}}
    code, out = run(capsys, "verify", files["eager"], "--plan", plan_path)
    assert code == EXIT_OK and report(out)["status"] == "valid"


def test_solve_strict(capsys, files):
    code, out = run(capsys, "solve", files["strict"], "--oracle-horizon", 4)
    assert code == EXIT_UNSAT_PROVED and report(out)["oracle"]["agrees"]
    code, out = run(capsys, "solve", files["strict"], "--empty-viewpoint", "literal")
    assert code == EXIT_SOUNDNESS and report(out)["status"] == "soundness-error"


def test_solve_non_eager_and_parse(capsys, files):
    assert run(capsys, "solve", files["weak"])[0] == EXIT_INVALID
    assert run(capsys, "solve", files["broken"])[0] == EXIT_PARSE


def test_solve_bounded(capsys, tmp_path):
    p = tmp_path / "step.tbp"
    p.write_text("var x { values a, b; trans a -> {b}; trans b -> {b}; }\n"
                 "rule r: true => exists p[x=a] q[x=b]. end(p) = start(q);\n")
    code, out = run(capsys, "solve", p, "--max-len", 1)
    assert code == EXIT_UNSAT_BOUNDED and report(out)["status"] == "unsat-bounded"


def test_solve_dot(capsys, files, tmp_path):
    dot = tmp_path / "g.dot"
    code, _ = run(capsys, "solve", files["eager"], "--dot", dot, "--dot-target", "blueprints")
    assert code == EXIT_OK and dot.read_text().startswith("digraph")


def test_verify(capsys, files, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"horizon": 3, "timelines": {
        "x0": [{"value": "v0", "duration": 3}],
        "x1": [{"value": "v1", "duration": 1}, {"value": "v1", "duration": 2}]}}))
    code, out = run(capsys, "verify", files["eager"], "--plan", bad)
    rep = report(out)
    assert code == EXIT_UNSAT_PROVED and rep["failures"] == [{"rule": "r1", "trigger": 0}]
    bad.write_text(json.dumps({"horizon": 2, "timelines": {"x0": [{"value": "v0"}]}}))
    assert run(capsys, "verify", files["eager"], "--plan", bad)[0] == EXIT_PARSE
    bad.write_text("{not json")
    assert run(capsys, "verify", files["eager"], "--plan", bad)[0] == EXIT_PARSE
    bad.write_text(json.dumps({"horizon": 1, "timelines": {"x0": [{"value": "v0", "duration": 1}]}}))
    assert run(capsys, "verify", files["eager"], "--plan", bad)[0] == EXIT_PARSE


def test_allen(capsys):
    code, out = run(capsys, "allen")
    lines = out.strip().splitlines()
    assert code == EXIT_OK and len(lines) == 26
    assert "meets / no-trigger -> eager" in lines
    code, out = run(capsys, "allen", "--json")
    assert len(report(out)["table"]) == 26


@pytest.mark.parametrize("name,cmd,code", [
    ("eager.tbp", "solve", EXIT_OK),
    ("strict.tbp", "solve", EXIT_UNSAT_PROVED),
    ("non_eager.tbp", "check", EXIT_INVALID),
    ("allen.tbp", "solve", EXIT_OK),
])
def test_shipped_problems(capsys, name, cmd, code):
    assert run(capsys, cmd, PROBLEMS / name)[0] == code


def test_deterministic(capsys, files):
    a = run(capsys, "solve", files["eager"])
    b = run(capsys, "solve", files["eager"])
    assert a == b


def test_module_entry_point(files):
    res = subprocess.run([sys.executable, "-m", "tbplan", "check", str(files["eager"])],
                         capture_output=True, text=True)
    assert res.returncode == EXIT_OK and json.loads(res.stdout)["status"] == "eager"
