import json
import os
import subprocess
import sys

import pytest

from cornerlab import cli, hull
from cornerlab.model import instance_from_json

INST = {"n": 1, "b": ["2/5"], "P": [["1/5"], ["2/5"]]}
PURE = {"context": {"tags": [{"symbol": "sqrt2", "kind": "sqrt", "of": 2}]}, "b": ["1/2"],
        "P": [["1/2"], [{"rat": "0", "tags": {"sqrt2": "1"}}], [{"rat": "1", "tags": {"sqrt2": "-1"}}]]}
GMIC = {"breakpoints": ["0", "2/5"], "values": ["0", "1"]}
SHIFTED = dict(GMIC, shift={"sqrt2": "1/3"})
LIFT = {"b": ["2/5"], "P": [["1/5"], ["2/5"]], "R": [["1"], ["-1"]], "h": ["5/2", "5/3"], "d": ["1/2", "1"]}


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, obj in [("inst", INST), ("pure", PURE), ("gmic", GMIC), ("shifted", SHIFTED), ("lift", LIFT),
                      ("bad", {"n": 1, "b": ["1"], "P": [["1/5"]]})]:
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(obj))
        out[name] = str(p)
    return out


def call(capsys, *argv):
    code = cli.run([*argv, "--no-timing"])
    report = json.loads(capsys.readouterr().out)
    assert report["exit_code"] == code and "timing_seconds" not in report
    return code, report


def test_corner_compute_round_trip(capsys, files):
    code, rep = call(capsys, "corner", "compute", "--instance", files["inst"], "--facets")
    assert code == 0 and rep["status"] == "ok"
    res = rep["result"]
    assert res["E"] == [[0, 1], [2, 0]] and res["rays"] == [[0, 5], [1, 2], [3, 1], [5, 0]]
    assert {"coeffs": ["1/2", "1"], "rhs": "1"} in res["facets"]
    # the echoed instance parses back to the same corner polyhedron
    cp = hull.build(instance_from_json(res["instance"]))
    assert [list(e) for e in cp.E] == res["E"]


def test_corner_compute_irrational(capsys, files):
    code, rep = call(capsys, "corner", "compute", "--instance", files["pure"])
    assert code == 0 and rep["result"]["E"] == [[1, 0, 0]]
    assert rep["result"]["aff"] == {"Theta": [["0", "1", "-1"]], "d": ["0"]}


def test_deterministic_output(capsys, files):
    outs = []
    for _ in range(2):
        cli.run(["corner", "compute", "--instance", files["inst"], "--no-timing"])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]


def test_input_errors(capsys, files):
    assert call(capsys, "corner", "compute", "--instance", files["bad"])[0] == 2
    assert call(capsys, "corner", "compute", "--instance", "/nonexistent.json")[0] == 2
    assert cli.run(["corner", "frobnicate"]) == 2


def test_cap_exceeded(capsys, files):
    code, rep = call(capsys, "corner", "compute", "--instance", files["inst"], "--node-cap", "1")
    assert code == 3 and rep["status"] == "cap-exceeded"


def test_fn_commands(capsys, files):
    code, rep = call(capsys, "fn", "check", "--function", files["gmic"], "--b", "2/5")
    assert code == 0
    code, rep = call(capsys, "fn", "lift-slope", "--function", files["gmic"])
    assert code == 0 and rep["result"]["psi"] == {"s_plus": "5/2", "s_minus": "5/3"}
    code, rep = call(capsys, "fn", "extract-theta", "--function", files["shifted"], "--K", "100")
    assert code == 0


def test_fn_check_negative(capsys, tmp_path):
    p = tmp_path / "f.json"
    p.write_text(json.dumps({"breakpoints": ["0", "1/2"], "values": ["0", "1/2"]}))
    assert call(capsys, "fn", "check", "--function", str(p), "--b", "1/2")[0] == 1


def test_lift_commands(capsys, files):
    code, rep = call(capsys, "lift", "eval", "--data", files["lift"], "--point", "[1/5]")
    assert code == 0
    assert call(capsys, "lift", "validate", "--data", files["lift"], "--alpha", "1")[0] == 0
    assert call(capsys, "lift", "validate", "--data", files["lift"], "--alpha", "2")[0] == 1
    code, rep = call(capsys, "lift", "facet-dominate", "--instance", files["inst"], "--facet", "1/2,1")
    assert code == 0 and rep["result"]["M"] == "4"
    assert call(capsys, "lift", "facet-dominate", "--instance", files["inst"], "--facet", "1,0>=0")[0] == 2
    code, rep = call(capsys, "lift", "separate", "--instance", files["inst"], "--point", "[0,0]")
    assert code == 0


def test_examples_commands(capsys):
    code, rep = call(capsys, "examples", "not-closed", "--eps", "1/10")
    assert code == 0 and rep["result"]["k"] == 5
    code, rep = call(capsys, "examples", "pure-integer")
    assert code == 0 and rep["result"]["E"] == [[1, 0, 0]]


def test_text_format(capsys, files):
    assert cli.run(["corner", "compute", "--instance", files["inst"], "--text"]) == 0
    assert "status: \"ok\"" in capsys.readouterr().out


def test_selftest_subset(capsys):
    code = cli.run(["selftest", "--only", "1", "--no-timing"])
    cap = capsys.readouterr()
    assert code == 0 and "[PASS]" in cap.err
    assert [c["number"] for c in json.loads(cap.out)["result"]["criteria"]] == [1]


def test_module_entry_point_and_env_cap(files):
    env = dict(os.environ, CORNERLAB_CAP="2")
    p = subprocess.run([sys.executable, "-m", "cornerlab", "corner", "compute", "--instance", files["inst"],
                        "--no-timing"], capture_output=True, text=True, env=env)
    assert p.returncode == 3
