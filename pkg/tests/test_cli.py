import json
import subprocess
import sys
from math import pi

import pytest

from flowdirac.cli import main
from flowdirac.models import model_from_json

G2 = '{"kind":"Bieberbach","params":{"i":2,"H":1,"L":1,"S":1,"T":0},"spin":[0,0,0]}'
G3 = '{"kind":"Bieberbach","params":{"i":3,"H":1,"L":1},"spin":[1,0,0]}'
CUBE = '{"kind":"Torus","params":{"basis":[[1,0,0],[0,1,0],[0,0,1]]},"spin":[0,0,0]}'


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_catalog(capsys):
    code, doc = run_json(capsys, "catalog")
    assert code == 0 and len(doc) >= 9
    assert all("capability" in e for e in doc)
    code, out, _ = run(capsys, "catalog")
    assert "lambda1-only" in out and "none" in out


def test_spectrum_g2(capsys):
    code, doc = run_json(capsys, "spectrum", "--model", G2, "--cutoff", "50", "--count", "3")
    assert code == 0
    head = doc["values"][0]
    assert head["exact"] == "1" and head["unit"] == "pi^2"
    assert abs(head["value"] - pi ** 2) < 1e-12
    assert "certificate" in doc


def test_spectrum_g3_and_torus(capsys):
    _, doc = run_json(capsys, "spectrum", "--model", G3, "--count", "1")
    assert doc["values"][0]["exact"] == "4"  # min(16/3, 4) pi^2 with H = L = 1
    _, doc = run_json(capsys, "spectrum", "--model", CUBE, "--count", "1")
    assert doc["values"][0]["value"] == 0


def test_spectrum_model_config_round_trips(capsys):
    _, doc = run_json(capsys, "spectrum", "--model", G2, "--cutoff", "20")
    assert model_from_json(doc["model_config"]) == model_from_json(G2)


def test_model_file(tmp_path, capsys):
    p = tmp_path / "m.json"
    p.write_text(G3)
    code, doc = run_json(capsys, "spectrum", "--model-file", str(p), "--cutoff", "60")
    assert code == 0 and doc["model"] == "G3"
    assert run(capsys, "spectrum", "--model-file", str(tmp_path / "missing.json"))[0] == 1


def test_bound_reports(capsys):
    _, doc = run_json(capsys, "bound", "--model", "heisenberg")
    assert doc["flags"]["dim3"] and doc["flags"]["hijazi"] and not doc["flags"]["friedrich"]
    assert doc["lower"]["friedrich"]["exact"] == "-3/4"
    _, doc = run_json(capsys, "bound", "--model", "s1xs2")
    assert doc["lambda1"]["exact"] == doc["upper"]["dim3"]["exact"] == doc["lower"]["hijazi"]["exact"] == "1"
    _, doc = run_json(capsys, "bound", "--model", "torus-trivial")
    assert doc["gaps"]["dim3"]["exact"] == "1"
    assert not any(doc["flags"][k] for k in ("dim3", "friedrich", "hijazi"))
    assert set(doc) >= {"model", "lambda1", "upper", "lower", "scal", "flags", "tolerance"}


def test_bound_with_flow_override(capsys):
    model = '{"kind":"Torus","params":{"basis":[[1,0,0],[0,1,0],[0,0,1]],"length_unit":"pi"},"spin":[1,0,0]}'
    _, doc = run_json(capsys, "bound", "--model", model, "--alpha", "1")
    assert doc["lambda1"]["exact"] == "1" and doc["flags"]["dim3"]


def test_exit_codes(capsys):
    assert run(capsys, "bound", "--model", "deformed-sphere")[0] == 2
    assert run(capsys, "spectrum", "--model", "heisenberg", "--cutoff", "3")[0] == 2
    assert run(capsys, "spectrum", "--model", '{"kind":"Torus","params":{},"oops":1}')[0] == 1
    assert run(capsys, "spectrum", "--model", G2, "--cutoff", "-1")[0] == 1
    assert run(capsys, "spectrum", "--model", "no-such-entry")[0] == 1
    assert run(capsys, "verify", "--eq", "dirac2", "--n", "6")[0] == 1
    assert run(capsys, "deform", "--m", "1", "--t-range", "3:1:4")[0] == 1
    assert run(capsys, "nonsense")[0] == 1


def test_verify(capsys):
    code, doc = run_json(capsys, "verify", "--eq", "dirac", "--n", "4", "--trials", "100", "--seed", "7")
    assert code == 0 and doc["passed"] and doc["formal"]
    code, doc = run_json(capsys, "verify", "--eq", "dirac2", "--n", "2", "--trials", "100")
    assert code == 0 and doc["eigen_relation"]["matches_closed_form"]
    code, doc = run_json(capsys, "verify", "--eq", "dirac2", "--n", "2", "--trials", "5", "--corrupt-rules")
    assert code == 3 and not doc["passed"]


def test_deform(capsys):
    _, doc = run_json(capsys, "deform", "--m", "2", "--alpha", "2")
    assert doc["harmonic_t"] == 2
    _, doc = run_json(capsys, "deform", "--m", "1", "--alpha", "-1", "--branch", "sigmam")
    assert doc["harmonic_t"] is None
    _, doc = run_json(capsys, "deform", "--m", "3", "--alpha", "0")
    assert doc["harmonic_t"] is None and doc["minimum_on_grid"] == "9/4"


@pytest.mark.parametrize("argv", [
    ["catalog"],
    ["spectrum", "--model", G2, "--cutoff", "60"],
    ["bound", "--model", "sphere-quotient"],
    ["verify", "--eq", "dirac", "--n", "2", "--trials", "20", "--seed", "123"],
    ["deform", "--m", "2", "--alpha", "1/2", "--t-range", "1/4:2:5"],
])
def test_json_is_byte_identical(capsys, argv):
    a = run(capsys, *argv, "--format", "json")[1]
    b = run(capsys, *argv, "--format", "json")[1]
    assert a == b
    json.loads(a)


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "flowdirac.cli", "catalog", "--format", "json"],
                         capture_output=True, text=True, check=True)
    assert len(json.loads(out.stdout)) >= 9
