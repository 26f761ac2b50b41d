"""JSON model documents and the command-line interface."""

import json
import os
import subprocess
import sys

import pytest

from deforma.models import ModelError, emit_model, parse_model, parse_model_dict

FIXTURE_DIR = os.path.join(os.path.dirname(__file__), os.pardir,
                           "src", "deforma", "fixtures")
FIXTURE_FILES = sorted(f for f in os.listdir(FIXTURE_DIR) if f.endswith(".json"))


def load_raw(name):
    with open(os.path.join(FIXTURE_DIR, name + ".json")) as fh:
        return json.load(fh)


# ---------------------------------------------------------------------------
# parsing and canonical serialization

def test_all_shipped_fixtures_parse():
    assert FIXTURE_FILES == [f"F{k}.json" for k in range(1, 8)]
    for fname in FIXTURE_FILES:
        doc = parse_model(os.path.join(FIXTURE_DIR, fname))
        assert doc.raw["schema"] == 1


def test_emit_roundtrip_is_identity():
    for fname in FIXTURE_FILES:
        path = os.path.join(FIXTURE_DIR, fname)
        with open(path, "rb") as fh:
            original = fh.read()
        doc = parse_model(path)
        assert emit_model(doc) == original
        again = parse_model_dict(json.loads(emit_model(doc)))
        assert again.raw == doc.raw


def test_missing_file_and_malformed_json():
    with pytest.raises(ModelError) as exc:
        parse_model("/nonexistent/model.json")
    assert exc.value.pointer == "/"


def test_wrong_schema_version():
    raw = load_raw("F1")
    raw["schema"] = 99
    with pytest.raises(ModelError) as exc:
        parse_model_dict(raw)
    assert exc.value.pointer == "/schema"


def test_unknown_section_rejected():
    raw = load_raw("F1")
    raw["widgets"] = {}
    with pytest.raises(ModelError) as exc:
        parse_model_dict(raw)
    assert exc.value.pointer == "/widgets"


def test_bad_rational_located():
    raw = load_raw("F7")
    raw["elements"]["seed"]["values"]["1"][0] = "one half"
    with pytest.raises(ModelError) as exc:
        parse_model_dict(raw)
    assert "seed" in exc.value.pointer
    assert "rational" in exc.value.message


def test_wrong_table_shape_located():
    raw = load_raw("F7")
    raw["dglas"]["g"]["brackets"]["1,1"] = [[["1/1"], ["2/1"]]]
    with pytest.raises(ModelError):
        parse_model_dict(raw)


def test_dangling_reference_located():
    raw = load_raw("F1")
    raw["complexes"]["g"]["space"] = "missing"
    with pytest.raises(ModelError) as exc:
        parse_model_dict(raw)
    assert "missing" in str(exc.value)


def test_element_degree_dimension_mismatch():
    raw = load_raw("F7")
    raw["elements"]["seed"]["values"]["1"] = ["1/1", "1/1"]
    with pytest.raises(ModelError):
        parse_model_dict(raw)


# ---------------------------------------------------------------------------
# the command line

def run_cli(*args, env_extra=None):
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run([sys.executable, "-m", "deforma.cli", *args],
                          capture_output=True, env=env)


def test_cli_validate_ok():
    proc = run_cli("validate", "--model", "F2")
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["status"] == "ok"
    assert doc["command"] == "validate"


def test_cli_missing_model_is_bad_input():
    proc = run_cli("validate")
    assert proc.returncode == 2
    assert json.loads(proc.stdout)["status"] == "invalid"


def test_cli_nonexistent_fixture_is_bad_input():
    proc = run_cli("validate", "--model", "F99")
    assert proc.returncode == 2


def test_cli_malformed_model_reports_pointer(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"schema": 1, "bogus": {}}))
    proc = run_cli("validate", "--model", str(bad))
    assert proc.returncode == 2
    doc = json.loads(proc.stdout)
    assert doc["status"] == "invalid"
    assert doc["payload"]["location"] == "/bogus"


def test_cli_mc_obstruction_reported():
    proc = run_cli("mc", "--model", "F7", "--extend")
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["payload"]["extension"]["status"] == "obstructed"
    assert doc["payload"]["extension"]["obstruction"]["classes"] == {"e^2": ["1/2"]}


def test_cli_axiom_failure_exit_code(tmp_path):
    raw = load_raw("F1")
    # a nonzero even self-bracket violates graded antisymmetry
    raw["spaces"]["g"] = {"0": ["e"]}
    raw["dglas"]["g"] = {"complex": "g", "brackets": {"0,0": [[["1/1"]]]}}
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(raw))
    proc = run_cli("validate", "--model", str(path))
    assert proc.returncode == 1
    doc = json.loads(proc.stdout)
    assert doc["status"] == "failed"
    assert any(f["kind"] == "antisymmetry"
               for f in doc["payload"]["dgla:g"]["failures"])


def test_cli_inconclusive_exit_code(tmp_path):
    # d(z) = x1 with [z, x1] = x3 and x3 outside the image of d: the staged
    # gauge solver matches weight 1 but fails uncertifiably at weight 2
    raw = {
        "schema": 1,
        "spaces": {"g": {"0": ["z"], "1": ["x1", "x3"]}},
        "complexes": {"g": {"space": "g",
                            "differential": {"0": [["1/1"], ["0/1"]]}}},
        "dglas": {"g": {"complex": "g",
                        "brackets": {"0,1": [[["0/1", "1/1"],
                                              ["0/1", "0/1"]]]}}},
        "artin": {"A2": {"generators": 1, "order": 3}},
        "elements": {"y": {"space": "g", "values": {"1": ["1/1", "0/1"]}}},
        "defaults": {"dgla": "g", "artin": "A2"},
    }
    path = tmp_path / "staged.json"
    path.write_text(json.dumps(raw))
    proc = run_cli("gauge", "--model", str(path), "--equiv", "--y", "y")
    assert proc.returncode == 3
    assert json.loads(proc.stdout)["status"] == "inconclusive"


def test_cli_deterministic_output():
    for args in (("validate", "--model", "F5"),
                 ("cohomology", "--model", "F6"),
                 ("period", "--model", "F6"),
                 ("holim", "--model", "F2", "--cohomology"),
                 ("transport", "--model", "F5")):
        first = run_cli(*args)
        second = run_cli(*args)
        assert first.returncode == second.returncode == 0
        assert first.stdout == second.stdout
        json.loads(first.stdout)  # well-formed


def test_cli_text_format():
    proc = run_cli("cohomology", "--model", "F6", "--format", "text")
    assert proc.returncode == 0
    out = proc.stdout.decode()
    assert out.startswith("command: cohomology\nstatus: ok\n")


def test_cli_fixture_dir_override(tmp_path):
    raw = load_raw("F1")
    with open(tmp_path / "mine.json", "w") as fh:
        json.dump(raw, fh)
    proc = run_cli("validate", "--model", "mine",
                   env_extra={"DEFORMA_FIXTURE_DIR": str(tmp_path)})
    assert proc.returncode == 0
    # and the override hides the shipped fixtures
    proc2 = run_cli("validate", "--model", "F1",
                    env_extra={"DEFORMA_FIXTURE_DIR": str(tmp_path)})
    assert proc2.returncode == 2
