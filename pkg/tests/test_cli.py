import io as stdio
import json
import subprocess
import sys

import pytest

from nvcoin import cli, io
from nvcoin.errors import MismatchDetected
from nvcoin.fixtures import FIXTURES, fixture


def call(command, **kw):
    out, err = stdio.StringIO(), stdio.StringIO()
    status = cli.run(cli.JobSpec(command, **kw), stdout=out, stderr=err)
    return status, out.getvalue(), err.getvalue()


def test_compute_root_fixture_json():
    status, out, _ = call("compute", fixture="torus-3valued-root", format="json")
    assert status == 0
    doc = json.loads(out)
    assert (doc["L"], doc["R"], doc["N"]) == (0, 2, 2)


def test_compute_infinite_r_serialized():
    status, out, _ = call("compute", fixture="halfturn-identity", format="json")
    doc = json.loads(out)
    assert status == 0 and (doc["L"], doc["R"], doc["N"]) == (0, "inf", 0)


def test_oracle_sqrt2_circle():
    status, out, _ = call("oracle", fixture="circle-sqrt2", format="json")
    assert status == 0
    doc = json.loads(out)
    assert len(doc["coincidences"]) == 1
    assert all(doc["comparison"]["checks"].values())


def test_validate_point_reflection_prints_torsion_witness():
    status, out, _ = call("validate", fixture="point-reflection")
    assert status == 1
    assert "torsion" in out and "witness torsion" in out


def test_validate_accepts_half_turn():
    status, out, _ = call("validate", fixture="halfturn-group")
    assert status == 0 and "valid" in out


def test_degenerate_oracle_is_invalid_input():
    status, _, err = call("oracle", fixture="torus-3valued-degenerate")
    assert status == 1 and "witness branch: 3" in err


def test_invalid_map_reports_pair(tmp_path):
    doc = {"dimension": 1, "n": 2,
           "branches": [{"linear": [[2]], "offset": ["0"]}, {"linear": [[2]], "offset": ["0"]}],
           "g": {"linear": [[0]], "offset": ["0"]}}
    path = tmp_path / "dup.json"
    path.write_text(json.dumps(doc))
    status, _, err = call("compute", input=str(path))
    assert status == 1 and "witness pair: (1, 2)" in err


@pytest.mark.parametrize("text", ["{not json", '{"dimension": 1}', '[1, 2]'])
def test_parse_errors(tmp_path, text):
    path = tmp_path / "bad.json"
    path.write_text(text)
    assert call("compute", input=str(path))[0] == 3


def test_missing_file_and_unknown_fixture(tmp_path):
    assert call("compute", input=str(tmp_path / "nope.json"))[0] == 3
    assert call("compute", fixture="no-such-fixture")[0] == 3


def test_mismatch_exit_code(monkeypatch):
    def broken(phi, psi):
        raise MismatchDetected("N", 2, 3)
    monkeypatch.setattr(cli, "compute_invariants", broken)
    status, _, err = call("compute", fixture="torus-3valued-root")
    assert status == 2 and "mismatch" in err


def test_bad_usage_is_not_a_mismatch(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 3


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixture_round_trip(name, tmp_path):
    path = tmp_path / f"{name}.json"
    assert call("example", fixture=name, output=str(path))[0] == 0
    doc = io.load(path.read_text())
    assert doc == fixture(name)
    assert io.dump(doc) == path.read_text()
    kind = io.document_kind(doc)
    parse, emit = {"affine": (io.affine_from_json, io.affine_to_json),
                   "problem": (io.problem_from_json, io.problem_to_json),
                   "group": (lambda d: (io.group_from_json(d),), io.group_to_json)}[kind]
    obj = parse(doc)
    again = emit(*obj)
    assert parse(io.load(io.dump(again))) == obj
    assert emit(*parse(again)) == again


@pytest.mark.parametrize("command, name", [
    ("compute", "torus-3valued-root"), ("compute", "halfturn-2valued"),
    ("classes", "torus-3valued-root"), ("oracle", "circle-cube-root"),
])
def test_byte_stable_output(command, name):
    first = call(command, fixture=name, format="json")[1]
    assert first and all(call(command, fixture=name, format="json")[1] == first for _ in range(3))


def test_table_formats_render():
    for command, name in [("compute", "halfturn-3d"), ("classes", "circle-split-pair"),
                          ("oracle", "torus-3valued-root")]:
        status, out, _ = call(command, fixture=name)
        assert status == 0 and out.strip()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "nvcoin", "compute", "--fixture", "torus-doubling",
                           "--format", "json"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["N"] == 1
