import json
import subprocess
import sys

import pytest

from bireflect.cli import main
from bireflect.serialize import MalformedInput, mat_from_json, request_from_json, spec_from_json

FP5 = {"kind": "Fp", "p": 5}
FP7 = {"kind": "Fp", "p": 7}
TOWER = {"kind": "QuadExt", "base": {"kind": "QuadExt", "base": {"kind": "Q"}, "d": "-1"}, "d": "5"}


def req(spec, entries, **extra):
    return json.dumps({"spec": spec, "element": {"entries": entries}, **extra})


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_gl_not_real(capsys):
    code, out, _ = run(["classify", req({"kind": "GL", "field": FP7, "n": 2}, [["2", "0"], ["0", "3"]])], capsys)
    assert code == 0
    d = json.loads(out)
    assert d["real"]["verdict"] == "No" and d["real"]["obstruction"]["tag"] == "NonReciprocalInvariantFactor"


def test_classify_sl2_unipotent(capsys):
    code, out, _ = run(["classify", req({"kind": "SL", "field": FP5, "n": 2}, [["1", "1"], ["0", "1"]])], capsys)
    assert code == 0
    d = json.loads(out)
    assert (d["real"]["verdict"], d["strongly_real"]["verdict"]) == ("Yes", "No")
    g = mat_from_json(d["real"]["conjugator"])
    t = mat_from_json(d["element"])
    assert g * t == t.inverse() * g


def test_witness_prints_only_witnesses(capsys):
    code, out, _ = run(["witness", req({"kind": "GL", "field": FP7, "n": 2}, [["2", "0"], ["0", "4"]])], capsys)
    assert code == 0
    d = json.loads(out)
    assert set(d) == {"real", "strongly_real"}
    assert set(d["strongly_real"]) == {"sigma", "tau"}


def test_unknown_tower_exits_3(capsys):
    spec = {"kind": "U", "gram": {"field": TOWER, "entries": [["1", "0"], ["0", "3"]]}}
    t = [[["9", "4"], "0"], ["0", ["9", "-4"]]]
    code, out, _ = run(["classify", req(spec, t)], capsys)
    assert code == 3
    assert json.loads(out)["real"]["verdict"] == "Unknown"


def test_quaternion_request(capsys):
    spec = {"kind": "Quaternion", "field": {"kind": "Q"}, "a": "-1", "b": "-1", "group": "Units"}
    code, out, _ = run(["classify", json.dumps({"spec": spec, "element": ["0", "1", "0", "0"]})], capsys)
    assert code == 0
    d = json.loads(out)
    assert (d["real"]["verdict"], d["strongly_real"]["verdict"]) == ("Yes", "No")


@pytest.mark.parametrize(
    "arg",
    [
        "{not json",
        json.dumps({"spec": {"kind": "SL", "field": FP5, "n": 2}}),
        json.dumps({"spec": {"kind": "Nope"}, "element": {"entries": [["1"]]}}),
        req({"kind": "SL", "field": FP5, "n": 2}, [["1", "x"], ["0", "1"]]),
        "/no/such/file.json",
    ],
)
def test_malformed_input_exits_1(arg, capsys):
    assert run(["classify", arg], capsys)[0] == 1


def test_validation_failure_exits_2(capsys):
    code, _, err = run(["classify", req({"kind": "SL", "field": FP5, "n": 2}, [["1", "1"], ["0", "2"]])], capsys)
    assert code == 2 and "NotInGroup" in err
    code, _, _ = run(["classify", json.dumps({"spec": {"kind": "Sp", "field": FP5, "n": 3}, "element": {"entries": [["1"]]}})], capsys)
    assert code == 2


def test_input_from_file(tmp_path, capsys):
    p = tmp_path / "req.json"
    p.write_text(req({"kind": "SL", "field": FP5, "n": 2}, [["1", "1"], ["0", "1"]]))
    out_file = tmp_path / "rep.json"
    code, out, _ = run(["classify", str(p), "--out", str(out_file)], capsys)
    assert code == 0 and out == ""
    assert json.loads(out_file.read_text())["real"]["verdict"] == "Yes"


def test_census_sl2f3(tmp_path, capsys):
    spec = json.dumps({"kind": "SL", "field": {"kind": "Fp", "p": 3}, "n": 2})
    code, out, err = run(["census", spec], capsys)
    assert code == 0
    assert len(out.splitlines()) == 8
    assert err.strip() == "classes=7, real=3, strongly_real=2, disagreements=0"
    tsv = tmp_path / "c.tsv"
    code, out, _ = run(["census", spec, "--out", str(tsv)], capsys)
    assert code == 0 and out.strip() == "classes=7, real=3, strongly_real=2, disagreements=0"
    assert len(tsv.read_text().splitlines()) == 8


def test_census_errors(capsys):
    assert run(["census", json.dumps({"kind": "SL", "field": FP7, "n": 3})], capsys)[0] == 4
    assert run(["census", json.dumps({"kind": "SL", "field": FP5, "n": 2}), "--semisimple"], capsys)[0] == 1
    assert run(["census", json.dumps({"kind": "SL", "field": FP5, "n": 2}), "--jobs", "0"], capsys)[0] == 1
    assert run(["census", json.dumps({"kind": "SL", "field": {"kind": "Q"}, "n": 2})], capsys)[0] != 0


def test_census_semisimple_so(capsys):
    spec = json.dumps({"kind": "SO", "field": FP5, "n": 4})
    code, out, err = run(["census", spec, "--semisimple"], capsys)
    assert code == 0 and "disagreements=0" in err
    assert out.startswith("rep\tsize\t")


def test_verify_paper_filters(capsys):
    code, out, _ = run(["verify-paper", "sl2-*"], capsys)
    assert code == 0
    assert out.splitlines()[-1] == "2/2 passed"
    assert {line.split()[1].rstrip(":") for line in out.splitlines()[:-1]} == {"sl2-remark2-f5", "sl2-remark2-f7"}
    assert run(["verify-paper", "zz*"], capsys)[0] == 1


def test_help_documents_exit_codes(capsys):
    code, out, _ = run(["--help"], capsys)
    assert code == 0 and "exit codes" in out and "Unknown" in out
    assert run(["frobnicate"], capsys)[0] == 1


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "bireflect", *args], capture_output=True)


def test_output_is_byte_deterministic():
    spec = {"kind": "SO", "field": FP5, "n": 6}
    t = [["2", "0", "0", "0", "0", "0"], ["0", "1", "0", "0", "0", "0"], ["0", "0", "4", "0", "0", "0"],
         ["0", "0", "0", "4", "0", "0"], ["0", "0", "0", "0", "1", "0"], ["0", "0", "0", "0", "0", "3"]]
    a = _cli("classify", req(spec, t), "--seed", "7")
    b = _cli("classify", req(spec, t), "--seed", "7")
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout and a.stdout
    c = _cli("census", json.dumps({"kind": "PSL2", "field": FP5}))
    d = _cli("census", json.dumps({"kind": "PSL2", "field": FP5}), "--jobs", "3")
    assert c.returncode == d.returncode == 0 and c.stdout == d.stdout


def test_request_parsing():
    spec, t, hint = request_from_json(json.loads(req({"kind": "Sp", "field": FP5, "n": 4}, [["1"] * 4] * 4)))
    assert spec.kind == "Sp" and t.nrows == 4 and hint is None
    assert spec_from_json({"kind": "Projective", "inner": {"kind": "Sp", "field": FP5, "n": 4}}).is_projective
    assert spec_from_json({"kind": "PSL2", "field": FP5}).is_projective
    with pytest.raises(MalformedInput):
        mat_from_json({"entries": [["1", "2"], ["3"]]}, spec.field)
    with pytest.raises(MalformedInput):
        mat_from_json({"entries": [[["1", "2"]]]}, spec.field)
