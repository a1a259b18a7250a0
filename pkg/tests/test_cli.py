import json
import subprocess
import sys

import pytest

from leonard_lab.cli import InputError, main, parse_subject


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


KRAW3 = {
    "A": [["0", "3", "0", "0"], ["1", "0", "2", "0"], ["0", "2", "0", "1"], ["0", "0", "3", "0"]],
    "A_star": [["3", "0", "0", "0"], ["0", "1", "0", "0"], ["0", "0", "-1", "0"], ["0", "0", "0", "-3"]],
}


def test_verify_family_text(capsys):
    code, out, _ = run(capsys, "verify", "--family", "krawtchouk", "--d", "3", "--field", "Q")
    assert code == 0
    det_lines = [line for line in out.splitlines() if line.startswith(("det1 ", "det1s ", "det2 "))]
    assert len(det_lines) == 3 and all("144" in line for line in det_lines)
    assert out.rstrip().endswith("result: PASS")


def test_verify_field_too_small(capsys):
    code, _, err = run(capsys, "verify", "--family", "krawtchouk", "--d", "3", "--field", "p=3")
    assert code == 2
    assert "FieldTooSmall" in err


def test_verify_matrices_json(capsys, tmp_path):
    spec = {"field": "Q", "subject": {"matrices": {**KRAW3, "basis_tag": "dual_eigenbasis"}}}
    code, out, _ = run(capsys, "verify", "--input", write(tmp_path, "ok.json", spec), "--report", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["passed"] and doc["beta"]["value"] == "2"
    assert {r["name"]: r["lhs"] for r in doc["checks"]}["det1"] == "144"


def test_verify_corrupted_pair_json(capsys, tmp_path):
    bad = json.loads(json.dumps(KRAW3))
    bad["A"][0][1] = "0"
    spec = {"field": "Q", "subject": {"matrices": {**bad, "basis_tag": "dual_eigenbasis"}}}
    code, out, _ = run(capsys, "verify", "--input", write(tmp_path, "bad.json", spec), "--report", "json")
    assert code == 1
    doc = json.loads(out)
    row = next(r for r in doc["checks"] if r["name"] == "leonard_pair")
    assert row["status"] == "fail" and "NotTridiagonalizable" in row["detail"]


def test_verify_repeated_eigenvalue(capsys, tmp_path):
    bad = json.loads(json.dumps(KRAW3))
    bad["A_star"][2][2] = "1"
    spec = {"field": "Q", "subject": {"matrices": bad}}
    code, out, _ = run(capsys, "verify", "--input", write(tmp_path, "rep.json", spec))
    assert code == 1
    assert "EigenvaluesNotDistinct" in out


def test_deterministic_output(capsys, tmp_path):
    outs = []
    for k in range(2):
        target = tmp_path / f"r{k}.json"
        code, _, _ = run(capsys, "verify", "--family", "krawtchouk", "--d", "5", "--field", "p=13",
                         "--report", "json", "--out", str(target))
        assert code == 0
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]


def test_checks_filter(capsys):
    code, out, _ = run(capsys, "verify", "--family", "krawtchouk", "--d", "3", "--report", "json", "--checks", "det2,rank")
    assert code == 0
    assert [r["name"] for r in json.loads(out)["checks"]] == ["leonard_pair", "rank", "det2"]


def test_parameter_array_input(capsys, tmp_path):
    spec = {"field": "Q", "subject": {"parameter_array": {
        "theta": ["1", "-1"], "theta_star": ["1", "-1"], "first_split": ["-2"], "second_split": ["2"]}}}
    code, out, _ = run(capsys, "verify", "--input", write(tmp_path, "pa.json", spec), "--report", "json")
    assert code == 0
    assert {r["name"]: r["lhs"] for r in json.loads(out)["checks"]}["det1"] == "4"


@pytest.mark.parametrize(
    "argv,needle",
    [
        (["verify", "--family", "krawtchouk", "--d", "3", "--field", "p=12"], "--field"),
        (["verify", "--family", "krawtchouk", "--d", "3", "--checks", "det9"], "--checks"),
        (["verify", "--family", "krawtchouk"], "--d"),
        (["verify"], "--input"),
        (["verify", "--input", "/nonexistent/x.json"], "--input"),
        (["search", "--d", "5", "--field", "p=13"], "--d"),
        (["search", "--d", "3", "--field", "Q"], "--field"),
        (["search", "--d", "3", "--field", "p=13", "--limit", "-1"], "--limit"),
    ],
)
def test_usage_errors(capsys, argv, needle):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert needle in err


@pytest.mark.parametrize(
    "obj,needle",
    [
        ({"subject": {"family": {"name": "krawtchouk", "d": 1}}}, "field"),
        ({"field": {"p": 9}, "subject": {"family": {"name": "krawtchouk", "d": 1}}}, "field"),
        ({"field": "Q", "subject": {}}, "subject"),
        ({"field": "Q", "subject": {"family": {"name": "hahn", "d": 1}}}, "subject.family.name"),
        ({"field": "Q", "subject": {"family": {"name": "krawtchouk", "d": 0}}}, "subject.family.d"),
        ({"field": "Q", "subject": {"matrices": {"A": [["1", "x"], ["0", "1"]], "A_star": [["1"]]}}}, "subject.matrices.A"),
        ({"field": "Q", "subject": {"matrices": {"A": [["1"]], "A_star": [["1"]], "basis_tag": "weird"}}}, "basis_tag"),
        ({"field": "Q", "subject": {"parameter_array": {"theta": ["1", "1"], "theta_star": ["1", "-1"],
                                                          "first_split": ["1"], "second_split": ["1"]}}}, "parameter_array"),
    ],
)
def test_bad_inputs(capsys, tmp_path, obj, needle):
    code, _, err = run(capsys, "verify", "--input", write(tmp_path, "in.json", obj))
    assert code == 2
    assert needle in err


def test_parse_subject_rejects_two_variants():
    with pytest.raises(InputError, match="exactly one"):
        parse_subject({"field": "Q", "subject": {"family": {}, "matrices": {}}})


def test_search_then_verify(capsys, tmp_path):
    out_path = tmp_path / "found.json"
    code, _, _ = run(capsys, "search", "--d", "3", "--field", "p=13", "--limit", "5", "--out", str(out_path))
    assert code == 0
    found = json.loads(out_path.read_text())
    assert 1 <= len(found) <= 5
    code, out, _ = run(capsys, "verify", "--input", str(out_path), "--report", "json")
    assert code == 0
    reports = json.loads(out)
    assert len(reports) == len(found) and all(r["passed"] for r in reports)


def test_search_limit_zero(capsys):
    code, out, _ = run(capsys, "search", "--d", "3", "--field", "p=13", "--limit", "0")
    assert code == 0
    assert json.loads(out) == []


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "leonard_lab", "verify", "--family", "krawtchouk", "--d", "1"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "result: PASS" in proc.stdout
