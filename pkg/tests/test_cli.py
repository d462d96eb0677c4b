import json

import pytest

from lowerable.cli import main, parse_germ_document, InputError
from lowerable.poly import parse_poly

from conftest import GERMS


@pytest.fixture
def write(tmp_path):
    def _write(doc, name="germ.json"):
        path = tmp_path / name
        path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
        return str(path)

    return _write


def run_json(capsys, *argv):
    code = main([*argv, "--format", "json"])
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out else None), out.err


def test_analyze_cusp(write, capsys):
    code, doc, _ = run_json(capsys, "analyze", write(GERMS["cusp"]))
    assert code == 0
    assert (doc["delta"], doc["phi"], doc["d"], doc["ell"]) == ([2], [["1", "x1"]], 2, 2)


def test_analyze_identity(write, capsys):
    code, doc, _ = run_json(capsys, "analyze", write(GERMS["identity"]))
    assert (code, doc["delta"], doc["d"], doc["ell"]) == (0, [1], 1, 1)


def test_analyze_fold_exits_2(write, capsys):
    code, doc, err = run_json(capsys, "analyze", write(GERMS["fold"]), "--ell-max", "10")
    assert code == 2 and doc is None
    assert "not finitely 𝓛-determined up to ell_max=10" in err
    assert "x1^11 in branch 1 component 1 not attainable" in err


def test_generators_cusp(write, capsys):
    code, doc, _ = run_json(capsys, "generators", write(GERMS["cusp"]))
    g = doc["generators"]
    assert code == 0
    assert g["counts"]["m"] == 4 and g["counts"]["H"] == 6 and g["counts"]["L"] == 6
    assert g["counts"]["H_distinct"] == 4
    assert ["x1 d/dx1"] in g["lowerable"]
    assert "verify" not in doc


def test_generators_identity(write, capsys):
    _, doc, _ = run_json(capsys, "generators", write(GERMS["identity"]))
    g = doc["generators"]
    assert [m["field"] for m in g["module"]] == [[["1"]]]
    assert g["lowerable"] == [["d/dx1"]]


def test_generators_double_line_verified(write, capsys):
    _, doc, _ = run_json(capsys, "generators", write(GERMS["double_line"]))
    assert doc["generators"]["module"]
    code, doc, _ = run_json(capsys, "verify", write(GERMS["double_line"]))
    assert code == 0 and doc["verify"]["verdict"] == "pass"


def test_verify_default_orders(write, capsys):
    code, doc, _ = run_json(capsys, "verify", write(GERMS["cusp"]))
    assert code == 0 and doc["verify"]["orders"] == [2, 3, 4]


def test_verify_explicit_orders(write, capsys):
    argv = ["verify", write(GERMS["identity"])] + sum((["--jet-order", str(n)] for n in range(1, 6)), [])
    code, doc, _ = run_json(capsys, *argv)
    assert code == 0 and doc["verify"]["orders"] == [1, 2, 3, 4, 5]


def test_options_from_file(write, capsys):
    doc = dict(GERMS["cusp"], options={"verify_orders": [5, 6], "prune": True})
    code, out, _ = run_json(capsys, "generators", write(doc))
    assert code == 0
    assert out["verify"]["orders"] == [5, 6]
    assert out["generators"]["counts"]["generators"] == 2


def test_injected_fault(write, capsys):
    code, doc, _ = run_json(capsys, "verify", write(GERMS["cusp"]), "--inject-fault", "1")
    assert code == 3
    fails = [c for c in doc["verify"]["checks"] if not c["passed"]]
    assert fails and all("witness" in c for c in fails)


@pytest.mark.parametrize(
    "doc, message",
    [
        ("{not json", "invalid JSON"),
        ({"n": 1, "p": 1, "branches": [["x1+1"]]}, "nonzero constant term in branch 1 component 1"),
        ({"n": 1, "p": 1, "branches": [["x1 +"]]}, "position 4"),
        ({"n": 1, "p": 1, "branches": [["x1"]], "options": {"bogus": 1}}, "unknown option keys: bogus"),
        ({"n": 1, "p": 1, "branches": [["x1"]], "extra": 1}, "unknown top-level keys"),
        ({"n": "1", "p": 1, "branches": [["x1"]]}, "n must be a positive integer"),
    ],
)
def test_input_errors_exit_1(write, capsys, doc, message):
    code, out, err = run_json(capsys, "analyze", write(doc))
    assert code == 1 and out is None
    assert message in err


def test_missing_file(capsys, tmp_path):
    assert main(["analyze", str(tmp_path / "nope.json")]) == 1


def test_json_round_trip_and_determinism(write, capsys):
    path = write(GERMS["surface"])
    main(["verify", path, "--format", "json"])
    first = capsys.readouterr().out
    main(["verify", path, "--format", "json"])
    assert capsys.readouterr().out == first
    doc = json.loads(first)
    n = doc["n"]
    for g in doc["generators"]["module"]:
        for slot in g["field"] + g["preimage"]:
            for s in slot:
                from lowerable.poly import render

                assert render(parse_poly(s, n)) == s


def test_output_file_and_text(write, tmp_path, capsys):
    out = tmp_path / "report.txt"
    assert main(["generators", write(GERMS["cusp"]), "-o", str(out)]) == 0
    text = out.read_text()
    assert "ell=2" in text and "x1 d/dx1" in text
    assert capsys.readouterr().out == ""


def test_parse_document_rejects_bad_option_types():
    with pytest.raises(InputError):
        parse_germ_document(dict(GERMS["cusp"], options={"ell_max": 0}))
    with pytest.raises(InputError):
        parse_germ_document(dict(GERMS["cusp"], options={"prune": "yes"}))
