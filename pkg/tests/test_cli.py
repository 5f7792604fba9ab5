import io
import json

import pytest

from liemodels.cli import run


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def invoke_json(*argv):
    code, text, err = invoke(*argv, "--format", "json")
    return code, json.loads(text) if text else None, text


def test_model_nil_table():
    code, doc, _ = invoke_json("model", "sphere-product", "--d", "3", "--n", "2", "--show", "nil",
                               "--max-degree", "10")
    assert code == 0
    assert doc["result"]["nil"] == {str(k): (2 if k == 3 else 0) for k in range(11)}
    assert set(doc) == {"request", "result", "checks"}


def test_massey_text():
    code, text, _ = invoke("massey", "gtht")
    assert code == 0
    lines = text.splitlines()
    assert lines[1] in ("value: ∂/∂w", "value: -∂/∂w")
    assert "indeterminacy: 0" in lines
    assert "nontrivial: true" in lines


def test_massey_with_explicit_inputs():
    code, doc, _ = invoke_json("massey", "gtht", "--a", "x=z", "--b", "u=x", "--c", "w=y")
    assert code == 0
    assert doc["result"]["nontrivial"] is True


def test_series_es_against_closed_forms():
    _, es, _ = invoke_json("series", "es-poincare", "--d", "3", "--max-degree", "40")
    _, redo, _ = invoke_json("series", "closed", "--case", "odd-n2-rederived", "--d", "3",
                             "--max-degree", "40")
    _, as_listed, _ = invoke_json("series", "closed", "--case", "odd-n2", "--d", "3",
                                "--max-degree", "40")
    assert es["result"]["coefficients"] == redo["result"]["coefficients"]
    assert es["result"]["coefficients"] != as_listed["result"]["coefficients"]
    _, es5, _ = invoke_json("series", "es-poincare", "--d", "5", "--max-degree", "40")
    _, cl5, _ = invoke_json("series", "closed", "--case", "odd-n2", "--d", "5", "--max-degree", "40")
    assert es5["result"]["coefficients"] == cl5["result"]["coefficients"]


@pytest.mark.parametrize("argv", [
    ("model", "gtht", "--show", "nil"),
    ("der", "gtht", "--degree", "2"),
    ("homology", "sphere-product", "--d", "2", "--n", "2", "--representatives"),
    ("homology", "wg-quotient", "--g", "1", "--n", "2", "--outer", "--max-degree", "3"),
    ("ce", "sphere-product", "--d", "3", "--n", "2", "--max-degree", "8"),
    ("molien", "swap-abcd", "--max-degree", "8"),
    ("invariants", "even-sphere-pair+", "--d", "2", "--degree", "4", "--grading", "weight"),
    ("series", "modforms", "--tag", "SL2Z", "--max-degree", "12"),
])
def test_json_round_trip_and_determinism(argv):
    code, doc, text = invoke_json(*argv)
    assert code == 0
    again = json.dumps(doc, sort_keys=True, ensure_ascii=False, indent=2) + "\n"
    assert again == text
    assert invoke_json(*argv)[2] == text


def test_homology_values():
    _, doc, _ = invoke_json("homology", "sphere-product", "--d", "2", "--n", "2")
    assert doc["result"]["homology"] == {"1": 2, "2": 0, "3": 2}
    _, doc, _ = invoke_json("homology", "wg", "--g", "1", "--n", "2", "--max-degree", "2")
    assert doc["result"]["homology"]["1"] == 2


def test_invariants_check_passes():
    code, doc, _ = invoke_json("invariants", "swap-abcd", "--degree", "2")
    assert code == 0 and len(doc["result"]["basis"]) == 6
    assert all(c["pass"] for c in doc["checks"])


@pytest.mark.parametrize("argv", [
    ("molien", "swap-abcd"),
    ("model", "nope"),
    ("model", "wg", "--g", "1"),
    ("model", "gtht", "--d", "3"),
    ("series", "sl3", "--d", "5", "--max-degree", "10"),
    ("molien", "swap-abcd", "--grading", "weight", "--max-degree", "4"),
    ("massey", "sphere-product", "--d", "3", "--n", "2"),
    ("not-a-command",),
])
def test_invalid_input_exits_1(argv):
    code, _, err = invoke(*argv)
    assert code == 1


def test_missing_model_file_exits_1(tmp_path):
    code, _, err = invoke("model", "--file", str(tmp_path / "none.json"))
    assert code == 1 and "error" in err


def test_model_file(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"kind": "sullivan",
                                "generators": [{"name": "a", "degree": 3}, {"name": "b", "degree": 3}]}))
    code, doc, _ = invoke_json("nil", "--file", str(path))
    assert code == 0
    assert doc["result"]["nil"]["3"] == 2


def test_window_too_small_exits_2():
    code, _, err = invoke("ce", "gtht", "--max-degree", "8", "--slice-max", "3")
    assert code == 2
    assert "degree 4" in err


def test_failed_check_exits_3():
    code, text, _ = invoke("crosscheck", "--max-degree", "60")
    assert code == 3
    assert "FAIL series odd-n2 d=3" in text
    assert "PASS series odd-n2 d=5" in text
    assert "PASS gtht Massey product nontrivial" in text
