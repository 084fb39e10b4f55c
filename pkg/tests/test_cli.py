import json
import subprocess
import sys

import pytest

from esaembed.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_generate_counts(capsys, tmp_path):
    code, out, _ = run(capsys, "generate", "--family", "diamond", "--n", "1", "--k", "3")
    assert code == 0 and json.loads(out)["vertices"] == 5
    code, out, _ = run(capsys, "generate", "--family", "laakso", "--n", "1", "--k", "2", "--out-dir", str(tmp_path))
    rep = json.loads(out)
    assert code == 0 and (rep["vertices"], rep["edges"]) == (6, 6)
    assert (tmp_path / "laakso_1_2.json").exists() and (tmp_path / "laakso_1_2.dot").read_text().startswith("graph")


def test_usage_errors(capsys):
    code, _, err = run(capsys, "generate", "--family", "diamond", "--n", "-1", "--k", "3")
    assert code == 2 and "n >= 0" in err
    with pytest.raises(SystemExit) as exc:
        main(["generate", "--family", "tree", "--n", "1", "--k", "2"])
    assert exc.value.code == 2
    code, _, _ = run(capsys, "verify")
    assert code == 2


def test_embed_vertex(capsys):
    code, out, _ = run(capsys, "embed", "--family", "diamond", "--n", "1", "--k", "2", "--vertex", "1/2:1", "--norm", "l1")
    rep = json.loads(out)
    assert code == 0 and rep["norms"]["1/2:1"]["l1"] == "8"
    assert rep["image"][0] == {"len": 1, "start": 2, "val": "1"}
    code, _, _ = run(capsys, "embed", "--family", "diamond", "--n", "1", "--k", "2", "--vertex", "1/2:7")
    assert code == 2


def test_verify_diamond(capsys, tmp_path):
    out_file = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "--family", "diamond", "--n", "2", "--k", "2", "--norm", "l1", "--out", str(out_file))
    rep = json.loads(out)
    assert code == 0 and rep["passed"]
    assert rep["instance"]["distortion"]["l1"]["distortion"] == {"exact": "2/1", "approx": 2.0}
    assert out_file.read_text() == out


def test_verify_laakso(capsys):
    code, out, _ = run(capsys, "verify", "--family", "laakso", "--n", "1", "--k", "3")
    assert code == 0 and json.loads(out)["instance"]["checks"]["c_conditions"]


def test_verify_axioms(capsys):
    code, out, _ = run(capsys, "verify", "--axioms", "--count", "50", "--seed", "3")
    rep = json.loads(out)
    assert code == 0 and rep["axioms"]["seed"] == 3


def test_verify_resource_guard(capsys):
    code, _, err = run(capsys, "verify", "--family", "diamond", "--n", "3", "--k", "3")
    assert code == 3 and "M=39" in err


def test_obstruct_ramsey(capsys):
    code, out, _ = run(capsys, "obstruct", "--check", "ramsey", "--C", "2")
    rep = json.loads(out)
    assert code == 0 and rep["ramsey"]["formula"] == "R_3(2^32, 3)"
    assert rep["ramsey"]["label"] == "upper bound, not exact"
    code, out, _ = run(capsys, "obstruct", "--check", "ramsey", "--C-squared", "2")
    assert json.loads(out)["ramsey"]["s"] == "65536"
    assert run(capsys, "obstruct", "--check", "ramsey")[0] == 2


def test_obstruct_factor(capsys):
    code, out, _ = run(capsys, "obstruct", "--check", "factor", "--n", "2", "--k", "2", "3")
    rep = json.loads(out)["instances"]
    assert code == 0
    assert rep["diamond_2_2"]["smallest_passing_C"]["exact"] == "256/1"
    assert rep["diamond_2_3"]["smallest_passing_C"]["exact"] == "16384/1"


def test_obstruct_factor_input(capsys, tmp_path):
    code, out, _ = run(capsys, "embed", "--family", "diamond", "--n", "1", "--k", "2")
    table = json.loads(out)
    doc = {"family": "diamond", "n": 1, "k": 2, "images": table["images"], "C": "17", "scale": "1/16"}
    path = tmp_path / "emb.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "obstruct", "--check", "factor", "--input", str(path))
    assert code == 0 and json.loads(out)["input"]["smallest_passing_C"]["exact"] == "16/1"
    doc["C"] = "16"
    path.write_text(json.dumps(doc))
    assert run(capsys, "obstruct", "--check", "factor", "--input", str(path))[0] == 1
    path.write_text("{not json")
    assert run(capsys, "obstruct", "--check", "factor", "--input", str(path))[0] == 2


def test_obstruct_pipeline(capsys, tmp_path):
    red = tmp_path / "z.json"
    code, _, _ = run(capsys, "obstruct", "--check", "midpoints")
    assert code == 0
    code, _, _ = run(capsys, "obstruct", "--check", "reduce", "--out", str(red))
    assert code == 0
    code, out, _ = run(capsys, "obstruct", "--check", "triples", "--input", str(red))
    rep = json.loads(out)
    assert code == 0 and rep["triples"] == 1 and rep["separation_failures"] == []


def test_obstruct_reduce_failure(capsys, tmp_path):
    x = [[{"start": 1, "len": 40, "val": "1"}], [{"start": 1, "len": 20, "val": "1"}], [{"start": 1, "len": 20, "val": "1"}]]
    path = tmp_path / "x.json"
    path.write_text(json.dumps({"x": x, "C": "3"}))
    code, out, _ = run(capsys, "obstruct", "--check", "reduce", "--input", str(path))
    assert code == 1 and json.loads(out)["reduce"]["tag"] == "lfarz"


def test_triples_random_is_deterministic(capsys):
    a = run(capsys, "obstruct", "--check", "triples", "--seed", "5", "--count", "30")
    b = run(capsys, "obstruct", "--check", "triples", "--seed", "5", "--count", "30")
    assert a == b and a[0] == 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "esaembed", "generate", "--family", "diamond", "--n", "2", "--k", "2"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["edges"] == 16
