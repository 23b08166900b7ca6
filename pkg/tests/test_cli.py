import csv
import io
import json
from importlib import resources

import pytest

from ewcg import fixtures
from ewcg.cli import main


@pytest.fixture(scope="module")
def spec_path(tmp_path_factory):
    text = resources.files("ewcg.data").joinpath("example1.json").read_text()
    path = tmp_path_factory.mktemp("specs") / "example1.json"
    path.write_text(text)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_weights_json(capsys, spec_path):
    code, out, _ = run(capsys, "weights", "--spec", spec_path, "--b", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["command"] == "weights"
    assert doc["b"] == 2
    assert doc["spec_hash"]
    assert "budgets" in doc
    side1 = doc["sides"][0]
    edges = {(e["u"], e["v"]): e for e in side1["edges"]}
    assert edges[(-2, 0)]["raw"] == pytest.approx(0.3)
    assert edges[(-2, 0)]["normalized"] == pytest.approx(0.9375)
    assert edges[(-2, 0)]["replicas"] == [1.0, 0.875]


def test_weights_counting_rule(capsys, spec_path):
    code, out, _ = run(capsys, "weights", "--spec", spec_path, "--rule", "counting")
    assert code == 0
    doc = json.loads(out)
    assert doc["rule"] == "counting"
    assert all(e["raw"] == int(e["raw"]) for e in doc["sides"][0]["edges"])


def test_weights_csv(capsys, spec_path):
    code, out, _ = run(capsys, "weights", "--spec", spec_path, "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["key", "value"]


def test_color_traditional(capsys, spec_path):
    # spec options default to b=2/a=5; flags override them
    code, out, _ = run(capsys, "color", "--spec", spec_path,
                       "--b", "1", "--a", "3", "--mode", "exact")
    assert code == 0
    doc = json.loads(out)
    assert doc["valid"] is True
    assert doc["b"] == 1
    assert doc["entropy_rate"] == pytest.approx(1.3458, abs=1e-3)


def test_color_folded(capsys, spec_path):
    code, out, _ = run(capsys, "color", "--spec", spec_path,
                       "--a", "5", "--b", "2", "--mode", "exact")
    assert code == 0
    doc = json.loads(out)
    assert doc["valid"] is True
    assert doc["a"] == 5 and doc["b"] == 2
    assert doc["entropy_rate"] <= 1.0838 + 1e-6
    assert sum(doc["color_pmf"]["probs"]) == pytest.approx(1.0, abs=1e-3)


def test_color_missing_a_is_input_error(capsys, spec_path, tmp_path):
    doc = json.loads(open(spec_path).read())
    doc["options"] = {}
    bare = tmp_path / "bare.json"
    bare.write_text(json.dumps(doc))
    code, _, err = run(capsys, "color", "--spec", str(bare), "--b", "2")
    assert code == 2
    assert "error:" in err


def test_color_infeasible_exit_code(capsys, spec_path):
    code, _, err = run(capsys, "color", "--spec", spec_path,
                       "--a", "2", "--b", "1", "--mode", "exact")
    assert code == 3
    assert "error:" in err


def test_color_capacity_exit_code(capsys, spec_path):
    # exact traditional coloring of the 25-vertex square exceeds the budget
    code, _, err = run(capsys, "color", "--spec", spec_path,
                       "--n", "2", "--mode", "exact")
    assert code == 4
    assert "error:" in err


def test_chif(capsys, spec_path):
    code, out, _ = run(capsys, "chif", "--spec", spec_path)
    assert code == 0
    doc = json.loads(out)
    assert doc["chi_f"] == "5/2"
    assert doc["chi_f_float"] == 2.5
    table = {row["b"]: row["chi_b"] for row in doc["chi_b_table"]}
    assert table == {1: 3, 2: 5, 3: 8}


def test_rates(capsys, spec_path):
    code, out, _ = run(capsys, "rates", "--spec", spec_path,
                       "--b", "2", "--mode", "exact")
    assert code == 0
    doc = json.loads(out)
    assert doc["chi_f_1"] == "5/2"
    assert doc["rate_1"] <= doc["traditional_rate_1"]
    assert doc["savings_1"] > 0
    assert doc["complete"] is True


def test_simulate(capsys, spec_path, tmp_path):
    # num_blocks comes from spec options; write a small-run copy
    doc = json.loads(open(spec_path).read())
    doc.setdefault("options", {})["num_blocks"] = 500
    small = tmp_path / "small.json"
    small.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "simulate", "--spec", str(small), "--seed", "7")
    assert code == 0
    rep = json.loads(out)
    assert rep["samples"] == 500
    assert rep["decode_errors"] == 0
    assert rep["seed"] == 7


def test_simulate_binning_flag_validation(capsys, spec_path):
    code, _, err = run(capsys, "simulate", "--spec", spec_path,
                       "--binning", "1.0,2.0")
    assert code == 2
    assert "R1,R2,L" in err


def test_bad_spec_file_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "weights", "--spec", str(bad))
    assert code == 2
    assert "error:" in err


def test_missing_spec_file_exit_code(capsys, tmp_path):
    code, _, err = run(capsys, "weights", "--spec", str(tmp_path / "nope.json"))
    assert code == 2


def test_out_writes_report_and_figure(capsys, spec_path, tmp_path):
    out_path = tmp_path / "report.json"
    code, out, _ = run(capsys, "weights", "--spec", spec_path,
                       "--out", str(out_path))
    assert code == 0
    assert out == ""  # report goes to the file, not stdout
    doc = json.loads(out_path.read_text())
    assert doc["command"] == "weights"
    png = out_path.with_suffix(".png")
    assert png.exists() and png.stat().st_size > 0


def test_reproduce_example_all_pass(capsys):
    code, out, _ = run(capsys, "reproduce-example")
    assert code == 0
    doc = json.loads(out)
    assert doc["all_pass"] is True
    assert all(row["pass"] for row in doc["rows"])
    assert len(doc["rows"]) == 19


def test_reproduce_example_csv_rows(capsys):
    code, out, _ = run(capsys, "reproduce-example", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["check", "expected", "got", "tol", "pass"]
    assert len(rows) == 20


def test_reproduce_example_detects_tampering(capsys, monkeypatch):
    real = fixtures.load_fixture

    def tampered(name):
        fx = real(name)
        if name == "weighted_5_2":
            fx = type(fx)(name=fx.name, side=fx.side, power=fx.power,
                          weighted=fx.weighted, coloring=fx.coloring,
                          reference_rate=fx.reference_rate,
                          reference_pmf=(0.2,) * 5, provenance=fx.provenance)
        return fx

    monkeypatch.setattr(fixtures, "load_fixture", tampered)
    code, out, _ = run(capsys, "reproduce-example")
    assert code == 5
    doc = json.loads(out)
    assert not doc["all_pass"]
    bad = [r for r in doc["rows"] if not r["pass"]]
    assert any(r["check"] == "weighted_5_2_rate" for r in bad)


def test_deterministic_output(capsys, spec_path):
    _, out1, _ = run(capsys, "color", "--spec", spec_path, "--mode", "exact")
    _, out2, _ = run(capsys, "color", "--spec", spec_path, "--mode", "exact")
    assert out1 == out2
