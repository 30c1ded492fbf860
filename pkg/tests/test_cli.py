import json

import pytest

from flowlattice.cli import main
from flowlattice.dag import FramedDag, build_path


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_round_trips(capsys):
    code, out, _ = run(capsys, "gen", "--path", "3,4,2")
    assert code == 0
    assert FramedDag.from_json(json.loads(out)) == build_path((3, 4, 2))
    code, out, _ = run(capsys, "gen", "--cycle", "3,2", "--emit", "tikz")
    assert code == 0 and out.startswith("\\begin{tikzpicture}")


def test_gen_from_dag_file(capsys, tmp_path):
    f = tmp_path / "d.json"
    f.write_text(json.dumps(build_path((1, 1)).to_json()))
    code, out, _ = run(capsys, "routes", "--dag", str(f))
    assert code == 0 and out.strip().endswith("12 routes")


def test_routes_json(capsys):
    code, out, _ = run(capsys, "routes", "--path", "6", "--json")
    data = json.loads(out)
    assert data["schema"] == "routes.v1"
    assert sum(r["exceptional"] for r in data["routes"]) == 8


def test_diagram_and_orders(capsys):
    code, out, _ = run(capsys, "diagram", "--path", "2")
    assert code == 0 and "●" in out
    code, out, _ = run(capsys, "diagram", "--cycle", "2,2", "--emit", "json")
    assert json.loads(out)["glue"] is True
    code, out, _ = run(capsys, "pull-orders", "--path", "1,1")
    assert out.strip().endswith("2 orders")


def test_poly(capsys):
    code, out, _ = run(capsys, "poly", "--cycle", "1,1")
    assert out.startswith("dim 2 in R^2, 6 vertices, 6 facets")
    code, out, _ = run(capsys, "poly", "--path", "1", "--which", "flow", "--json")
    assert json.loads(out)["dim"] == 4


def test_pull_canonical_and_from_file(capsys, tmp_path):
    code, out, err = run(capsys, "pull", "--path", "2")
    assert code == 0 and "equals DKK: True" in err
    assert json.loads(out)["cells"] == 14
    order = tmp_path / "order.json"
    order.write_text(json.dumps(["1,3", "2,3⁺"]))
    code, out, err = run(capsys, "pull", "--path", "2", "--order", str(order), "--trace")
    lines = out.strip().splitlines()
    assert len(lines) == 3 and all(json.loads(x)["schema"] == "subdivision.v1" for x in lines)
    assert "equals DKK: False" in err


def test_verify_and_replay(capsys, tmp_path):
    report = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "--corpus", "path:1;cycle:1,1", "--checks", "T3,T12", "--json", str(report), "--quiet")
    assert code == 0 and "verified 4" in out
    payload = json.loads(report.read_text())
    assert payload["schema"] == "report.v1" and [r["id"] for r in payload["reports"]] == [0, 1, 2, 3]
    code, out, _ = run(capsys, "replay", str(report), "--id", "1")
    assert code == 0 and "replay matches the report" in out


def test_counterexample_exit_code_and_replay(capsys, tmp_path):
    report = tmp_path / "r.json"
    code, _, err = run(capsys, "verify", "--corpus", "path:2", "--checks", "T18", "--json", str(report))
    assert code == 1 and "counterexample" in err
    code, out, _ = run(capsys, "replay", str(report), "--id", "0")
    assert code == 1 and "replay matches the report" in out
    code, _, _ = run(capsys, "replay", str(report), "--id", "9")
    assert code == 2


def test_errors_exit_2(capsys):
    code, _, err = run(capsys, "gen", "--cycle", "3")
    assert code == 2 and err.startswith("error:")
    with pytest.raises(SystemExit):
        main(["gen", "--path", "a,b"])
