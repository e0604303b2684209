import json
import subprocess
import sys
from importlib import resources
from pathlib import Path

import jsonschema
import pytest

from gbforge.cli import main

GOLDEN = Path(__file__).parent / "golden"


def schema(name: str) -> dict:
    return json.loads(resources.files("gbforge").joinpath("schemas", f"{name}.schema.json").read_text())


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize(
    "argv,golden",
    [
        (["params", "GB(0,1;0,3;9)"], "params.out"),
        (["bound", "--triple", "1,3,9"], "bound.out"),
        (["canon", "--triple", "2,6,9"], "canon.out"),
        (["verify-families", "--max", "3"], "verify_families.out"),
        (["--pretty", "verify-families", "--max", "3"], "verify_families_pretty.out"),
        (["graph", "dot", "--n", "4", "--a", "1", "--b", "2"], "graph_z4.dot"),
    ],
)
def test_golden(capsys, argv, golden):
    code, out, err = run(capsys, *argv)
    assert code == 0 and err == ""
    assert out == (GOLDEN / golden).read_text()


@pytest.mark.parametrize(
    "argv,name",
    [
        (["params", "GB(0,1;0,3;9)"], "params"),
        (["params", "--triple", "1,5,13", "--distance"], "params"),
        (["distance", "--triple", "1,5,18"], "distance"),
        (["distance", "GB(2,3;1,5;13)", "--side", "z"], "distance"),
        (["bound", "--triple", "1,3,9"], "bound"),
        (["canon", "--triple", "2,6,9"], "canon"),
        (["connectivity", "--three", "--n", "18", "--a", "1", "--b", "5"], "connectivity"),
        (["connectivity", "--n", "6", "--a", "2", "--b", "4"], "connectivity"),
        (["family", "kp", "--param", "2", "--verify"], "family"),
        (["family", "square", "--param", "4"], "family"),
        (["iso", "GB(0,1;0,3;5)", "torus:2,1;-1,2"], "verdict"),
        (["iso", "cyclic:18,1,5", "torus:3,3;3,-3"], "verdict"),
        (["graph", "json", "--torus=3,3;3,-3"], "graph"),
        (["verify-families", "--max", "2", "--kp"], "verify_families"),
        (["classify", "--n-max", "8", "--format", "json"], "classify_rows"),
        (["classify", "--n-max", "8", "--format", "json", "--which", "full"], "classify_rows"),
    ],
)
def test_outputs_match_schema(capsys, argv, name):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    jsonschema.validate(json.loads(out), schema(name))


def test_distance_values(capsys):
    _, out, _ = run(capsys, "distance", "--triple", "1,5,18")
    res = json.loads(out)
    assert (res["N"], res["k"], res["d"], res["status"]) == (36, 2, 6, "exact")
    assert len(res["certificate_support"]) == 6


def test_iso_verdicts(capsys):
    _, out, _ = run(capsys, "iso", "GB(0,1;0,3;5)", "torus:2,1;-1,2")
    assert json.loads(out)["kind"] == "Equivalent"
    _, out, _ = run(capsys, "iso", "cyclic:18,1,5", "torus:3,3;3,-3")
    v = json.loads(out)
    assert (v["kind"], v["whitney_certified"]) == ("Distinct", True)


def test_connectivity_values(capsys):
    assert json.loads(run(capsys, "connectivity", "--three", "--n", "5", "--a", "1", "--b", "1")[1]) is False
    assert json.loads(run(capsys, "connectivity", "--n", "8", "--a", "2", "--b", "3")[1]) is True


@pytest.mark.parametrize(
    "argv",
    [
        ["params", "GB(0,1;0,3)"],
        ["bound", "--triple", "1,2,5"],
        ["family", "odd", "--param", "0"],
        ["canon", "--triple", "3,1,3"],
        ["graph", "dot", "--n", "4"],
        ["iso", "bogus", "cyclic:5,1,2"],
        ["params"],
        ["classify", "--n-max", "120"],
    ],
)
def test_domain_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1 and out == ""
    payload = json.loads(err.strip().splitlines()[-1])
    jsonschema.validate(payload, schema("error"))


@pytest.mark.parametrize(
    "argv",
    [["params", "--bogus"], ["nosuchcommand"], ["canon", "--triple", "1,2"], ["family", "kp"], []],
)
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_classify_to_file(capsys, tmp_path):
    out_file = tmp_path / "table.csv"
    cache = tmp_path / "cache.jsonl"
    code, out, _ = run(capsys, "classify", "--n-max", "5", "--cache", str(cache), "--out", str(out_file))
    assert code == 0
    summary = json.loads(out)
    assert summary["complete"] and summary["rows"] == 4
    lines = out_file.read_bytes().split(b"\r\n")
    assert lines[0] == b"N,k,d,count,representatives,lambda,three_connected,families"
    assert [int(x.split(b",")[0]) for x in lines[1:] if x] == [4, 6, 8, 10]


def test_failed_family_exit_code(capsys, monkeypatch):
    from gbforge import cli
    from gbforge.gbcode import CodeParams, fam_square

    def wrong(n):
        code, p = fam_square(n)
        return code, CodeParams(p.N, p.k, p.d + 1, "claimed")

    monkeypatch.setitem(cli.FAMILIES, "square", wrong)
    code, out, _ = run(capsys, "verify-families", "--max", "2")
    assert code == 1
    assert not json.loads(out)[0]["pass"]


def test_console_script_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "gbforge.cli", "canon", "--triple", "2,6,9"],
        capture_output=True, text=True, check=True,
    )
    assert out.stdout == '"1,3,9"\n'
