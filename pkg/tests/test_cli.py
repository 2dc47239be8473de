import json
import re
import subprocess
import sys

import pytest

from branched_annulus.cli import main
from frozen_values import RUNNING_COEFFS

RUNNING_INPUT = {"coefficients": [[c, 0] for c in RUNNING_COEFFS]}


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(path)


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr().out


@pytest.fixture(scope="module")
def running_report(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    src = write(d, "running.json", RUNNING_INPUT)
    out = d / "report.json"
    assert main(["analyze", src, "--out", str(out)]) == 0
    return src, out.read_text()


def test_analyze_running(running_report):
    _, text = running_report
    rep = json.loads(text)
    assert rep["schema_version"] == "1.0" and rep["status"] == "pass"
    assert rep["cells"]["counts"] == [20, 36, 16]
    assert [p["cycles"] for p in rep["factorization"]["sector_permutations"]] == ["(2,3)", "(1,5)", "(3,4)", "(1,4)"]
    assert rep["factorization"]["product"]["cycles"] == "(1,2,3,4,5)"
    assert [len(part) for part in rep["partition_chain"]] == [5, 4, 2, 1]
    assert len(rep["monodromy"]["generators"]) == 4
    assert all(c["status"] == "pass" for c in rep["checks"])


def test_analyze_is_byte_identical(running_report, tmp_path):
    src, text = running_report
    out = tmp_path / "again.json"
    assert main(["analyze", src, "--out", str(out)]) == 0
    assert out.read_text() == text


def test_roots_input(tmp_path, capsys):
    src = write(tmp_path, "roots.json", {"leading": [1, 0], "roots": [[1, 0], [-1, 0]]})
    code, out = run(["analyze", src], capsys)
    assert code == 0
    assert json.loads(out)["polynomial"]["coefficients"] == [[-1.0, 0.0], [0.0, 0.0], [1.0, 0.0]]


@pytest.mark.parametrize("doc, code, kind", [
    ({"coefficients": [[0, 0], [0, 0], [1, 0]]}, 2, "RepeatedRootsError"),
    ({"coefficients": [[1, 0], [2, 0]]}, 1, "DegreeTooSmall"),
    ({"coefficients": [[1, 0], [2, 0], [0, 0]]}, 1, "ZeroLeadingCoefficient"),
    ({"coefficients": "z^2"}, 1, "InputError"),
    ({"coefficients": [[1, 0, 0], [0, 0], [1, 0]]}, 1, "InputError"),
    ({"roots": [[1, 0]]}, 1, "InputError"),
    ("{not json", 1, "MalformedJSON"),
])
def test_analyze_errors(tmp_path, capsys, doc, code, kind):
    src = write(tmp_path, "bad.json", doc)
    got, out = run(["analyze", src], capsys)
    assert got == code
    err = json.loads(out)["error"]
    assert err["type"] == kind
    if code == 2:
        assert err["message"] == "distinct roots required"


def test_filesystem_errors(tmp_path, capsys):
    code, out = run(["analyze", str(tmp_path / "missing.json")], capsys)
    assert code == 4 and json.loads(out)["error"]["type"] == "FileError"
    src = write(tmp_path, "z2.json", {"coefficients": [-1, 0, 1]})
    code, _ = run(["render", src, "--what", "annulus", "--out", str(tmp_path / "no" / "such" / "dir.svg")], capsys)
    assert code == 4


def test_usage_errors(tmp_path, capsys):
    src = write(tmp_path, "z2.json", {"coefficients": [-1, 0, 1]})
    assert run(["render", src, "--what", "teapot"], capsys)[0] == 1
    assert run([], capsys)[0] == 1
    assert run(["analyze", src, "--samples", "1"], capsys)[0] == 1
    assert run(["verify"], capsys)[0] == 1


def test_render(running_report, tmp_path, capsys):
    src, _ = running_report
    out = tmp_path / "b.svg"
    assert main(["render", src, "--what", "branched", "--samples", "64", "--out", str(out)]) == 0
    svg = out.read_text()
    assert len(re.findall(r'class="root-circle"', svg)) == 5
    assert main(["render", src, "--what", "branched", "--samples", "64", "--out", str(tmp_path / "c.svg")]) == 0
    assert (tmp_path / "c.svg").read_text() == svg
    code, svg = run(["render", src, "--what", "annulus"], capsys)
    assert code == 0 and len(re.findall(r'class="longitude"', svg)) == 4
    code, svg = run(["render", src, "--what", "cacti", "--samples", "32"], capsys)
    assert code == 0 and "direction-" not in svg


def test_verify_running_deep(running_report, capsys):
    src, _ = running_report
    code, out = run(["verify", src, "--deep"], capsys)
    assert code == 0
    (res,) = json.loads(out)["results"]
    by_name = {c["name"]: c for c in res["checks"]}
    assert by_name["step_halving"]["status"] == "pass"
    assert by_name["chain_merge_oracle"]["status"] == "pass"
    assert all(c["status"] == "pass" for c in res["checks"])


def test_verify_stalled_descent_is_skipped(tmp_path, capsys):
    src = write(tmp_path, "ray.json", {"coefficients": [3, -3, 0, 1]})
    code, out = run(["verify", src], capsys)
    assert code == 0
    by_name = {c["name"]: c["status"] for c in json.loads(out)["results"][0]["checks"]}
    assert by_name["chain_merge_oracle"] == "skipped"
    assert by_name["chain_monotone"] == "pass" and by_name["covering_degree"] == "pass"


def test_verify_dir(tmp_path, capsys):
    write(tmp_path, "a.json", {"coefficients": [-1, 0, 1]})
    write(tmp_path, "b.json", {"coefficients": [0, 0, 1]})
    code, out = run(["verify", "--dir", str(tmp_path)], capsys)
    results = json.loads(out)["results"]
    assert [r["status"] for r in results] == ["pass", "error"]
    assert code == 2
    assert run(["verify", "--dir", str(tmp_path / "nope")], capsys)[0] == 4


def test_module_entry_point_stdin():
    proc = subprocess.run([sys.executable, "-m", "branched_annulus", "analyze", "-"],
                          input=json.dumps({"coefficients": [-1, 0, 1]}), capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["monodromy"]["generators"][0]["cycles"] == "(1,2)"
