import json
import subprocess
import sys

import pytest

from qsymalg.cli import EXIT_DEPENDENCY, EXIT_FAIL, EXIT_PARSE, EXIT_PASS, JobSpec, dump_payload, main, run

XX_SPEC = {"generators": ["x", "y"], "relations": [[{"coefficient": "1", "word": ["x", "x"]}]]}
PAYLOAD_KEYS = {"schema_version", "target", "generators", "max_degree", "order", "convention_header",
                "suites", "failed_suites", "exit_status"}


def call(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def test_pbw_on_quantum_plane(capsys):
    code, out, _ = call(capsys, "pbw", "--target", "quantum-plane")
    assert code == EXIT_PASS
    doc = json.loads(out)
    assert set(doc) == {"payload", "meta"}
    payload = doc["payload"]
    assert set(payload) == PAYLOAD_KEYS
    assert payload["schema_version"] == "1.0" and payload["max_degree"] == 8
    assert payload["suites"]["pbw"]["pass"] and payload["failed_suites"] == []


def test_run_with_dependencies(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, summary, _ = call(capsys, "run", "--target", "quantum-matrices(2,2)", "--suites", "pbw,koszul,bk",
                            "--max-degree", "4", "--out", str(out))
    assert code == EXIT_PASS
    assert "koszul" in summary and "PASS" in summary
    payload = json.loads(out.read_text())["payload"]
    assert payload["suites"]["bk"]["searched"] is True
    assert payload["suites"]["koszul"]["dual_dims"] == [1, 4, 6, 4, 1, 0]


def test_failure_reports_witness(capsys, tmp_path):
    path = write(tmp_path, "xx.json", XX_SPEC)
    code, out, _ = call(capsys, "pbw", "--target", path)
    assert code == EXIT_FAIL
    pbw = json.loads(out)["payload"]["suites"]["pbw"]
    assert not pbw["pass"] and pbw["failing_degree"] == 2 and pbw["witness"]


def test_weyl_algebra_fails_honestly(capsys):
    code, out, _ = call(capsys, "all", "--target", "weyl-q", "--max-degree", "3")
    assert code == EXIT_FAIL
    payload = json.loads(out)["payload"]
    assert payload["suites"]["bk"]["status"] == "inconclusive"
    assert "bk" in payload["failed_suites"]


@pytest.mark.parametrize("argv", [
    ["pbw", "--target", "nope"],
    ["run", "--target", "quantum-plane", "--suites", "pbw,frobnicate"],
    ["pbw", "--target", "quantum-plane", "--order", "x,z"],
    ["pbw", "--target", "quantum-plane", "--max-degree", "1"],
    ["equivariance", "--target", "quantum-plane", "--action", "sln-natural(3)"],
])
def test_parse_errors(capsys, argv):
    code, _, err = call(capsys, *argv)
    assert code == EXIT_PARSE and "parse error" in err


def test_bad_json_reports_location(capsys, tmp_path):
    path = write(tmp_path, "bad.json", '{"generators": ["x",\n  ]}')
    code, _, err = call(capsys, "pbw", "--target", path)
    assert code == EXIT_PARSE
    assert "bad.json:2:" in err


def test_bad_relation_reports_location(capsys, tmp_path):
    spec = {"generators": ["x"], "relations": [[{"coefficient": "1", "word": ["x", "w"]}]]}
    code, _, err = call(capsys, "pbw", "--target", write(tmp_path, "rel.json", spec))
    assert code == EXIT_PARSE and "relations[0][0].word" in err


def test_dependency_errors(capsys, tmp_path):
    code, _, err = call(capsys, "run", "--target", "quantum-plane", "--suites", "koszul")
    assert code == EXIT_DEPENDENCY and "requires suite pbw" in err
    code, _, _ = call(capsys, "equivariance", "--target", write(tmp_path, "xx.json", XX_SPEC))
    assert code == EXIT_DEPENDENCY
    code, _, _ = call(capsys, "pbw", "--target", "oq-sl2")
    assert code == EXIT_DEPENDENCY


def test_spec_file_with_action(capsys, tmp_path):
    spec = {"algebra": {"generators": ["x", "y"],
                        "relations": [[{"coefficient": "1", "word": "y x"}, {"coefficient": "-q", "word": "x y"}]]},
            "action": "sl2-natural"}
    code, out, _ = call(capsys, "kzero", "--target", write(tmp_path, "qp.json", spec), "--max-degree", "3")
    assert code == EXIT_PASS
    suites = json.loads(out)["payload"]["suites"]
    assert list(suites) == ["pbw", "equivariance", "kzero"]


def test_homog_target(capsys):
    code, out, _ = call(capsys, "homog", "--target", "oq-sl2")
    assert code == EXIT_PASS
    homog = json.loads(out)["payload"]["suites"]["homog"]
    assert homog["pass"] and homog["invariant_dims"][:3] == [1, 1, 4]


def test_non_confluent_order_falls_back_for_bases(capsys):
    code, out, _ = call(capsys, "run", "--target", "quantum-matrices(2,2)", "--suites", "pbw,koszul",
                        "--max-degree", "3", "--order", "x11,x22,x21,x12")
    assert code == EXIT_PASS
    payload = json.loads(out)["payload"]
    assert payload["order"] == ["x11", "x22", "x21", "x12"]
    assert payload["suites"]["koszul"]["basis_order"] == ["x11", "x12", "x21", "x22"]


def test_payload_is_deterministic():
    job = JobSpec("so-even(2)", ["pbw", "koszul", "bk"], max_degree=3)
    a, ca = run(job)
    b, cb = run(job)
    assert ca == cb == EXIT_PASS
    assert dump_payload(a) == dump_payload(b)


def test_module_entry_point(tmp_path):
    out = tmp_path / "r.json"
    proc = subprocess.run([sys.executable, "-m", "qsymalg.cli", "bk", "--target", "quantum-plane(3)",
                           "--out", str(out)], capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0, proc.stderr
    assert json.loads(out.read_text())["payload"]["suites"]["bk"]["status"] == "certified"
