import json

import pytest

from unfurling.cli import EXIT_FAIL, EXIT_FIELD, EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, run
from unfurling.fixtures import get_fixture
from unfurling.report import Report, emit_report
from unfurling.unfurl import build_unfurled


def run_json(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip().startswith("{") else out)


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def test_empty_report_shape():
    assert json.loads(emit_report(Report())) == {"checks": [], "pass": True}


def test_fixtures_command_emits_expected_graph(capsys):
    code, doc = run_json(capsys, "fixtures", "sp4")
    assert code == EXIT_OK
    assert set(doc) == {"datum", "pack", "spectra", "expected_graph"}
    assert len(doc["expected_graph"]["edges"]) == 2


def test_fixture_files_roundtrip_through_loaders(tmp_path, capsys):
    assert run(["fixtures", "sp4", "--out-dir", str(tmp_path)]) == EXIT_OK
    capsys.readouterr()
    code, doc = run_json(
        capsys, "unfurl", "--datum", str(tmp_path / "datum.json"), "--pack", str(tmp_path / "pack.json"), "--spectra", str(tmp_path / "spectra.json")
    )
    assert code == EXIT_OK
    assert doc["pass"]
    assert doc["graph"] == json.loads((tmp_path / "expected_graph.json").read_text())


def test_verify_klr_geometric(capsys):
    code, doc = run_json(capsys, "verify-klr", "--fixture", "a2-geometric", "-n", "2", "--deg", "4", "--seed", "5")
    assert code == EXIT_OK
    assert doc["pass"] and doc["seed"] == 5


def test_unfurl_dot_output(capsys):
    code = run(["unfurl", "--fixture", "cycle3-zeta6", "--dot", "-"])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert out.startswith("digraph")
    assert out.count("->") == 6


def test_incomplete_spectra_exit_code(capsys):
    code = run(["unfurl", "--fixture", "sp4-partial"])
    captured = capsys.readouterr()
    assert code == EXIT_PRECONDITION
    assert json.loads(captured.out)["checks"][0]["witnesses"]


def test_no_stabilization_exit_code(capsys):
    code, doc = run_json(capsys, "complete-spectra", "--fixture", "cycle3-q2", "--max-iter", "10")
    assert code == EXIT_PRECONDITION
    assert doc["pass"] is False


def test_complete_spectra(capsys):
    code, doc = run_json(capsys, "complete-spectra", "--fixture", "sp4-partial")
    assert code == EXIT_OK
    assert len(doc["spectra"]["1"]) == 2


def test_furl_check_and_sigma(capsys):
    assert run_json(capsys, "furl-check", "--fixture", "sp4")[0] == EXIT_OK
    code, doc = run_json(capsys, "sigma-check", "--fixture", "g2-roots-of-unity", "-d", "3")
    assert code == EXIT_OK and doc["pass"]


def test_furl_check_failure_exit_code(tmp_path, capsys):
    fx = get_fixture("sp4")
    f = build_unfurled(fx.datum, fx.pack, fx.spectra).projection
    domain = f.domain.to_json()
    # a wrong value on one edge, with absolute data dropped so the graph stays consistent
    domain["edges"][0]["eta"] = 3
    for e in domain["edges"]:
        e["m"] = None
    domain.pop("d", None)
    args = ["--domain", write(tmp_path, "x.json", domain), "--codomain", write(tmp_path, "y.json", f.codomain.to_json())]
    args += ["--map", write(tmp_path, "f.json", f.to_json())]
    code, doc = run_json(capsys, "furl-check", *args)
    assert code == EXIT_FAIL
    assert not doc["pass"]


def test_validate_params_failure(tmp_path, capsys):
    fx = get_fixture("sp4")
    pack = fx.pack.to_json()
    pack["polys"][0]["monomials"].append({"a": 1, "b": 0, "coeff": "1"})
    code, doc = run_json(capsys, "validate-params", "--datum", write(tmp_path, "d.json", fx.datum.to_json()), "--pack", write(tmp_path, "p.json", pack))
    assert code == EXIT_FAIL
    assert not doc["pass"]


def test_verify_nu_sampled(capsys):
    code, doc = run_json(capsys, "verify-nu", "--fixture", "single-vertex", "--components", "sample:2", "--precision", "2")
    assert code == EXIT_OK
    assert doc["certified_precision"] >= 2


def test_verify_nu_literal_fails(capsys):
    code, _doc = run_json(capsys, "verify-nu", "--fixture", "single-vertex", "--variant", "literal")
    assert code == EXIT_FAIL


def test_field_error_exit_code(tmp_path, capsys):
    fx = get_fixture("g2-roots-of-unity")
    pack = fx.pack.to_json()
    pack["field"] = {"kind": "rationals"}
    for entry in pack["polys"]:
        entry.pop("fine_roots", None)
    spectra = {"1": [{"u": "1", "root": "1"}], "2": [{"u": "1", "root": "1"}]}
    args = ["--datum", write(tmp_path, "d.json", fx.datum.to_json()), "--pack", write(tmp_path, "p.json", pack)]
    code = run(["unfurl", *args, "--spectra", write(tmp_path, "s.json", spectra)])
    capsys.readouterr()
    assert code == EXIT_FIELD


@pytest.mark.parametrize(
    "argv",
    [["bogus"], ["unfurl"], ["verify-klr", "--fixture", "sp4", "--labels", "1,x"], ["unfurl", "--datum", "/nonexistent.json", "--pack", "x", "--spectra", "y"]],
)
def test_parse_errors(argv, capsys):
    assert run(argv) == EXIT_PARSE
    capsys.readouterr()


def test_parallel_workers_match_serial(monkeypatch, capsys):
    _, serial = run_json(capsys, "verify-klr", "--fixture", "sp4", "-n", "3", "--deg", "1")
    monkeypatch.setenv("UNFURLING_WORKERS", "2")
    _, parallel = run_json(capsys, "verify-klr", "--fixture", "sp4", "-n", "3", "--deg", "1")
    assert serial == parallel
