import io
import json

import pytest

from dynideal import cli
from dynideal.checks import CHECKS
from dynideal.errors import ParseError, PreconditionError
from dynideal.scenarios import (
    BUILTIN,
    digest,
    get_scenario,
    load_scenario,
    report_text,
    report_verify,
    scenario_list,
    scenario_run,
    write_report,
)


def test_catalog_is_complete_and_well_formed():
    names = scenario_list()
    assert len(names) == len(set(names)) == len(BUILTIN)
    for required in ("bounded-cofinal-default", "back-and-forth-matching", "cb-rank-obstruction",
                     "simplicity-finite-sym", "abelian-grid", "quad-selector-no-canonical"):
        assert required in names
    for s in BUILTIN:
        for c in s["checks"]:
            assert c["kind"] in CHECKS and c["anchor"] and c["claim"]
    with pytest.raises(PreconditionError):
        get_scenario("nope")


def test_default_scenario_passes_and_verifies(tmp_path):
    report = scenario_run("bounded-cofinal-default", budget=3)
    assert report["summary"]["failed"] == 0
    assert report_verify(report)
    path = write_report(report, tmp_path / "r.json")
    assert report_verify(path)


def test_tampering_is_detected(tmp_path):
    report = scenario_run("back-and-forth-matching")
    text = report_text(report)
    target = '"-1/1"'
    assert target in text
    bad = tmp_path / "bad.json"
    bad.write_text(text.replace(target, '"-2/1"', 1))
    assert not report_verify(bad)
    # a recomputed digest does not rescue a broken witness
    data = json.loads(bad.read_text())
    data["digest"] = digest(data)
    assert not report_verify(data)
    (tmp_path / "junk.json").write_text("{not json")
    assert not report_verify(tmp_path / "junk.json")


def test_runs_are_byte_identical():
    a = report_text(scenario_run("stratified-window", budget=2))
    b = report_text(scenario_run("stratified-window", budget=2))
    assert a == b
    c = report_text(scenario_run("stratified-window", seed=99, budget=2))
    assert c != a


def test_overrides_apply():
    r = scenario_run("dc-game-interleave", horizon=3, budget=1)
    (check,) = r["checks"]
    assert check["params"]["horizon"] == 3 and check["params"]["games"] == 1
    assert len(check["certificate"]["games"][0]["transcript"]["rounds"]) == 3


def test_scenario_file_errors(tmp_path):
    p = tmp_path / "s.json"
    p.write_text('{\n  "name": "x",\n  "checks": [,]\n}')
    with pytest.raises(ParseError, match="line 3, column"):
        load_scenario(p)
    p.write_text(json.dumps({"name": "x", "checks": [{"id": "a", "kind": "teleport"}]}))
    with pytest.raises(ParseError, match="unknown kind"):
        load_scenario(p)


def test_failed_check_is_reported_not_raised(tmp_path):
    scn = {"name": "broken", "seed": 1, "checks": [
        {"id": "bad", "claim": "", "anchor": "", "kind": "stratified",
         "params": {"N": 20, "thresholds": [3, 5], "trials": 2}}]}
    r = scenario_run(scn)
    assert r["summary"]["failed"] == 1 and "error" in r["checks"][0]["certificate"]
    assert not report_verify(r)


def _run_cli(argv):
    out = io.StringIO()
    code = cli.main(argv, out=out)
    return code, out.getvalue()


def test_cli_list_run_verify(tmp_path, monkeypatch):
    monkeypatch.setenv("DYNIDEAL_REPORT_DIR", str(tmp_path))
    code, out = _run_cli(["scenario", "list"])
    assert code == 0 and "fraisse-pure-set" in out
    code, out = _run_cli(["scenario", "run", "back-and-forth-matching"])
    assert code == 0 and "PASS" in out
    path = tmp_path / "back-and-forth-matching.json"
    code, out = _run_cli(["report", "verify", str(path)])
    assert code == 0 and "verified" in out
    path.write_text(path.read_text().replace('"-1/1"', '"-2/1"', 1))
    code, out = _run_cli(["report", "verify", str(path)])
    assert code == 1 and "NOT verified" in out


def test_cli_scenario_file_and_failure_exit(tmp_path):
    scn = tmp_path / "mine.json"
    scn.write_text(json.dumps({"name": "mine", "seed": 0, "checks": [
        {"id": "m", "claim": "wrong expectation", "anchor": "matching", "kind": "matching",
         "params": {"cases": [{"d0": ["1"], "d1": ["2"], "expect": "SizeMismatch"}]}}]}))
    code, out = _run_cli(["scenario", "run", str(scn), "--report", str(tmp_path / "out.json")])
    assert code == 1 and "FAIL" in out
    code, out = _run_cli(["scenario", "run", "no-such-scenario"])
    assert code == 2


def test_cli_game():
    code, out = _run_cli(["game", "run", "BoundedQ", "random", "cofinal", "--horizon", "4"])
    assert code == 0
    data = json.loads(out)
    assert data["verdict"]["outcome_in_ideal"] and len(data["transcript"]["rounds"]) == 4
    code, out = _run_cli(["game", "run", "FiniteSym", "stratified", "random",
                          "--param", "N=10", "--param", "k=11", "--thresholds", "1,2,3"])
    assert code == 0
    code, _ = _run_cli(["game", "run", "FiniteSym", "stratified", "random"])
    assert code == 2
