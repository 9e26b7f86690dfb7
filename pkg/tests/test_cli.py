import io
import json
from pathlib import Path

import jsonschema

from turingtest.cli import main
from turingtest.config import Config, load_config

SCHEMAS = Path(__file__).resolve().parents[1] / "docs" / "schemas"


def schema(name):
    return json.loads((SCHEMAS / f"{name}.schema.json").read_text())


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), buf)
    return code, buf.getvalue()


def test_validate_shipped_file():
    code, out = run("validate", "zoo/echo.tm")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, schema("validate"))
    assert doc["ok"] and doc["config_hash"] == Config().hash


def test_validate_reports_violations(tmp_path):
    bad = tmp_path / "bad.tm"
    bad.write_text("states: q0 f\ninitial: q0\nfinal: f\n\nq0 _ _ _ -> f _ S S S a\nq0 _ _ _ -> q0 _ S S S b\n")
    code, out = run("validate", str(bad))
    assert code == 1 and not json.loads(out)["ok"]


def test_run_examples():
    code, out = run("run", "zoo/echo.tm", "--q", "ab")
    doc = json.loads(out)
    jsonschema.validate(doc, schema("run"))
    assert code == 0 and doc["outcomes"][0]["answer"] == "ab"
    code, out = run("run", "zoo/loop.tm", "--q", "", "--budget", "100")
    assert code == 0 and json.loads(out)["result"] == "DivergedAt(1)"


def test_test_reports_validate_against_the_schema():
    for spec in ("diag:time", "dumb:zoo/counter.tm", "pi", "comm", "prob:3,0.5", "diag:mem:1,0,2"):
        code, out = run("test", "--tester", spec, "--subject", "zoo/const0.tm", "--both")
        assert code == 0, spec
        jsonschema.validate(json.loads(out), schema("test_report"))
    code, out = run("test", "--tester", "diag:time", "--subject", "zoo/echo.tm", "--orientation", "right")
    doc = json.loads(out)
    jsonschema.validate(doc, schema("test_report"))
    assert [t["orientation"] for t in doc["transcripts"]] == ["right"]


def test_diag_time_catches_echo_t5():
    _, out = run("test", "--tester", "diag:time", "--subject", "zoo/echo_t5.tm", "--both")
    assert json.loads(out)["verdict"]["fails_test_ordinary"] is True


def test_sp_machine_passes_its_own_dumb_tester():
    _, out = run("test", "--tester", "dumb:zoo/counter.tm", "--subject", "zoo/counter.tm", "--both")
    v = json.loads(out)["verdict"]
    assert not v["fails_test_ordinary"] and not v["fails_test_strict"]


def test_output_file_and_determinism(tmp_path):
    args = ["test", "--tester", "prob:3,0.5", "--subject", "zoo/counter.tm", "--seed", "9"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(*args, "--out", str(a))[0] == 0
    assert run(*args, "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert run(*args)[1] == a.read_text()


def test_enumerate_universal():
    code, out = run("enumerate", "--kind", "universal", "-N", "10")
    lines = [json.loads(x) for x in out.splitlines()]
    for x in lines:
        jsonschema.validate(x, schema("enumerate_line"))
    encs = [x["encoding"] for x in lines[1:]]
    assert code == 0 and len(encs) == 10 and encs[0] == "aaaaaa"
    assert encs == sorted(encs, key=lambda w: (len(w), w))


def test_enumerate_mem():
    code, out = run("enumerate", "--kind", "mem", "--s", "1", "--d", "0", "--w", "2")
    lines = [json.loads(x) for x in out.splitlines()]
    for x in lines:
        jsonschema.validate(x, schema("enumerate_line"))
    assert lines[0]["N"] == 2 and [x["reason"] for x in lines[1:]] == ["survive", "no-final"]


def test_prob_report():
    code, out = run("prob", "--subject", "zoo/const1.tm", "--m", "5", "--p0", "0.5",
                    "--trials", "2000", "--seed", "7")
    doc = json.loads(out)
    jsonschema.validate(doc, schema("prob_report"))
    assert code == 0 and doc["bound"] == 0.0625 and doc["trials"] == 2000


def test_exit_codes(tmp_path):
    assert run("test", "--tester", "nope", "--subject", "zoo/echo.tm")[0] == 2
    assert run("run", "zoo/missing.tm")[0] == 2
    assert run("enumerate", "--kind", "universal")[0] == 2
    assert run("run", "zoo/echo.tm", "--q", "xy")[0] == 2
    assert run("frobnicate")[0] == 2
    cfg = tmp_path / "small.json"
    cfg.write_text(json.dumps({"mem_max_classes": 100}))
    assert run("--config", str(cfg), "enumerate", "--kind", "mem", "--s", "2", "--d", "1", "--w", "3")[0] == 3
    assert run("--config", str(cfg), "test", "--tester", "diag:mem:2,1,3", "--subject", "zoo/echo.tm")[0] == 3


def test_config_from_environment(tmp_path, monkeypatch):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"budget": 50, "seed": 3}))
    monkeypatch.setenv("TURINGTEST_CONFIG", str(cfg))
    got = load_config()
    assert got.budget == 50 and got.seed == 3 and got.hash != Config().hash
    _, out = run("run", "zoo/echo.tm")
    assert json.loads(out)["budget"] == 50
    cfg.write_text(json.dumps({"bogus": 1}))
    assert run("run", "zoo/echo.tm")[0] == 2


def test_accept_single_criterion():
    code, out = run("accept", "--criterion", "2")
    doc = json.loads(out)
    assert code == 0 and doc["criteria"][0]["passed"]
