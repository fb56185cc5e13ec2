import hashlib
import io
import json
import math
import subprocess
import sys

import pytest

from sheafdb import cli, models
from sheafdb.errors import MalformedInput
from sheafdb.gluing import classify
from sheafdb.interchange import parse_model, parse_schema, serialize_model


def run(*argv, stdin=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = cli.run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return str(p)
    return write


def test_classify_bell(files):
    code, text, _ = run("generate", "bell")
    path = files("bell.json", text)
    code, out, _ = run("classify", path)
    assert code == 0
    report = json.loads(out)
    assert report["command"] == "classify"
    assert report["input"]["sha256"] == hashlib.sha256(text.encode()).hexdigest()
    res = report["result"]
    assert res["class"] == "probabilistically-contextual"
    assert res["hidden_variable"]["feasible"] is False
    assert res["hidden_variable"]["certificate"]["nonzero"]
    assert res["support_universal_relation"]["exists"] is True
    assert len(res["support_universal_relation"]["relation"]) > 0


def test_classify_ghz4_and_hardy(files):
    _, text, _ = run("generate", "ghz", "--n", "4")
    res = json.loads(run("classify", files("g.json", text))[1])["result"]
    assert res["class"] == "strongly-contextual" and res["global_assignment"] is None
    _, text, _ = run("generate", "hardy")
    res = json.loads(run("classify", files("h.json", text))[1])["result"]
    assert res["class"] == "logically-contextual"
    assert res["global_assignment"] == {"a": "1", "a'": "0", "b": "1", "b'": "0"}


def test_schema_ks18(files):
    _, text, _ = run("generate", "ks18")
    res = json.loads(run("schema", files("ks.json", text))[1])["result"]
    assert res["parity"] == {"result": "NoGlobalSection", "divisor": 2, "contexts": 9}
    assert res["ks"] == {"result": "NoSection"}
    assert res["acyclicity"]["acyclic"] is False


def test_schema_flags_select_analyses(files):
    _, text, _ = run("generate", "chain")
    res = json.loads(run("schema", files("c.json", text), "--acyclicity")[1])["result"]
    assert list(res) == ["acyclicity"]
    assert res["acyclicity"]["acyclic"] is True and len(res["acyclicity"]["steps"]) == 6


def test_check_glue_and_dump(files):
    path = files("tri.json", serialize_model(models.triangle_anticorrelation_model()))
    assert json.loads(run("check", path)[1])["result"]["compatible"] is True
    glue = json.loads(run("glue", path)[1])["result"]
    assert glue["kind"] == "hidden-variable" and glue["feasible"] is False
    code, dump, _ = run("dump-system", path)
    assert code == 0
    lines = dump.splitlines()
    assert len(lines) == 12 and all(" | " in line for line in lines)


def test_stdin_input(monkeypatch):
    _, text, _ = run("generate", "hardy")
    code, out, _ = run("glue", "-", stdin=text, monkeypatch=monkeypatch)
    assert code == 0
    assert json.loads(out)["result"] == {"kind": "universal-relation", "exists": False}


def test_quantum_commands():
    code, out, _ = run("quantum", "bell", "--rationalize", "8")
    assert code == 0 and parse_model(out) == models.bell_model()
    code, out, _ = run("quantum", "ghz", "--n", "3")
    assert parse_model(out).support() == models.ghz_model(3)
    code, out, _ = run("quantum", "bell", "--angles", "a=0,a'=pi/3", "b=0,b'=pi/3",
                       "--rationalize", "8")
    assert parse_model(out) == models.bell_model()


def test_sample_is_seeded(files):
    _, text, _ = run("generate", "chain")
    path = files("chain.json", text)
    first = run("sample", path, "--seed", "3")[1]
    assert first == run("sample", path, "--seed", "3")[1]
    assert parse_model(first).schema == parse_schema(text)


def test_exit_codes(files):
    code, _, err = run("classify", files("bad.json", "{oops"))
    assert code == 2 and err
    assert run("classify", "/nonexistent/file.json")[0] == 2
    _, text, _ = run("generate", "triangle")
    assert run("sample", files("t.json", text), "--seed", "1")[0] == 2
    _, text, _ = run("generate", "bell")
    assert run("--cap", "10", "classify", files("b.json", text))[0] == 3
    assert run("quantum", "bell", "--rationalize", "3")[0] == 2
    assert run("quantum", "ghz", "--n", "3", "--angles", "a=0")[0] == 2


def test_parse_angle():
    assert cli.parse_angle("pi/3") == pytest.approx(math.pi / 3)
    assert cli.parse_angle("-pi/3") == pytest.approx(-math.pi / 3)
    assert cli.parse_angle("2*pi/3") == pytest.approx(2 * math.pi / 3)
    assert cli.parse_angle("0.25") == 0.25
    with pytest.raises(MalformedInput):
        cli.parse_angle("pie")


def test_generate_pipe_matches_in_memory():
    gen = subprocess.run([sys.executable, "-m", "sheafdb", "generate", "ghz", "--n", "3"],
                         capture_output=True, text=True, check=True)
    cls = subprocess.run([sys.executable, "-m", "sheafdb", "classify", "-"], input=gen.stdout,
                         capture_output=True, text=True, check=True)
    assert json.loads(cls.stdout)["result"]["class"] == classify(models.ghz_model(3)).cls.label
    for name, model in (("bell", models.bell_model()), ("hardy", models.hardy_model())):
        _, text, _ = run("generate", name)
        assert parse_model(text) == model
