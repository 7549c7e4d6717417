import io
import json
import subprocess
import sys

import pytest

from dblquartic import cli
from dblquartic.discriminant import random_instance


def run(*argv):
    out = io.StringIO()
    code = cli.run(list(argv), out)
    return code, out.getvalue()


@pytest.fixture(autouse=True)
def no_env_config(monkeypatch):
    monkeypatch.delenv(cli.CONFIG_ENV, raising=False)


def test_verify_all_passes_with_axioms():
    code, text = run("verify-all", "--grid", "2")
    assert code == 0
    last = text.strip().splitlines()[-1]
    assert "fail: 0" in last and "axiom: 4" in last


@pytest.mark.parametrize("cmd", ["chow", "cohomology", "mutate", "mutate-special", "discriminant", "defect",
                                 "localgeom"])
def test_each_subcommand_succeeds(cmd):
    code, _ = run(cmd, "--grid", "2")
    assert code == 0


def test_jsonl_is_deterministic_and_sorted():
    _, first = run("chow", "--format", "jsonl")
    _, second = run("chow", "--format", "jsonl")
    assert first == second
    records = [json.loads(line) for line in first.splitlines()]
    ids = [r["id"] for r in records]
    assert ids == sorted(ids)
    assert all(r["millis"] == 0 for r in records)
    assert {"id", "citation", "expected", "computed", "provenance", "status", "millis"} <= set(records[0])


def test_json_document_has_summary():
    code, text = run("defect", "--format", "json")
    doc = json.loads(text)
    assert code == 0
    assert doc["summary"]["fail"] == 0
    assert doc["summary"]["axiom"] == 1
    assert len(doc["records"]) == sum(doc["summary"].values())


def test_timing_fills_millis():
    _, text = run("localgeom", "--format", "jsonl", "--timing")
    assert all("millis" in json.loads(line) for line in text.splitlines())


def test_single_mutation_step():
    code, text = run("mutate", "--step", "3", "--format", "jsonl")
    assert code == 0
    (rec,) = [json.loads(line) for line in text.splitlines()]
    assert rec["id"] == "mutation.replay-step-3"
    assert rec["computed"] == "certified"
    assert rec["detail"]["step"] == 3


@pytest.mark.parametrize("argv", [
    ("mutate", "--step", "9"),
    ("discriminant", "--prime", "17"),
    ("discriminant", "--prime", "9"),
    ("discriminant", "--instance", "/nonexistent/file"),
    ("chow", "--grid", "-1"),
    ("chow", "--config", "/nonexistent/config"),
    ("no-such-command",),
    ("chow", "--format", "xml"),
    (),
])
def test_usage_errors_exit_two(argv):
    code, _ = run(*argv)
    assert code == 2


def test_failing_instance_exits_one(tmp_path):
    inst = random_instance(7, 0)
    # a degenerate binary form raises the corank at the base points
    text = inst.dumps()
    lines = [l if not l.startswith("b11=") else "b11=0" for l in text.splitlines()]
    lines = [l if not l.startswith("b12=") else "b12=0" for l in lines]
    path = tmp_path / "inst.txt"
    path.write_text("\n".join(lines) + "\n")
    code, out = run("discriminant", "--instance", str(path), "--format", "json")
    doc = json.loads(out)
    assert code == 1
    assert doc["summary"]["fail"] >= 1


def test_instance_file_is_used(tmp_path):
    path = tmp_path / "inst.txt"
    random_instance(11, 1).save(path)
    code, text = run("discriminant", "--instance", str(path), "--format", "jsonl")
    assert code == 0
    assert "p=11, seed=1" in text


def test_config_file_and_environment(tmp_path, monkeypatch):
    cfg = tmp_path / "cfg.ini"
    cfg.write_text("prime = 11\nseed = 2\n")
    code, text = run("discriminant", "--config", str(cfg), "--format", "jsonl")
    assert code == 0 and "p=11, seed=2" in text
    monkeypatch.setenv(cli.CONFIG_ENV, str(cfg))
    code, text = run("discriminant", "--format", "jsonl")
    assert code == 0 and "p=11, seed=2" in text
    code, text = run("discriminant", "--prime", "13", "--format", "jsonl")
    assert "p=13, seed=2" in text


@pytest.mark.parametrize("body", ["colour = red\n", "prime = seven\n", "no equals sign here\n"])
def test_bad_config_is_usage_error(tmp_path, body):
    cfg = tmp_path / "cfg.ini"
    cfg.write_text(body)
    code, _ = run("chow", "--config", str(cfg))
    assert code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "dblquartic", "defect", "--format", "jsonl"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert all(json.loads(line)["status"] != "fail" for line in proc.stdout.splitlines())
