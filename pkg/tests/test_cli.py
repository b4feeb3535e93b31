import json
import os
import subprocess
import sys

import pytest

from volkov import cli, suites


def run(args, env=None):
    e = dict(os.environ)
    e.update(env or {})
    return subprocess.run([sys.executable, "-m", "volkov.cli", *args], capture_output=True, text=True, env=e)


@pytest.fixture
def cfg(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("samples.random = 200\nsamples.points = 20\n")
    return p


def strip_times(doc):
    for r in doc["reports"]:
        r.pop("wall_time")
    return doc


def test_full_run_passes(cfg, tmp_path, capsys):
    out = tmp_path / "report.json"
    code = cli.main(["check", "--config", str(cfg), "--out", str(out), "--csv", str(tmp_path / "csv")])
    text = capsys.readouterr().out
    assert code == 0, text
    doc = json.loads(out.read_text())
    assert len(doc["reports"]) == len(suites.registered())
    assert doc["summary"]["failed"] == 0
    assert len(text.splitlines()) == len(suites.registered()) + 2
    checks = (tmp_path / "csv" / "checks.csv").read_text().splitlines()
    assert len(checks) == len(suites.registered()) + 1
    appendix = (tmp_path / "csv" / "appendix.csv").read_text().splitlines()
    assert appendix[0] == "n,kappa1,kappa2,sigma,value,target,error" and len(appendix) > 5


def test_deterministic(cfg, tmp_path):
    out = tmp_path / "r.json"
    docs = []
    for _ in range(2):
        p = run(["check", "--config", str(cfg), "--suite", "spinors", "--suite", "appendix",
                 "--out", str(out), "--quiet"])
        assert p.returncode == 0, p.stderr
        docs.append(strip_times(json.loads(out.read_text())))
    assert docs[0] == docs[1]


def test_seed_changes_samples(cfg, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    cli.main(["check", "--config", str(cfg), "--suite", "spinors", "--out", str(a), "--quiet"])
    cli.main(["check", "--config", str(cfg), "--suite", "spinors", "--out", str(b), "--quiet", "--seed", "5"])
    ea = [r["error"] for r in json.loads(a.read_text())["reports"]]
    eb = [r["error"] for r in json.loads(b.read_text())["reports"]]
    assert ea != eb


def test_suite_selection_independent_of_others(cfg, tmp_path):
    # a check's samples depend on (seed, suite, check) only
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    cli.main(["check", "--config", str(cfg), "--suite", "spinors", "--out", str(a), "--quiet"])
    cli.main(["check", "--config", str(cfg), "--suite", "algebra", "--suite", "spinors", "--out", str(b), "--quiet"])
    ra = strip_times(json.loads(a.read_text()))["reports"]
    rb = [r for r in strip_times(json.loads(b.read_text()))["reports"] if r["suite"] == "spinors"]
    assert ra == rb


def test_failing_check_exit_1(tmp_path, capsys):
    p = tmp_path / "tight.cfg"
    p.write_text("suites = spinors\ntolerance.algebra = 0\nsamples.random = 50\n")
    out = tmp_path / "r.json"
    assert cli.main(["check", "--config", str(p), "--out", str(out)]) == 1
    assert "FAIL" in capsys.readouterr().out
    assert out.exists()
    assert cli.main(["summarize", "--in", str(out)]) == 1


def test_summarize_round_trip(cfg, tmp_path, capsys):
    out = tmp_path / "r.json"
    cli.main(["check", "--config", str(cfg), "--suite", "algebra", "--out", str(out)])
    first = capsys.readouterr().out
    assert cli.main(["summarize", "--in", str(out)]) == 0
    assert capsys.readouterr().out == first


@pytest.mark.parametrize("text,fragment", [
    ("field.shape = square\n", "run.cfg:1"),
    ("seed = 1\nbogus = 2\n", "run.cfg:2: unknown key"),
])
def test_config_errors_exit_2(tmp_path, text, fragment):
    p = tmp_path / "run.cfg"
    p.write_text(text)
    out = tmp_path / "r.json"
    r = run(["check", "--config", str(p), "--out", str(out)])
    assert r.returncode == 2 and fragment in r.stderr
    assert not out.exists()


def test_env_error_exit_2(cfg, tmp_path):
    out = tmp_path / "r.json"
    r = run(["check", "--config", str(cfg), "--out", str(out)], env={"VOLKOV_SEED": "abc"})
    assert r.returncode == 2 and "VOLKOV_SEED" in r.stderr and not out.exists()


def test_env_suite_override(cfg, tmp_path):
    out = tmp_path / "r.json"
    r = run(["check", "--config", str(cfg), "--out", str(out), "--quiet"], env={"VOLKOV_SUITES": "algebra"})
    assert r.returncode == 0
    assert len(json.loads(out.read_text())["reports"]) == len(suites.registered(["algebra"]))


def test_usage_errors_exit_2(tmp_path):
    assert run(["check"]).returncode == 2
    assert run(["check", "--config", str(tmp_path / "missing.cfg")]).returncode == 2
    assert run(["check", "--config", "x", "--suite", "bogus"]).returncode == 2
    assert run(["summarize", "--in", str(tmp_path / "missing.json")]).returncode == 2
    assert run([]).returncode == 2


def test_runtime_error_exit_2(cfg, tmp_path, monkeypatch, capsys):
    def boom(config):
        raise RuntimeError("kaboom")
    monkeypatch.setattr(suites, "run", boom)
    out = tmp_path / "r.json"
    assert cli.main(["check", "--config", str(cfg), "--out", str(out)]) == 2
    assert "kaboom" in capsys.readouterr().err and not out.exists()


def test_registry_anchors_unique():
    names = suites.registered()
    assert len(names) == len(set(names))
    for entries in suites.REGISTRY.values():
        assert all(anchor for _, anchor, _ in entries)
