from __future__ import annotations

import json
import subprocess
import sys

import pytest

from catalytic.cli import main, read_coefficients
from catalytic.errors import NoGuess, TamperDetected
from catalytic.pipeline import (
    EXIT_CERTIFIED,
    EXIT_INCONCLUSIVE,
    EXIT_INTERNAL,
    EXIT_REFUTED,
    EXIT_USAGE,
    PipelineConfig,
    exit_code_for,
    recheck,
    run_pipeline,
)
from conftest import CORPUS_FILES, ROOT, corpus_path, pipeline_run
from oracles import catalan


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_corpus_gate():
    assert len(CORPUS_FILES) >= 6
    for path in CORPUS_FILES:
        result = pipeline_run(path.stem)
        assert result.verdict == "certified", path.stem
        assert result.exit_code == EXIT_CERTIFIED


def test_catalan_document():
    doc = pipeline_run("catalan").document
    assert doc["schema"] == 1
    assert doc["guess"]["poly"] == "Q^2*x - Q + 1"
    assert doc["series"]["f_x1"][:6] == ["1", "1", "2", "5", "14", "42"]
    assert doc["holonomic"]["closed_form"]["factorial_form"] == "a(n) = (2n)!/(n!*(n+1)!)"
    assert "error" not in doc


def test_geometric_closed_form():
    doc = pipeline_run("geometric").document
    cf = doc["holonomic"]["closed_form"]
    assert cf["factorial_form"] == "a(n) = 1"


def test_report_contents():
    report = pipeline_run("west").report
    for needle in ("f(x,1) = 1, 1, 2, 6, 22, 91", "guess I =", "G =", "S =", "S / I =", "ODE:", "verdict: certified",
                   "closed form:", "timings:"):
        assert needle in report, needle


def test_determinism_and_recheck():
    a = run_pipeline(PipelineConfig(), corpus_path("catalan"))
    b = run_pipeline(PipelineConfig(), corpus_path("catalan"))
    assert a.dumps() == b.dumps()
    assert recheck(json.loads(a.dumps())) == "certified"


def test_tamper_detection():
    doc = json.loads(pipeline_run("catalan").dumps())
    doc["certificate"]["guess"]["poly"] = "Q^2*x - Q + 2"
    with pytest.raises(TamperDetected):
        recheck(doc)
    doc = json.loads(pipeline_run("catalan").dumps())
    doc["series"]["f_x1"][3] = "6"
    with pytest.raises(TamperDetected):
        recheck(doc)
    doc = json.loads(pipeline_run("catalan").dumps())
    doc["certificate"]["quotient"] = "2*x"
    with pytest.raises(TamperDetected):
        recheck(doc)


def test_partial_results_and_stage():
    res = run_pipeline(PipelineConfig(order=5), corpus_path("catalan"))
    assert res.exit_code == EXIT_INCONCLUSIVE
    assert res.document["error"]["stage"] == "guess"
    assert res.document["series"]["f_x1"] == [str(catalan(n)) for n in range(6)]
    assert "error in stage guess" in res.report
    res = run_pipeline(PipelineConfig(max_deg_q=1, max_deg_x=1), corpus_path("west"))
    assert res.document["error"]["type"] == "NoGuess" and res.exit_code == EXIT_INCONCLUSIVE
    assert run_pipeline(PipelineConfig(order=0), corpus_path("catalan")).exit_code == EXIT_USAGE


def test_stop_after():
    res = run_pipeline(PipelineConfig(order=20), corpus_path("catalan"), stop_after="solve")
    assert "guess" not in res.document and res.exit_code == 0
    res = run_pipeline(PipelineConfig(order=20), corpus_path("catalan"), stop_after="guess")
    assert "certificate" not in res.document and res.document["guess"]["poly"] == "Q^2*x - Q + 1"


def test_exit_code_mapping():
    assert exit_code_for(NoGuess("x")) == EXIT_INCONCLUSIVE
    assert exit_code_for(TamperDetected("x")) == EXIT_REFUTED
    assert exit_code_for(json.JSONDecodeError("x", "", 0)) == EXIT_USAGE
    assert exit_code_for(RuntimeError("x")) == EXIT_INTERNAL


def test_cli_prove_and_recheck(tmp_path, capsys):
    out = tmp_path / "cat.json"
    assert main(["prove", str(corpus_path("catalan")), "--out", str(out)]) == 0
    assert "verdict: certified" in capsys.readouterr().out
    assert main(["recheck", str(out)]) == 0
    assert "verdict: certified" in capsys.readouterr().out
    doc = json.loads(out.read_text())
    doc["certificate"]["guess"]["poly"] = "Q^2*x - 2*Q + 1"
    bad = write(tmp_path, "bad.json", json.dumps(doc))
    assert main(["recheck", str(bad)]) == EXIT_REFUTED
    truncated = write(tmp_path, "trunc.json", out.read_text()[:500])
    assert main(["recheck", str(truncated)]) == EXIT_USAGE
    assert main(["recheck", str(tmp_path / "missing.json")]) == EXIT_USAGE


def test_cli_batch_jobs_and_out_directory(tmp_path, capsys):
    files = [str(corpus_path(n)) for n in ("catalan", "geometric", "motzkin")]
    assert main(["prove", *files, "--jobs", "2", "--out", str(tmp_path / "certs"), "--json"]) == 0
    written = sorted(p.name for p in (tmp_path / "certs").iterdir())
    assert written == ["catalan.json", "geometric.json", "motzkin.json"]
    serial = tmp_path / "serial"
    main(["prove", *files, "--out", str(serial)])
    for name in written:
        assert (serial / name).read_text() == (tmp_path / "certs" / name).read_text()
    capsys.readouterr()


def test_cli_solve_guess_flags(capsys):
    assert main(["solve", str(corpus_path("catalan")), "--order", "10", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["series"]["order"] == 10 and "guess" not in doc
    assert main(["guess", str(corpus_path("catalan")), "--order", "30", "--max-deg-q", "1"]) == EXIT_INCONCLUSIVE
    assert "NoGuess" in capsys.readouterr().out


def test_cli_usage_errors(tmp_path, capsys):
    assert main(["frobnicate"]) == EXIT_USAGE
    assert main(["prove", str(corpus_path("catalan")), "--order", "-1"]) == EXIT_USAGE
    bad = write(tmp_path, "bad.feq", "equation: P = 1 + x*t*\n")
    assert main(["prove", str(bad)]) == EXIT_USAGE
    assert main(["prove", str(tmp_path / "none.feq")]) == EXIT_USAGE
    capsys.readouterr()


def test_cli_rec(tmp_path, capsys):
    terms = write(tmp_path, "cat.txt", ", ".join(str(catalan(n)) for n in range(30)))
    assert main(["rec", str(terms)]) == 0
    out = capsys.readouterr().out
    assert "(n + 2)*a(n+1) + (-4*n - 2)*a(n) = 0" in out and "(2n)!/(n!*(n+1)!)" in out
    assert main(["rec", str(terms), "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["recurrence"]["order"] == 1
    noise = write(tmp_path, "noise.txt", json.dumps([7, 1, 8, 2, 8, 1, 8, 2, 8, 4, 5, 9, 0, 4, 5, 2, 3, 5, 3, 6]))
    assert main(["rec", str(noise), "--rec-order", "1", "--rec-deg", "1"]) == EXIT_INCONCLUSIVE
    assert main(["rec", str(write(tmp_path, "x.txt", "1, 2, q"))]) == EXIT_USAGE
    assert read_coefficients("1/2 3\n-4") == [read_coefficients("[\"1/2\"]")[0], 3, -4]
    capsys.readouterr()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "catalytic", "prove", str(corpus_path("geometric"))],
                          capture_output=True, text=True, cwd=ROOT)
    assert proc.returncode == 0 and "verdict: certified" in proc.stdout
