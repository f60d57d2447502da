from __future__ import annotations

from pathlib import Path

import pytest

from catalytic.frontend import load_equation_file
from catalytic.pipeline import PipelineConfig, run_pipeline
from catalytic.solver import solve

ROOT = Path(__file__).resolve().parents[1]
CORPUS = ROOT / "corpus"
CORPUS_FILES = sorted(CORPUS.glob("*.feq"))

_solutions: dict = {}
_runs: dict = {}


def corpus_path(name: str) -> Path:
    return CORPUS / f"{name}.feq"


def solved(name: str, order: int = 60):
    """Cached (equation, SolverResult) for a corpus entry."""
    key = (name, order)
    if key not in _solutions:
        eq = load_equation_file(corpus_path(name)).build()
        _solutions[key] = (eq, solve(eq, order))
    return _solutions[key]


def pipeline_run(name: str, **kw):
    key = (name, tuple(sorted(kw.items())))
    if key not in _runs:
        _runs[key] = run_pipeline(PipelineConfig(**kw), corpus_path(name))
    return _runs[key]


@pytest.fixture
def catalan():
    return solved("catalan")


@pytest.fixture
def west():
    return solved("west")


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance
    except ImportError:
        return
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.lines():
            terminalreporter.write_line(line)
