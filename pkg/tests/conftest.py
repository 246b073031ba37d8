from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"

# criterion number -> (passed, one-line detail), filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}
# property test name -> passed, filled as test_properties.py runs
PROPERTY_OUTCOMES: dict[str, bool] = {}


def load_environment(stem: str):
    """Evaluate the declarations of a corpus file, skipping its checks and claims."""
    from edskit.dsl import Options, parse_file
    from edskit.dsl import ast as A
    from edskit.dsl.runner import Environment

    doc = parse_file(str(CORPUS / f"{stem}.eds"))
    env = Environment(doc, Options())
    for s in doc.statements:
        if not isinstance(s, (A.Claim, A.Check)):
            env.declare(s)
    return env


CORPUS_STEMS = sorted(p.stem for p in CORPUS.glob("*.eds"))


@pytest.fixture
def corpus_dir() -> Path:
    return CORPUS


@pytest.fixture(scope="session")
def acceptance_log() -> dict[int, tuple[bool, str]]:
    return ACCEPTANCE


@pytest.fixture(scope="session")
def property_outcomes() -> dict[str, bool]:
    return PROPERTY_OUTCOMES


def pytest_collection_modifyitems(items):
    # acceptance runs last so it can reuse the property-suite outcomes
    items.sort(key=lambda item: item.path.name == "test_acceptance.py")


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_properties.py" in report.nodeid:
        PROPERTY_OUTCOMES[report.nodeid.rsplit("::", 1)[-1]] = report.passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
