"""Shared test fixtures and the acceptance summary hook.

``tests/test_acceptance.py`` holds the release gate: one test per
criterion.  This conftest prints one PASS/FAIL line per criterion at the
end of the run so the gate's verdict is visible without digging through
the report.
"""

from __future__ import annotations

from pathlib import Path

import pytest

from tracelink.chunker import default_lexicon
from tracelink.panoptic import load_annotations, load_category_index
from tracelink.wordnet import default_manual_table, load_wordnet, load_wordnet_dir

TESTS = Path(__file__).resolve().parent
FIXTURES = TESTS / "fixtures"
REPO = TESTS.parent


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def categories():
    return load_category_index(FIXTURES / "categories.json")


@pytest.fixture(scope="session")
def mini_wordnet():
    return load_wordnet(FIXTURES / "wordnet" / "index.noun", FIXTURES / "wordnet" / "data.noun")


@pytest.fixture(scope="session")
def lexicon():
    return default_lexicon()


@pytest.fixture(scope="session")
def manual_table():
    return default_manual_table()


@pytest.fixture(scope="session")
def transfer_annotations():
    return load_annotations(FIXTURES / "transfer" / "panoptic.json")


@pytest.fixture(scope="session")
def real_wordnet_dir() -> Path:
    path = REPO / "data" / "wordnet30"
    if not path.exists():
        pytest.skip("bundled word database not present")
    return path


@pytest.fixture(scope="session")
def real_wn(real_wordnet_dir):
    return load_wordnet_dir(real_wordnet_dir)


# ----------------------------------------------------------------------
# acceptance verdict lines

_acceptance_results: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::", 1)[-1]
    if report.when == "call":
        _acceptance_results[name] = report.outcome.upper()
    elif report.when == "setup" and report.outcome != "passed":
        _acceptance_results[name] = report.outcome.upper()


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name in sorted(_acceptance_results):
        verdict = _acceptance_results[name]
        shown = {"PASSED": "PASS", "FAILED": "FAIL", "SKIPPED": "SKIP"}.get(verdict, verdict)
        terminalreporter.write_line(f"ACCEPTANCE {shown:4s} {name}")
