import re

import pytest

from persearch.index import ingest_directory
from persearch.profile_store import ProfileStore

# Small corpus with hand-countable token frequencies. Ingestion order is
# sorted by filename: atm.txt -> doc 1, cards.txt -> doc 2, ids.txt -> doc 3.
CORPUS_FILES = {
    "atm.txt": (
        "Bank Cards\n"
        "The bank issues an ATM card. The card needs a PIN code from the bank.\n"
    ),
    "cards.txt": (
        "Card Games\n"
        "A card game is fun for players. Card players play the card game with fun.\n"
    ),
    "ids.txt": (
        "Identity Cards\n"
        "An identity card shows a name and a photo. Offices print identity card "
        "badges for staff members every single working day.\n"
    ),
}


@pytest.fixture
def corpus_dir(tmp_path):
    root = tmp_path / "corpus"
    root.mkdir()
    for name, body in CORPUS_FILES.items():
        (root / name).write_text(body, encoding="utf-8")
    return root


@pytest.fixture
def store(tmp_path):
    return ProfileStore(tmp_path / "store")


@pytest.fixture
def corpus_store(tmp_path, corpus_dir):
    """A store with the three-document corpus already ingested."""
    s = ProfileStore(tmp_path / "store")
    ingest_directory(s, corpus_dir)
    return s


# ---------------------------------------------------------------------------
# Acceptance reporting: one pass/fail line per criterion at the end of a run.
# ---------------------------------------------------------------------------

_CRITERION = re.compile(r"test_criterion_(\d+[a-z]?)_(\w+)")
_acceptance_results: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    match = _CRITERION.search(report.nodeid)
    if match:
        number, name = match.groups()
        label = f"criterion {number} ({name.replace('_', ' ')})"
        _acceptance_results[label] = report.outcome.upper()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_results:
        return
    terminalreporter.write_line("")
    terminalreporter.write_line("acceptance criteria:")
    for label, outcome in sorted(
        _acceptance_results.items(), key=lambda kv: kv[0]
    ):
        word = "PASS" if outcome == "PASSED" else "FAIL"
        terminalreporter.write_line(f"  {word}  {label}")
