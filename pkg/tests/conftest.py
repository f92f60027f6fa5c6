from __future__ import annotations

import json
from pathlib import Path

import pytest

from dsnrate.fixtures import bundled_corpus_path
from dsnrate.ingest import parse_events

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def corpus_path() -> Path:
    return Path(str(bundled_corpus_path()))


@pytest.fixture(scope="session")
def corpus_events(corpus_path):
    with open(corpus_path, "rb") as fh:
        events, diagnostics = parse_events(fh)
    assert diagnostics == []
    return events


@pytest.fixture(scope="session")
def golden_instances() -> list[dict]:
    with open(DATA / "fixture_collab_golden.jsonl") as fh:
        return [json.loads(line) for line in fh]


def canon(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True)


# one summary line per acceptance criterion

_criteria: dict[str, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion reported in the summary")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    label = marker.args[0]
    if call.when == "setup" and call.excinfo is not None:
        _criteria[label] = "SKIP" if call.excinfo.errisinstance(pytest.skip.Exception) else "FAIL"
    elif call.when == "call":
        if call.excinfo is None:
            _criteria[label] = "PASS"
        elif call.excinfo.errisinstance(pytest.skip.Exception):
            _criteria[label] = "SKIP"
        else:
            _criteria[label] = "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_criteria):
        terminalreporter.write_line(f"{_criteria[label]:<4}  {label}")
