from __future__ import annotations

import hashlib
import io

import pytest

from dsnrate.fixtures import generate_fixture_corpus, write_events
from dsnrate.ingest import EventKind, build_pr_index, classify_commit, is_bot, parse_events


def dump(events) -> bytes:
    buf = io.StringIO()
    write_events(events, buf)
    return buf.getvalue().encode()


def test_deterministic_for_seed():
    a = dump(generate_fixture_corpus(1, 2, 6, 60))
    b = dump(generate_fixture_corpus(1, 2, 6, 60))
    assert hashlib.sha256(a).hexdigest() == hashlib.sha256(b).hexdigest()
    assert a != dump(generate_fixture_corpus(2, 2, 6, 60))


def test_output_is_schema_valid():
    raw = dump(generate_fixture_corpus(4, 3, 10, 90))
    events, diagnostics = parse_events(io.BytesIO(raw))
    assert diagnostics == []
    assert any(is_bot(e.author) for e in events)
    assert any(e.kind is EventKind.PULL_REQUEST and not e.merged for e in events)


def reviewed_share(events):
    prs = build_pr_index(events)
    commits = [e for e in events if e.kind is EventKind.COMMIT]
    return sum(bool(classify_commit(c, prs)) for c in commits) / len(commits), len(commits)


def test_zero_reviewed_fraction():
    events = generate_fixture_corpus(7, 3, 8, 60, reviewed_fraction=0.0)
    prs = build_pr_index(events)
    assert all(not classify_commit(e, prs) for e in events if e.kind is EventKind.COMMIT)


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_half_reviewed(seed):
    share, n = reviewed_share(generate_fixture_corpus(seed, 3, 10, 120, reviewed_fraction=0.5))
    assert n >= 200
    assert abs(share - 0.5) <= 0.1


def test_rejects_bad_parameters():
    with pytest.raises(ValueError):
        generate_fixture_corpus(1, 0, 5, 10)
    with pytest.raises(ValueError):
        generate_fixture_corpus(1, 1, 5, 10, reviewed_fraction=1.5)


def test_single_developer_corpus_has_no_reviews():
    events = generate_fixture_corpus(3, 1, 1, 30, bot_fraction=0.0)
    prs = build_pr_index(events)
    assert all(not classify_commit(e, prs) for e in events if e.kind is EventKind.COMMIT)
