"""Synthetic event corpora standing in for crawled repository history."""

from __future__ import annotations

import hashlib
import json
from datetime import datetime, timedelta, timezone
from importlib import resources
from typing import IO, Iterable

import numpy as np

from .ingest import EventKind, EventRecord, record_to_json

EPOCH = datetime(2021, 1, 1, tzinfo=timezone.utc)
BOTS = ("dependabot[bot]", "bors[bot]")


def bundled_corpus_path():
    """Path of the small hand-traced corpus shipped with the package."""
    return resources.files("dsnrate") / "data" / "fixture_events.jsonl"


def generate_fixture_corpus(
    seed: int,
    repos: int,
    devs: int,
    days: int,
    *,
    commits_per_day: float = 1.0,
    reviewed_fraction: float = 0.5,
    bot_fraction: float = 0.05,
    rejected_pr_rate: float = 0.05,
    burst_rate: float = 0.1,
) -> list[EventRecord]:
    """Generate a schema-valid event stream, deterministic for ``seed``.

    ``commits_per_day`` is the Poisson rate per repository. Each commit is
    reviewed with probability ``reviewed_fraction`` (by a PR approval or by a
    merge from someone else). ``burst_rate`` is the daily chance that a
    repository sees several developers hit the same file within a few days.
    """
    if min(seed + 1, repos, devs, days) < 1:
        raise ValueError("seed must be >= 0 and repos, devs, days >= 1")
    if not 0.0 <= reviewed_fraction <= 1.0:
        raise ValueError("reviewed_fraction must be in [0, 1]")
    rng = np.random.default_rng(seed)
    people = [f"dev{i:03d}" for i in range(devs)]
    events: list[EventRecord] = []

    for r in range(repos):
        repo = f"org{r % 3}/pkg{r:02d}"
        team_size = int(min(devs, rng.integers(2, 7)))
        team = [people[i] for i in sorted(rng.choice(devs, size=team_size, replace=False))]
        files = [f"src/mod{i}.rs" for i in range(int(rng.integers(4, 12)))] + ["README.md", "Cargo.toml"]
        # skewed file popularity so co-edition happens naturally
        popularity = 1.0 / np.arange(1, len(files) + 1)
        popularity /= popularity.sum()
        n_commit = 0
        n_pr = 0

        def when(day: float) -> datetime:
            return EPOCH + timedelta(seconds=int(day * 86400))

        def pick_author() -> str:
            if rng.random() < bot_fraction:
                return BOTS[0]
            if rng.random() < 0.1:
                return people[int(rng.integers(devs))]
            return team[int(rng.integers(len(team)))]

        def other_human(author: str) -> str | None:
            pool = [p for p in team if p != author] or [p for p in people if p != author]
            return pool[int(rng.integers(len(pool)))] if pool else None

        def commit(day: float, author: str, touched: list[str]) -> None:
            nonlocal n_commit, n_pr
            n_commit += 1
            cid = hashlib.sha1(f"{seed}:{repo}:{n_commit}".encode()).hexdigest()[:12]
            ts = when(day)
            merged_by = None
            reviewer = other_human(author) if rng.random() < reviewed_fraction else None
            via_pr = rng.random() < 0.5
            if reviewer is not None and not via_pr:
                merged_by = reviewer
            elif rng.random() < 0.3:
                merged_by = BOTS[1] if rng.random() < 0.3 else author
            events.append(
                EventRecord(EventKind.COMMIT, repo, cid, author, ts, files=tuple(touched), merged_by=merged_by)
            )
            if via_pr:
                n_pr += 1
                approvers = (reviewer,) if reviewer is not None else ()
                if reviewer is None and rng.random() < 0.3:
                    approvers = (BOTS[0],)
                events.append(
                    EventRecord(
                        EventKind.PULL_REQUEST, repo, str(n_pr), author, ts,
                        approvers=approvers, merged=True, commit_ids=(cid,),
                    )
                )

        for day in range(days):
            for _ in range(int(rng.poisson(commits_per_day))):
                k = int(rng.integers(1, 4))
                touched = sorted(set(rng.choice(files, size=k, p=popularity)))
                commit(day + rng.random(), pick_author(), touched)
            if rng.random() < burst_rate:
                hot = files[int(rng.integers(len(files)))]
                for _ in range(int(rng.integers(2, 5))):
                    author = team[int(rng.integers(len(team)))]
                    commit(day + 3 * rng.random(), author, [hot])
            if rng.random() < rejected_pr_rate:
                n_pr += 1
                author = pick_author()
                closer = other_human(author) if rng.random() < 0.7 else author
                approvers = (other_human(author),) if rng.random() < 0.2 else ()
                events.append(
                    EventRecord(
                        EventKind.PULL_REQUEST, repo, str(n_pr), author, when(day + rng.random()),
                        approvers=tuple(a for a in approvers if a), closed_by=closer, merged=False,
                    )
                )

    events.sort(key=lambda e: (e.repo, e.timestamp, e.kind.value, e.id))
    return events


def write_events(events: Iterable[EventRecord], fh: IO[str]) -> None:
    for ev in events:
        fh.write(json.dumps(record_to_json(ev)) + "\n")
