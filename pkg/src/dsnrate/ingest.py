"""Event parsing and collaboration extraction.

Turns line-delimited commit / pull-request records into dated
collaboration instances between pairs of (human) developers.
"""

from __future__ import annotations

import enum
import json
from collections import defaultdict
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import IO, Iterable, Iterator

BOT_SUFFIX = "[bot]"
DEFAULT_WINDOW_DAYS = 30
SECONDS_PER_DAY = 86400


class EventKind(str, enum.Enum):
    COMMIT = "commit"
    PULL_REQUEST = "pull_request"


class CollaborationKind(str, enum.Enum):
    CO_EDITION = "co_edition"
    AUTHOR_REVIEWER = "author_reviewer"


@dataclass(frozen=True)
class EventRecord:
    kind: EventKind
    repo: str
    id: str
    author: str
    timestamp: datetime
    # commit-only
    files: tuple[str, ...] = ()
    merged_by: str | None = None
    # pull-request-only
    approvers: tuple[str, ...] = ()
    closed_by: str | None = None
    merged: bool = False
    commit_ids: tuple[str, ...] = ()

    @property
    def epoch(self) -> int:
        return int(self.timestamp.timestamp())


@dataclass(frozen=True, order=True)
class CollaborationInstance:
    """One dated collaboration between developers ``a`` and ``b`` (``a < b``)."""

    repo: str
    timestamp: datetime
    kind: CollaborationKind
    a: str
    b: str
    source_ids: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.a == self.b:
            raise ValueError(f"self-collaboration for {self.a!r}")
        if self.a > self.b:
            # canonical unordered pair
            a, b = self.b, self.a
            object.__setattr__(self, "a", a)
            object.__setattr__(self, "b", b)

    @property
    def pair(self) -> tuple[str, str]:
        return (self.a, self.b)

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "a": self.a,
            "b": self.b,
            "timestamp": format_timestamp(self.timestamp),
            "repo": self.repo,
            "source_ids": list(self.source_ids),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CollaborationInstance":
        return cls(
            repo=obj["repo"],
            timestamp=parse_timestamp(obj["timestamp"]),
            kind=CollaborationKind(obj["kind"]),
            a=obj["a"],
            b=obj["b"],
            source_ids=tuple(obj.get("source_ids", ())),
        )


@dataclass(frozen=True)
class Diagnostic:
    line: int
    reason: str

    def __str__(self) -> str:
        return f"line {self.line}: {self.reason}"


class RecordError(ValueError):
    """A single input record violates the event schema."""


# ---------------------------------------------------------------------------
# parsing

_COMMIT_ONLY = ("files", "merged_by")
_PR_ONLY = ("approvers", "closed_by", "merged", "commit_ids")


def parse_timestamp(value: str) -> datetime:
    """Parse an ISO-8601 instant with an explicit UTC offset (or ``Z``)."""
    if not isinstance(value, str):
        raise RecordError(f"timestamp must be a string, got {type(value).__name__}")
    text = value.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    try:
        ts = datetime.fromisoformat(text)
    except ValueError:
        raise RecordError(f"unparseable timestamp: {value!r}") from None
    if ts.tzinfo is None:
        raise RecordError(f"timestamp has no UTC offset: {value!r}")
    return ts.astimezone(timezone.utc).replace(microsecond=0)


def format_timestamp(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _ident(obj: dict, name: str, required: bool = True) -> str | None:
    value = obj.get(name)
    if value is None:
        if required:
            raise RecordError(f"missing field: {name}")
        return None
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise RecordError(f"field {name} must be a string")
    value = str(value)
    if not value:
        raise RecordError(f"field {name} must be nonempty")
    return value


def _ident_list(obj: dict, name: str) -> tuple[str, ...]:
    value = obj.get(name)
    if value is None:
        return ()
    if not isinstance(value, list):
        raise RecordError(f"field {name} must be a list")
    out = []
    for item in value:
        if isinstance(item, bool) or not isinstance(item, (str, int)) or item == "":
            raise RecordError(f"field {name} must contain nonempty strings")
        out.append(str(item))
    return tuple(out)


def _present(obj: dict, name: str) -> bool:
    value = obj.get(name)
    return value is not None and value != []


def record_from_json(obj: object) -> EventRecord:
    """Validate one decoded JSON object and build an :class:`EventRecord`."""
    if not isinstance(obj, dict):
        raise RecordError("record is not a JSON object")
    if "kind" not in obj or obj["kind"] is None:
        raise RecordError("missing field: kind")
    try:
        kind = EventKind(obj["kind"])
    except ValueError:
        raise RecordError(f"unknown kind: {obj['kind']!r}") from None
    repo = _ident(obj, "repo")
    rid = _ident(obj, "id")
    author = _ident(obj, "author")
    if "timestamp" not in obj or obj["timestamp"] is None:
        raise RecordError("missing field: timestamp")
    timestamp = parse_timestamp(obj["timestamp"])

    if kind is EventKind.COMMIT:
        for name in _PR_ONLY:
            if _present(obj, name):
                raise RecordError(f"field {name} not allowed on a commit")
        return EventRecord(
            kind=kind,
            repo=repo,
            id=rid,
            author=author,
            timestamp=timestamp,
            files=_ident_list(obj, "files"),
            merged_by=_ident(obj, "merged_by", required=False),
        )

    for name in _COMMIT_ONLY:
        if _present(obj, name):
            raise RecordError(f"field {name} not allowed on a pull request")
    merged = obj.get("merged")
    if merged is None:
        raise RecordError("missing field: merged")
    if not isinstance(merged, bool):
        raise RecordError("field merged must be a boolean")
    return EventRecord(
        kind=kind,
        repo=repo,
        id=rid,
        author=author,
        timestamp=timestamp,
        approvers=_ident_list(obj, "approvers"),
        closed_by=_ident(obj, "closed_by", required=False),
        merged=merged,
        commit_ids=_ident_list(obj, "commit_ids"),
    )


def record_to_json(rec: EventRecord) -> dict:
    out: dict = {
        "kind": rec.kind.value,
        "repo": rec.repo,
        "id": rec.id,
        "author": rec.author,
        "timestamp": format_timestamp(rec.timestamp),
    }
    if rec.kind is EventKind.COMMIT:
        out["files"] = list(rec.files)
        if rec.merged_by is not None:
            out["merged_by"] = rec.merged_by
    else:
        out["merged"] = rec.merged
        out["approvers"] = list(rec.approvers)
        if rec.closed_by is not None:
            out["closed_by"] = rec.closed_by
        out["commit_ids"] = list(rec.commit_ids)
    return out


def parse_events(
    stream: Iterable[bytes] | Iterable[str] | IO,
) -> tuple[list[EventRecord], list[Diagnostic]]:
    """Parse line-delimited JSON event records.

    Every nonblank line yields either one record or one diagnostic. When the
    same (repo, kind, id) appears more than once the last occurrence is kept
    and each superseded line is reported instead. Read errors on the stream
    itself propagate.
    """
    parsed: list[tuple[int, EventRecord]] = []
    diagnostics: list[Diagnostic] = []
    for lineno, raw in enumerate(stream, start=1):
        if isinstance(raw, bytes):
            try:
                raw = raw.decode("utf-8")
            except UnicodeDecodeError:
                diagnostics.append(Diagnostic(lineno, "invalid UTF-8"))
                continue
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            diagnostics.append(Diagnostic(lineno, f"invalid JSON: {exc.msg}"))
            continue
        try:
            parsed.append((lineno, record_from_json(obj)))
        except RecordError as exc:
            diagnostics.append(Diagnostic(lineno, str(exc)))

    last_line: dict[tuple[str, EventKind, str], int] = {}
    for lineno, rec in parsed:
        last_line[(rec.repo, rec.kind, rec.id)] = lineno
    records = []
    for lineno, rec in parsed:
        winner = last_line[(rec.repo, rec.kind, rec.id)]
        if winner == lineno:
            records.append(rec)
        else:
            diagnostics.append(
                Diagnostic(
                    lineno,
                    f"duplicate {rec.kind.value} {rec.repo}#{rec.id} superseded by line {winner}",
                )
            )
    diagnostics.sort(key=lambda d: d.line)
    return records, diagnostics


def read_events(paths: Iterable[str]) -> tuple[list[EventRecord], list[Diagnostic]]:
    """Parse several event files as one corpus; diagnostics keep per-file line numbers."""
    records: list[EventRecord] = []
    diagnostics: list[Diagnostic] = []
    for path in paths:
        with open(path, "rb") as fh:
            recs, diags = parse_events(fh)
        records.extend(recs)
        diagnostics.extend(diags)
    return dedupe_records(records), diagnostics


def dedupe_records(records: Iterable[EventRecord]) -> list[EventRecord]:
    keep: dict[tuple[str, EventKind, str], EventRecord] = {}
    for rec in records:
        key = (rec.repo, rec.kind, rec.id)
        keep.pop(key, None)
        keep[key] = rec
    return list(keep.values())


# ---------------------------------------------------------------------------
# review classification


def is_bot(dev: str) -> bool:
    return dev.endswith(BOT_SUFFIX)


PRIndex = dict[tuple[str, str], list[EventRecord]]


def build_pr_index(events: Iterable[EventRecord]) -> PRIndex:
    """Map (repo, commit hash) to the pull requests that contain that commit."""
    index: PRIndex = defaultdict(list)
    for ev in events:
        if ev.kind is EventKind.PULL_REQUEST:
            for cid in ev.commit_ids:
                index[(ev.repo, cid)].append(ev)
    for prs in index.values():
        prs.sort(key=lambda pr: pr.id)
    return dict(index)


def classify_commit(commit: EventRecord, prs: PRIndex) -> frozenset[str]:
    """Return the reviewer set of a commit; an empty set means unreviewed.

    Reviewers are the approvers of every pull request containing the commit
    plus the merger, minus the author and bot accounts.
    """
    if commit.kind is not EventKind.COMMIT:
        raise ValueError("classify_commit expects a commit record")
    reviewers = set()
    for pr in prs.get((commit.repo, commit.id), ()):
        reviewers.update(pr.approvers)
    if commit.merged_by is not None:
        reviewers.add(commit.merged_by)
    return frozenset(r for r in reviewers if r != commit.author and not is_bot(r))


def extract_review_instances(events: Iterable[EventRecord]) -> list[CollaborationInstance]:
    events = list(events)
    prs = build_pr_index(events)
    out = []
    for ev in events:
        if is_bot(ev.author):
            continue
        if ev.kind is EventKind.COMMIT:
            for reviewer in sorted(classify_commit(ev, prs)):
                out.append(
                    CollaborationInstance(
                        ev.repo, ev.timestamp, CollaborationKind.AUTHOR_REVIEWER,
                        ev.author, reviewer, (ev.id,),
                    )
                )
        elif not ev.merged:
            others = set(ev.approvers)
            if ev.closed_by is not None:
                others.add(ev.closed_by)
            for other in sorted(others):
                if other == ev.author or is_bot(other):
                    continue
                out.append(
                    CollaborationInstance(
                        ev.repo, ev.timestamp, CollaborationKind.AUTHOR_REVIEWER,
                        ev.author, other, (ev.id,),
                    )
                )
    out.sort()
    return out


def extract_coedition_instances(
    events: Iterable[EventRecord], window_days: int = DEFAULT_WINDOW_DAYS
) -> list[CollaborationInstance]:
    """One instance per pair of commits by different humans touching the same
    file no more than ``window_days`` apart (boundary inclusive)."""
    if window_days < 1:
        raise ValueError("window_days must be >= 1")
    window = window_days * SECONDS_PER_DAY
    touches: dict[tuple[str, str], list[EventRecord]] = defaultdict(list)
    for ev in events:
        if ev.kind is not EventKind.COMMIT or is_bot(ev.author):
            continue
        for path in set(ev.files):
            touches[(ev.repo, path)].append(ev)

    out = []
    for (repo, _path), commits in touches.items():
        commits.sort(key=lambda c: (c.epoch, c.id))
        start = 0
        for j, later in enumerate(commits):
            while later.epoch - commits[start].epoch > window:
                start += 1
            for earlier in commits[start:j]:
                if earlier.author == later.author:
                    continue
                out.append(
                    CollaborationInstance(
                        repo, later.timestamp, CollaborationKind.CO_EDITION,
                        earlier.author, later.author, (earlier.id, later.id),
                    )
                )
    out.sort()
    return out


def extract_instances(
    events: Iterable[EventRecord], window_days: int = DEFAULT_WINDOW_DAYS
) -> list[CollaborationInstance]:
    events = list(events)
    out = extract_review_instances(events) + extract_coedition_instances(events, window_days)
    out.sort()
    return out


# ---------------------------------------------------------------------------
# rosters and activity


def developer_roster(events: Iterable[EventRecord]) -> list[str]:
    """Human developers who authored or reviewed at least one commit or PR."""
    events = list(events)
    prs = build_pr_index(events)
    devs: set[str] = set()
    for ev in events:
        if ev.kind is EventKind.COMMIT:
            if not is_bot(ev.author):
                devs.add(ev.author)
                devs.update(classify_commit(ev, prs))
        elif not ev.merged and not is_bot(ev.author):
            reviewers = set(ev.approvers) | ({ev.closed_by} if ev.closed_by else set())
            reviewers = {r for r in reviewers if r != ev.author and not is_bot(r)}
            if reviewers:
                devs.add(ev.author)
                devs.update(reviewers)
    return sorted(devs)


@dataclass
class Activity:
    commit_count: int = 0
    repos: set[str] = field(default_factory=set)

    @property
    def repo_count(self) -> int:
        return len(self.repos)


def commit_participants(events: Iterable[EventRecord]) -> Iterator[tuple[EventRecord, frozenset[str]]]:
    """Yield each human-authored commit with its author-plus-reviewers set."""
    events = list(events)
    prs = build_pr_index(events)
    for ev in events:
        if ev.kind is EventKind.COMMIT and not is_bot(ev.author):
            yield ev, classify_commit(ev, prs) | {ev.author}


def developer_activity(events: Iterable[EventRecord]) -> dict[str, Activity]:
    """Commits each developer took part in (as author or reviewer) and repos touched."""
    activity: dict[str, Activity] = defaultdict(Activity)
    for commit, people in commit_participants(events):
        for dev in people:
            act = activity[dev]
            act.commit_count += 1
            act.repos.add(commit.repo)
    return dict(activity)


def write_instances(instances: Iterable[CollaborationInstance], fh: IO[str]) -> None:
    for inst in instances:
        fh.write(json.dumps(inst.to_json(), sort_keys=False) + "\n")


def read_instances(fh: Iterable[str]) -> list[CollaborationInstance]:
    out = []
    for lineno, line in enumerate(fh, start=1):
        if not line.strip():
            continue
        try:
            out.append(CollaborationInstance.from_json(json.loads(line)))
        except (KeyError, ValueError, RecordError) as exc:
            raise ValueError(f"line {lineno}: bad collaboration instance ({exc})") from exc
    return out
