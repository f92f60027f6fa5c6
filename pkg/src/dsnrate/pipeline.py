"""End-to-end run: events -> collaborations -> graph -> stats, communities, ratings."""

from __future__ import annotations

import hashlib
import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .centrality import (
    activity_counts,
    compute_ratings,
    rating_histogram,
    rating_table,
    write_histogram_csv,
    write_ratings_csv,
)
from .graph import build_network, dump_network, stats
from .ingest import DEFAULT_WINDOW_DAYS, extract_instances, read_events, write_instances
from .louvain import louvain_communities, modularity

log = logging.getLogger(__name__)

ARTIFACTS = ("collab.jsonl", "graph.json", "stats.json", "communities.json", "ratings.csv", "hist.csv")


@dataclass
class PipelineConfig:
    event_paths: list[str]
    output_dir: str
    seed: int = 42
    window_days: int = DEFAULT_WINDOW_DAYS
    distance_mode: str = "inverse"
    include_isolates: str | None = None
    weighted_degree: bool = False
    threads: int = 1
    bins: int = 10
    extra: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.window_days < 1:
            raise ValueError("window_days must be >= 1")


def file_digest(path: str | os.PathLike) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def write_sidecar(artifact: str | os.PathLike, seed: int, inputs: list[str], **params) -> Path:
    """Write ``<artifact>.meta.json`` recording tool version, seed and input hashes."""
    meta = {
        "tool": "dsnrate",
        "version": __version__,
        "seed": seed,
        "inputs": [{"name": os.path.basename(p), "sha256": file_digest(p)} for p in inputs],
        "params": params,
    }
    path = Path(f"{artifact}.meta.json")
    path.write_text(json.dumps(meta, indent=1, sort_keys=True) + "\n")
    return path


def read_roster(path: str) -> list[str]:
    """Developer roster: a JSON array, or one identifier per line."""
    text = Path(path).read_text()
    if path.endswith(".json"):
        return [str(x) for x in json.loads(text)]
    return [line.strip() for line in text.splitlines() if line.strip()]


def run_pipeline(config: PipelineConfig) -> dict[str, Path]:
    """Run every stage and write the six artifacts (plus sidecars) to ``output_dir``.

    On failure every file written by this run is removed before re-raising.
    """
    for p in config.event_paths:
        if not os.path.exists(p):
            raise FileNotFoundError(f"events file not found: {p}")
    if config.include_isolates and not os.path.exists(config.include_isolates):
        raise FileNotFoundError(f"roster file not found: {config.include_isolates}")

    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    inputs = list(config.event_paths) + ([config.include_isolates] if config.include_isolates else [])
    params = {
        "window_days": config.window_days,
        "distance": config.distance_mode,
        "weighted_degree": config.weighted_degree,
        "bins": config.bins,
    }

    def emit(name: str, writer) -> Path:
        path = out / name
        written.append(path)
        with open(path, "w", newline="") as fh:
            writer(fh)
        written.append(write_sidecar(path, config.seed, inputs, **params))
        return path

    try:
        events, diagnostics = read_events(config.event_paths)
        for d in diagnostics:
            log.warning("%s", d)
        instances = extract_instances(events, config.window_days)
        log.info("%d events -> %d collaboration instances", len(events), len(instances))
        emit("collab.jsonl", lambda fh: write_instances(instances, fh))

        roster = read_roster(config.include_isolates) if config.include_isolates else ()
        net = build_network(instances, roster)
        emit("graph.json", lambda fh: dump_network(net, fh))

        summary = stats(net, seed=config.seed)
        emit("stats.json", lambda fh: fh.write(json.dumps(summary.to_json(), indent=1) + "\n"))

        communities = louvain_communities(net, seed=config.seed)
        payload = {"modularity": modularity(net, communities), "communities": communities}
        emit("communities.json", lambda fh: fh.write(json.dumps(payload, indent=1) + "\n"))

        vectors = compute_ratings(net, config.distance_mode, config.weighted_degree, config.threads)
        rows = rating_table(vectors, activity_counts(net, events))
        emit("ratings.csv", lambda fh: write_ratings_csv(rows, fh))

        hist = rating_histogram([r.rating for r in rows], config.bins)
        emit("hist.csv", lambda fh: write_histogram_csv(hist, fh))
    except BaseException:
        for path in written:
            try:
                path.unlink()
            except FileNotFoundError:
                pass
        raise
    return {name: out / name for name in ARTIFACTS}
