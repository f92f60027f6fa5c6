"""Command-line entry point.

Exit codes: 0 success, 1 analysis error, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import shutil
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .centrality import (
    DISTANCE_MODES,
    ConvergenceError,
    activity_counts,
    compute_ratings,
    rating_histogram,
    rating_table,
    read_ratings,
    write_histogram_csv,
    write_ratings_csv,
    write_ratings_json,
)
from .fixtures import bundled_corpus_path, generate_fixture_corpus, write_events
from .graph import UndefinedPathLength, build_network, dump_network, load_network, stats
from .ingest import (
    DEFAULT_WINDOW_DAYS,
    developer_roster,
    extract_instances,
    read_events,
    read_instances,
    write_instances,
)
from .louvain import louvain_communities, modularity
from .pipeline import PipelineConfig, read_roster, run_pipeline, write_sidecar
from .survey import eligible_respondents, sample_survey_targets

log = logging.getLogger("dsnrate")

EXIT_OK, EXIT_ANALYSIS, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _require(*paths: str) -> None:
    for p in paths:
        if not Path(p).exists():
            raise UsageError(f"input not found: {p}")


def _emit(args, payload: dict, text: str | None = None) -> None:
    if args.json:
        print(json.dumps(payload, indent=1))
    elif text is not None and not args.quiet:
        print(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_ingest(args) -> int:
    _require(*args.events)
    events, diagnostics = read_events(args.events)
    instances = extract_instances(events, args.window_days)
    with open(args.out, "w") as fh:
        write_instances(instances, fh)
    write_sidecar(args.out, args.seed, args.events, window_days=args.window_days)
    if args.diagnostics:
        with open(args.diagnostics, "w") as fh:
            for d in diagnostics:
                fh.write(json.dumps({"line": d.line, "reason": d.reason}) + "\n")
    else:
        for d in diagnostics:
            log.warning("%s", d)
    if args.roster_out:
        Path(args.roster_out).write_text("".join(f"{d}\n" for d in developer_roster(events)))
    _emit(
        args,
        {"events": len(events), "instances": len(instances), "diagnostics": len(diagnostics)},
        f"{len(events)} events, {len(instances)} collaboration instances, {len(diagnostics)} diagnostics",
    )
    return EXIT_OK


def cmd_build(args) -> int:
    _require(args.collab, *([args.include_isolates] if args.include_isolates else []))
    with open(args.collab) as fh:
        instances = read_instances(fh)
    roster = read_roster(args.include_isolates) if args.include_isolates else ()
    net = build_network(instances, roster)
    with open(args.out, "w") as fh:
        dump_network(net, fh)
    inputs = [args.collab] + ([args.include_isolates] if args.include_isolates else [])
    write_sidecar(args.out, args.seed, inputs)
    _emit(args, {"nodes": net.node_count, "edges": net.edge_count},
          f"{net.node_count} developers, {net.edge_count} edges")
    return EXIT_OK


def _load_graph(path: str):
    _require(path)
    with open(path) as fh:
        return load_network(fh)


def cmd_stats(args) -> int:
    net = _load_graph(args.graph)
    summary = stats(net, seed=args.seed)
    if args.out:
        Path(args.out).write_text(json.dumps(summary.to_json(), indent=1) + "\n")
        write_sidecar(args.out, args.seed, [args.graph])
    if args.json and not args.table:
        print(json.dumps(summary.to_json(), indent=1))
    elif not args.quiet:
        print(summary.table())
    return EXIT_OK


def cmd_communities(args) -> int:
    net = _load_graph(args.graph)
    comms = louvain_communities(net, seed=args.seed)
    payload = {"modularity": modularity(net, comms), "communities": comms}
    Path(args.out).write_text(json.dumps(payload, indent=1) + "\n")
    write_sidecar(args.out, args.seed, [args.graph])
    _emit(args, {"communities": len(comms), "modularity": payload["modularity"]},
          f"{len(comms)} communities, modularity {payload['modularity']:.4f}")
    return EXIT_OK


def _ratings_rows(net, args, events_paths):
    vectors = compute_ratings(net, args.distance, args.weighted_degree, args.threads)
    events = None
    if events_paths:
        _require(*events_paths)
        events, _ = read_events(events_paths)
    return rating_table(vectors, activity_counts(net, events))


def cmd_rate(args) -> int:
    net = _load_graph(args.graph)
    rows = _ratings_rows(net, args, args.events)
    if args.top is not None:
        rows = rows[: args.top]
    with open(args.out, "w", newline="") as fh:
        if args.out.endswith(".json"):
            write_ratings_json(rows, fh)
        else:
            write_ratings_csv(rows, fh)
    write_sidecar(args.out, args.seed, [args.graph] + list(args.events or []),
                  distance=args.distance, weighted_degree=args.weighted_degree)
    _emit(args, {"developers": len(rows)}, f"rated {len(rows)} developers")
    return EXIT_OK


def cmd_histogram(args) -> int:
    _require(args.ratings)
    hist = rating_histogram(read_ratings(args.ratings), args.bins)
    with open(args.out, "w", newline="") as fh:
        write_histogram_csv(hist, fh)
    write_sidecar(args.out, args.seed, [args.ratings], bins=args.bins)
    _emit(args, {"bins": [c for _, _, c in hist]},
          "\n".join(f"[{lo:.2f}, {hi:.2f})  {c}" for lo, hi, c in hist))
    return EXIT_OK


def cmd_sample(args) -> int:
    net = _load_graph(args.graph)
    args.events = None
    rows = _ratings_rows(net, args, None)
    if args.all:
        respondents = eligible_respondents(net)
    elif args.respondent:
        respondents = [args.respondent]
    else:
        raise UsageError("sample needs --respondent DEV or --all")
    seeds = np.random.SeedSequence(args.seed).spawn(len(respondents))
    samples = []
    for who, seq in zip(respondents, seeds):
        seed = args.seed if len(respondents) == 1 else seq
        samples.append(sample_survey_targets(net, rows, who, seed=seed).to_json())
    text = json.dumps(samples, indent=1) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        write_sidecar(args.out, args.seed, [args.graph])
    elif not args.quiet:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_fixture(args) -> int:
    if args.bundled:
        shutil.copyfile(bundled_corpus_path(), args.out)
        return EXIT_OK
    events = generate_fixture_corpus(
        args.seed, args.repos, args.devs, args.days,
        commits_per_day=args.commits_per_day,
        reviewed_fraction=args.reviewed_fraction,
        bot_fraction=args.bot_fraction,
    )
    with open(args.out, "w") as fh:
        write_events(events, fh)
    _emit(args, {"events": len(events)}, f"wrote {len(events)} events to {args.out}")
    return EXIT_OK


def cmd_pipeline(args) -> int:
    config = PipelineConfig(
        event_paths=list(args.events),
        output_dir=args.out_dir,
        seed=args.seed,
        window_days=args.window_days,
        distance_mode=args.distance,
        include_isolates=args.include_isolates,
        weighted_degree=args.weighted_degree,
        threads=args.threads,
        bins=args.bins,
    )
    for p in config.event_paths + ([config.include_isolates] if config.include_isolates else []):
        _require(p)
    artifacts = run_pipeline(config)
    _emit(args, {k: str(v) for k, v in artifacts.items()},
          "\n".join(str(v) for v in artifacts.values()))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _fraction(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError("must be in [0, 1]")
    return value


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    kw = {"default": argparse.SUPPRESS} if suppress else {}
    parser.add_argument("--seed", type=int, help="RNG seed (default 42)", **({"default": 42} | kw))
    parser.add_argument("--quiet", action="store_true", help="only print errors", **kw)
    parser.add_argument("--json", action="store_true", help="machine-readable stdout", **kw)


def _rating_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--distance", choices=DISTANCE_MODES, default="inverse",
                   help="edge length for path-based measures: 1/weight (inverse) or weight")
    p.add_argument("--weighted-degree", action="store_true",
                   help="use collaboration strength instead of neighbour count for degree")
    p.add_argument("--threads", type=_positive, default=1,
                   help="worker threads for closeness/betweenness (output does not depend on it)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dsnrate", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def add(name, func, help):
        p = sub.add_parser(name, help=help, description=help)
        _global_flags(p, suppress=True)
        p.set_defaults(func=func)
        return p

    p = add("ingest", cmd_ingest, "extract collaboration instances from event records")
    p.add_argument("--events", nargs="+", required=True, metavar="PATH", help="line-delimited JSON event files")
    p.add_argument("--out", required=True, help="collaboration instances (JSONL)")
    p.add_argument("--diagnostics", help="write rejected-line diagnostics here (JSONL)")
    p.add_argument("--window-days", type=_positive, default=DEFAULT_WINDOW_DAYS,
                   help="co-edition window in days (default 30)")
    p.add_argument("--roster-out", help="write the developer roster (one per line)")

    p = add("build", cmd_build, "build the weighted developer network")
    p.add_argument("--collab", required=True, help="collaboration instances (JSONL)")
    p.add_argument("--include-isolates", metavar="ROSTER", help="roster file; listed developers become nodes")
    p.add_argument("--out", required=True, help="graph JSON")

    p = add("stats", cmd_stats, "structural statistics of a network")
    p.add_argument("--graph", required=True)
    p.add_argument("--table", action="store_true", help="print a text table (default)")
    p.add_argument("--out", help="also write the statistics as JSON")

    p = add("communities", cmd_communities, "Louvain communities")
    p.add_argument("--graph", required=True)
    p.add_argument("--out", required=True)

    p = add("rate", cmd_rate, "centrality ratings per developer")
    p.add_argument("--graph", required=True)
    p.add_argument("--top", type=_positive, help="keep only the first N rows")
    _rating_flags(p)
    p.add_argument("--events", nargs="+", metavar="PATH", help="event files for commit/repo activity columns")
    p.add_argument("--out", required=True, help="ratings.csv or ratings.json")

    p = add("histogram", cmd_histogram, "bin counts of ratings")
    p.add_argument("--ratings", required=True, help="ratings CSV or JSON")
    p.add_argument("--bins", type=_positive, default=10)
    p.add_argument("--out", required=True)

    p = add("sample", cmd_sample, "draw survey targets for respondents")
    p.add_argument("--graph", required=True)
    who = p.add_mutually_exclusive_group()
    who.add_argument("--respondent")
    who.add_argument("--all", action="store_true", help="every developer with >= 5 collaborators")
    _rating_flags(p)
    p.add_argument("--out")

    p = add("fixture", cmd_fixture, "write a synthetic event corpus")
    p.add_argument("--repos", type=_positive, default=3)
    p.add_argument("--devs", type=_positive, default=12)
    p.add_argument("--days", type=_positive, default=90)
    p.add_argument("--commits-per-day", type=float, default=1.0)
    p.add_argument("--reviewed-fraction", type=_fraction, default=0.5)
    p.add_argument("--bot-fraction", type=_fraction, default=0.05)
    p.add_argument("--bundled", action="store_true", help="copy the bundled hand-traced corpus instead")
    p.add_argument("--out", required=True)

    p = add("pipeline", cmd_pipeline, "run ingest, build, stats, communities, rate and histogram")
    p.add_argument("--events", nargs="+", required=True, metavar="PATH")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--window-days", type=_positive, default=DEFAULT_WINDOW_DAYS)
    p.add_argument("--include-isolates", metavar="ROSTER")
    p.add_argument("--bins", type=_positive, default=10)
    _rating_flags(p)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.ERROR if args.quiet else logging.INFO,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except (UsageError, OSError) as exc:
        print(f"dsnrate: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except json.JSONDecodeError as exc:
        print(f"dsnrate: error: malformed JSON input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, UndefinedPathLength, ValueError, KeyError) as exc:
        print(f"dsnrate: analysis error: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS


if __name__ == "__main__":
    raise SystemExit(main())
