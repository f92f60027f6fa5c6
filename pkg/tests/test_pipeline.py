from __future__ import annotations

import csv
import json
from pathlib import Path

import pytest

from conftest import DATA
from dsnrate import cli, pipeline
from dsnrate.pipeline import ARTIFACTS, PipelineConfig, run_pipeline


def run(*argv) -> int:
    return cli.main([str(a) for a in argv])


@pytest.fixture(scope="module")
def artifacts(tmp_path_factory, corpus_path):
    out = tmp_path_factory.mktemp("pipeline")
    run_pipeline(PipelineConfig([str(corpus_path)], str(out), seed=42))
    return out


def test_all_artifacts_written(artifacts):
    for name in ARTIFACTS:
        assert (artifacts / name).is_file()
        meta = json.loads((artifacts / f"{name}.meta.json").read_text())
        assert meta["seed"] == 42
        assert meta["inputs"][0]["name"] == "fixture_events.jsonl"


def test_stats_match_golden(artifacts):
    golden = json.loads((DATA / "fixture_stats_golden.json").read_text())
    got = json.loads((artifacts / "stats.json").read_text())
    for key, value in golden.items():
        if isinstance(value, dict):
            for k, v in value.items():
                assert got[key][k] == pytest.approx(v, abs=1e-12), (key, k)
        else:
            assert got[key] == pytest.approx(value, abs=1e-12), key


def test_collab_matches_golden(artifacts):
    got = sorted((artifacts / "collab.jsonl").read_text().splitlines())
    want = sorted((DATA / "fixture_collab_golden.jsonl").read_text().splitlines())
    assert [json.loads(x) for x in got] == [json.loads(x) for x in want]


def test_ratings_csv_shape(artifacts):
    with open(artifacts / "ratings.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert [int(r["rank"]) for r in rows] == list(range(1, 9))
    ratings = [float(r["rating"]) for r in rows]
    assert ratings == sorted(ratings, reverse=True)
    assert ratings[0] == 1.0 and ratings[-1] == 0.0
    assert {r["developer"]: int(r["collaborator_count"]) for r in rows}["bob"] == 5


def test_histogram_totals(artifacts):
    with open(artifacts / "hist.csv", newline="") as fh:
        assert sum(int(r["count"]) for r in csv.DictReader(fh)) == 8


def test_rerun_is_byte_identical(artifacts, corpus_path, tmp_path):
    run_pipeline(PipelineConfig([str(corpus_path)], str(tmp_path), seed=42))
    for path in artifacts.iterdir():
        assert (tmp_path / path.name).read_bytes() == path.read_bytes(), path.name


def test_empty_events(tmp_path):
    events = tmp_path / "events.jsonl"
    events.write_text("")
    assert run("pipeline", "--events", events, "--out-dir", tmp_path / "out", "--quiet") == 0
    assert (tmp_path / "out" / "collab.jsonl").read_text() == ""
    assert json.loads((tmp_path / "out" / "graph.json").read_text()) == {"nodes": [], "edges": []}


def test_missing_input(tmp_path, capsys):
    missing = tmp_path / "nope.jsonl"
    assert run("pipeline", "--events", missing, "--out-dir", tmp_path / "out") == 2
    assert str(missing) in capsys.readouterr().err


def test_failure_removes_partial_outputs(tmp_path, corpus_path, monkeypatch):
    def boom(*args, **kwargs):
        raise ValueError("synthetic failure")

    monkeypatch.setattr(pipeline, "compute_ratings", boom)
    assert run("pipeline", "--events", corpus_path, "--out-dir", tmp_path, "--quiet") == 1
    assert list(tmp_path.iterdir()) == []


def test_window_days_validated():
    with pytest.raises(ValueError):
        PipelineConfig(["x"], "out", window_days=0)


def test_isolates_from_roster(tmp_path, corpus_path):
    roster = tmp_path / "roster.txt"
    roster.write_text("alice\nzoe\n")
    run_pipeline(PipelineConfig([str(corpus_path)], str(tmp_path / "o"), include_isolates=str(roster)))
    s = json.loads((tmp_path / "o" / "stats.json").read_text())
    assert (s["node_count"], s["isolate_count"], s["component_count"]) == (9, 1, 2)


# ---------------------------------------------------------------------------
# individual subcommands

SUBCOMMAND_FLAGS = {
    "ingest": ["--events", "--out", "--diagnostics"],
    "build": ["--collab", "--include-isolates", "--out"],
    "stats": ["--graph", "--seed", "--json", "--table"],
    "communities": ["--graph", "--seed", "--out"],
    "rate": ["--graph", "--top", "--distance", "--weighted-degree", "--out", "--threads"],
    "histogram": ["--ratings", "--bins", "--out"],
    "sample": ["--graph", "--respondent", "--seed", "--out"],
    "fixture": ["--seed", "--repos", "--devs", "--days", "--out"],
    "pipeline": ["--events", "--out-dir", "--seed", "--include-isolates", "--distance"],
}


@pytest.mark.parametrize("command", sorted(SUBCOMMAND_FLAGS))
def test_help_documents_flags(command, capsys):
    with pytest.raises(SystemExit) as exc:
        run(command, "--help")
    assert exc.value.code == 0
    text = capsys.readouterr().out
    for flag in SUBCOMMAND_FLAGS[command] + ["--quiet", "--json"]:
        assert flag in text, (command, flag)


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        run("rate")
    assert exc.value.code == 2


def test_step_by_step_matches_pipeline(tmp_path, corpus_path, artifacts):
    collab, graph = tmp_path / "collab.jsonl", tmp_path / "graph.json"
    diags, roster = tmp_path / "diag.jsonl", tmp_path / "roster.txt"
    assert run("ingest", "--events", corpus_path, "--out", collab, "--diagnostics", diags, "--roster-out", roster) == 0
    assert collab.read_bytes() == (artifacts / "collab.jsonl").read_bytes()
    assert diags.read_text() == ""
    assert len(roster.read_text().split()) == 8
    assert run("build", "--collab", collab, "--out", graph) == 0
    assert graph.read_bytes() == (artifacts / "graph.json").read_bytes()
    ratings = tmp_path / "ratings.csv"
    assert run("rate", "--graph", graph, "--events", corpus_path, "--out", ratings) == 0
    assert ratings.read_bytes() == (artifacts / "ratings.csv").read_bytes()
    hist = tmp_path / "hist.csv"
    assert run("histogram", "--ratings", ratings, "--bins", 10, "--out", hist) == 0
    assert hist.read_bytes() == (artifacts / "hist.csv").read_bytes()
    comms = tmp_path / "communities.json"
    assert run("communities", "--graph", graph, "--seed", 42, "--out", comms) == 0
    assert comms.read_bytes() == (artifacts / "communities.json").read_bytes()
    st = tmp_path / "stats.json"
    assert run("stats", "--graph", graph, "--out", st, "--quiet") == 0
    assert st.read_bytes() == (artifacts / "stats.json").read_bytes()


def test_stats_json_and_table(artifacts, capsys):
    assert run("stats", "--graph", artifacts / "graph.json", "--json") == 0
    assert json.loads(capsys.readouterr().out)["edge_count"] == 14
    assert run("stats", "--graph", artifacts / "graph.json", "--table") == 0
    assert "Avg. clustering coefficient" in capsys.readouterr().out


def test_rate_json_top_and_histogram(artifacts, tmp_path):
    out = tmp_path / "ratings.json"
    assert run("rate", "--graph", artifacts / "graph.json", "--top", 3, "--out", out,
               "--distance", "raw-weight", "--weighted-degree") == 0
    rows = json.loads(out.read_text())
    assert [r["rank"] for r in rows] == [1, 2, 3]
    hist = tmp_path / "h.csv"
    assert run("histogram", "--ratings", out, "--bins", 5, "--out", hist) == 0
    assert len(hist.read_text().splitlines()) == 6


def test_rate_threads_byte_identical(artifacts, tmp_path):
    one, eight = tmp_path / "1.csv", tmp_path / "8.csv"
    assert run("rate", "--graph", artifacts / "graph.json", "--threads", 1, "--out", one) == 0
    assert run("rate", "--graph", artifacts / "graph.json", "--threads", 8, "--out", eight) == 0
    assert one.read_bytes() == eight.read_bytes()


def test_fixture_and_sample_commands(tmp_path):
    events = tmp_path / "events.jsonl"
    assert run("fixture", "--seed", 3, "--repos", 4, "--devs", 16, "--days", 120, "--out", events, "--quiet") == 0
    out = tmp_path / "o"
    assert run("pipeline", "--events", events, "--out-dir", out, "--quiet") == 0
    samples = tmp_path / "samples.json"
    assert run("sample", "--graph", out / "graph.json", "--all", "--seed", 5, "--out", samples) == 0
    doc = json.loads(samples.read_text())
    assert doc and all(len(s["picks"]) == 10 for s in doc)
    single = tmp_path / "one.json"
    who = doc[0]["respondent"]
    assert run("sample", "--graph", out / "graph.json", "--respondent", who, "--out", single) == 0
    assert json.loads(single.read_text())[0]["respondent"] == who


def test_sample_needs_a_respondent(artifacts, capsys):
    assert run("sample", "--graph", artifacts / "graph.json") == 2


def test_sample_small_graph_is_analysis_error(artifacts, capsys):
    assert run("sample", "--graph", artifacts / "graph.json", "--respondent", "bob") == 1
    assert "insufficient population" in capsys.readouterr().err


def test_fixture_bundled(tmp_path, corpus_path):
    out = tmp_path / "bundled.jsonl"
    assert run("fixture", "--bundled", "--out", out) == 0
    assert out.read_bytes() == Path(corpus_path).read_bytes()


def test_malformed_graph_is_usage_error(tmp_path):
    bad = tmp_path / "g.json"
    bad.write_text("{")
    assert run("stats", "--graph", bad) == 2
