"""Centrality measures and the aggregated developer rating.

Shortest-path measures treat an edge of collaboration weight ``w`` as having
length ``1/w`` by default, so frequent collaborators are "closer".
``distance="raw-weight"`` uses ``w`` itself as the length instead.
"""

from __future__ import annotations

import csv
import enum
import heapq
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import IO, Iterable, Mapping, Sequence

import numpy as np

from .graph import DevNetwork, components

log = logging.getLogger(__name__)

METRICS = ("degree", "closeness", "betweenness", "eigenvector", "pagerank")
DISTANCE_MODES = ("inverse", "raw-weight")

# relative tolerance for treating two weighted path lengths as equal
_TIE_EPS = 1e-12
# sources per work unit; fixed so summation order never depends on thread count
_BLOCK = 32
# ratings are quantised so last-bit noise cannot reorder equal developers
_RATING_DIGITS = 12


class ConvergenceError(RuntimeError):
    def __init__(self, what: str, iterations: int, residual: float):
        super().__init__(f"{what} did not converge after {iterations} iterations (residual {residual:.3e})")
        self.iterations = iterations
        self.residual = residual


def _lengths(net: DevNetwork, distance: str) -> list[dict[int, float]]:
    if distance == "inverse":
        return [{j: 1.0 / w for j, w in nbrs.items()} for nbrs in net.adjacency()]
    if distance == "raw-weight":
        return [{j: float(w) for j, w in nbrs.items()} for nbrs in net.adjacency()]
    raise ValueError(f"unknown distance mode {distance!r}; expected one of {DISTANCE_MODES}")


def _dijkstra(lengths: list[dict[int, float]], s: int):
    """Single-source shortest paths with path counts and predecessor lists.

    Returns (settle order, dist, sigma, preds).
    """
    n = len(lengths)
    dist = [math.inf] * n
    sigma = [0.0] * n
    preds: list[list[int]] = [[] for _ in range(n)]
    done = [False] * n
    dist[s] = 0.0
    sigma[s] = 1.0
    heap = [(0.0, s)]
    order = []
    while heap:
        _, v = heapq.heappop(heap)
        if done[v]:
            continue
        done[v] = True
        order.append(v)
        dv = dist[v]
        for w, length in lengths[v].items():
            if done[w]:
                continue
            nd = dv + length
            dw = dist[w]
            if nd < dw - _TIE_EPS * nd:
                dist[w] = nd
                sigma[w] = sigma[v]
                preds[w] = [v]
                heapq.heappush(heap, (nd, w))
            elif abs(nd - dw) <= _TIE_EPS * nd:
                sigma[w] += sigma[v]
                preds[w].append(v)
    return order, dist, sigma, preds


def _map_blocks(fn, n: int, threads: int) -> list:
    blocks = [range(i, min(i + _BLOCK, n)) for i in range(0, n, _BLOCK)]
    if threads <= 1 or len(blocks) <= 1:
        return [fn(b) for b in blocks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, blocks))


def degree_centrality(net: DevNetwork, weighted: bool = False) -> dict[str, float]:
    """Neighbour count over ``n - 1``; with ``weighted`` the collaboration
    strength (sum of incident weights) replaces the neighbour count."""
    n = len(net)
    if n < 2:
        return {v: 0.0 for v in net.nodes}
    adj = net.adjacency()
    if weighted:
        return {v: sum(adj[i].values()) / (n - 1) for i, v in enumerate(net.nodes)}
    return {v: len(adj[i]) / (n - 1) for i, v in enumerate(net.nodes)}


def closeness_centrality(net: DevNetwork, distance: str = "inverse", threads: int = 1) -> dict[str, float]:
    """Closeness with Wasserman-Faust scaling for disconnected graphs."""
    n = len(net)
    lengths = _lengths(net, distance)

    def block(sources: range) -> list[float]:
        out = []
        for s in sources:
            order, dist, _, _ = _dijkstra(lengths, s)
            reach = len(order) - 1
            total = sum(dist[v] for v in order)
            if reach == 0 or total <= 0.0:
                out.append(0.0)
            else:
                out.append((reach / total) * (reach / (n - 1)))
        return out

    values = [x for part in _map_blocks(block, n, threads) for x in part]
    return dict(zip(net.nodes, values))


def betweenness_centrality(net: DevNetwork, distance: str = "inverse", threads: int = 1) -> dict[str, float]:
    """Brandes betweenness on weighted shortest paths, normalised to [0, 1]."""
    n = len(net)
    if n < 3:
        return {v: 0.0 for v in net.nodes}
    lengths = _lengths(net, distance)

    def block(sources: range) -> np.ndarray:
        acc = np.zeros(n)
        for s in sources:
            order, _, sigma, preds = _dijkstra(lengths, s)
            delta = [0.0] * n
            for w in reversed(order):
                coeff = (1.0 + delta[w]) / sigma[w]
                for v in preds[w]:
                    delta[v] += sigma[v] * coeff
            delta[s] = 0.0
            acc += delta
        return acc

    total = np.zeros(n)
    for part in _map_blocks(block, n, threads):
        total += part
    # every unordered pair was counted from both ends
    scale = 1.0 / ((n - 1) * (n - 2))
    return {v: float(total[i] * scale) for i, v in enumerate(net.nodes)}


def _edge_arrays(net: DevNetwork, members: Sequence[str]):
    pos = {v: i for i, v in enumerate(members)}
    src, dst, wt = [], [], []
    for (a, b), w in net.edges.items():
        if a in pos and b in pos:
            src += [pos[a], pos[b]]
            dst += [pos[b], pos[a]]
            wt += [w.total, w.total]
    return np.array(src, dtype=np.int64), np.array(dst, dtype=np.int64), np.array(wt, dtype=float)


def eigenvector_centrality(
    net: DevNetwork, max_iter: int = 1000, tol: float = 1e-6
) -> dict[str, float]:
    """Dominant eigenvector of the weighted adjacency matrix.

    Computed on the largest connected component only; every other node is 0.
    Iterates ``x <- (A + I) x`` (same eigenvectors as ``A``, but converges on
    bipartite components too) from a uniform start, L2-normalising each step.
    """
    out = {v: 0.0 for v in net.nodes}
    if net.edge_count == 0:
        log.warning("eigenvector centrality: network has no edges, all values are 0")
        return out
    members = components(net)[0]
    k = len(members)
    src, dst, wt = _edge_arrays(net, members)
    x = np.full(k, 1.0 / math.sqrt(k))
    threshold = tol / k
    change = math.inf
    for _ in range(max_iter):
        y = x + np.bincount(dst, weights=wt * x[src], minlength=k)
        y /= np.linalg.norm(y)
        change = float(np.max(np.abs(y - x)))
        x = y
        if change < threshold:
            break
    else:
        raise ConvergenceError("eigenvector centrality", max_iter, change)
    for v, val in zip(members, x):
        out[v] = float(val)
    return out


def pagerank(
    net: DevNetwork, alpha: float = 0.85, tol: float = 1e-8, max_iter: int = 200
) -> dict[str, float]:
    """Weighted PageRank; nodes without edges teleport uniformly."""
    n = len(net)
    if n == 0:
        return {}
    src, dst, wt = _edge_arrays(net, net.nodes)
    strength = np.bincount(src, weights=wt, minlength=n)
    dangling = strength == 0
    share = np.zeros_like(wt)
    if len(wt):
        share = wt / strength[src]
    x = np.full(n, 1.0 / n)
    residual = math.inf
    for _ in range(max_iter):
        spread = np.bincount(dst, weights=share * x[src], minlength=n)
        y = alpha * (spread + x[dangling].sum() / n) + (1.0 - alpha) / n
        residual = float(np.abs(y - x).sum())
        x = y
        if residual < tol:
            break
    else:
        raise ConvergenceError("pagerank", max_iter, residual)
    x = x / x.sum()
    return {v: float(val) for v, val in zip(net.nodes, x)}


# ---------------------------------------------------------------------------
# aggregation


class Band(str, enum.Enum):
    HIGH = "High"
    AVERAGE = "Average"
    LOW = "Low"


def band_for(rating: float) -> Band:
    if rating > 0.2:
        return Band.HIGH
    if rating < 0.1:
        return Band.LOW
    return Band.AVERAGE


@dataclass
class CentralityVector:
    developer: str
    raw: dict[str, float]
    normalized: dict[str, float]
    rating: float


def min_max(values: Mapping[str, float]) -> dict[str, float]:
    """Min-max scale to [0, 1]; a constant input maps to all zeros."""
    if not values:
        return {}
    lo, hi = min(values.values()), max(values.values())
    if hi == lo:
        return {k: 0.0 for k in values}
    span = hi - lo
    return {k: (v - lo) / span for k, v in values.items()}


def aggregate_ratings(metrics: Mapping[str, Mapping[str, float]]) -> list[CentralityVector]:
    """Combine the five centrality maps into one rating per developer.

    Each metric is min-max normalised across developers, the five normalised
    values are summed, and the sums are min-max normalised again.
    """
    missing = set(METRICS) - set(metrics)
    if missing:
        raise ValueError(f"missing metrics: {sorted(missing)}")
    keys = set(metrics[METRICS[0]])
    for name in METRICS[1:]:
        if set(metrics[name]) != keys:
            raise ValueError(f"metric {name!r} covers a different developer set")
    developers = sorted(keys)
    normalized = {name: min_max(metrics[name]) for name in METRICS}
    sums = {d: sum(normalized[name][d] for name in METRICS) for d in developers}
    ratings = min_max(sums)
    return [
        CentralityVector(
            developer=d,
            raw={name: float(metrics[name][d]) for name in METRICS},
            normalized={name: normalized[name][d] for name in METRICS},
            rating=round(ratings[d], _RATING_DIGITS),
        )
        for d in developers
    ]


def compute_ratings(
    net: DevNetwork,
    distance: str = "inverse",
    weighted_degree: bool = False,
    threads: int = 1,
) -> list[CentralityVector]:
    metrics = {
        "degree": degree_centrality(net, weighted=weighted_degree),
        "closeness": closeness_centrality(net, distance, threads),
        "betweenness": betweenness_centrality(net, distance, threads),
        "eigenvector": eigenvector_centrality(net),
        "pagerank": pagerank(net),
    }
    return aggregate_ratings(metrics)


@dataclass(frozen=True)
class ActivityCounts:
    commit_count: int = 0
    repo_count: int = 0
    collaborator_count: int = 0


@dataclass
class RatingRow:
    rank: int
    developer: str
    rating: float
    band: Band
    commit_count: int = 0
    repo_count: int = 0
    collaborator_count: int = 0
    raw: dict[str, float] = field(default_factory=dict)


def activity_counts(net: DevNetwork, events: Iterable | None = None) -> dict[str, ActivityCounts]:
    """Join commit/repo involvement from events with neighbour counts from ``net``."""
    from .ingest import developer_activity

    acts = developer_activity(events) if events is not None else {}
    devs = set(net.nodes) | set(acts)
    out = {}
    for d in devs:
        a = acts.get(d)
        out[d] = ActivityCounts(
            commit_count=a.commit_count if a else 0,
            repo_count=a.repo_count if a else 0,
            collaborator_count=net.degree(d) if d in net.index else 0,
        )
    return out


def rating_table(
    vectors: Iterable[CentralityVector],
    activity: Mapping[str, ActivityCounts] | None = None,
) -> list[RatingRow]:
    activity = activity or {}
    ordered = sorted(vectors, key=lambda v: (-v.rating, v.developer))
    rows = []
    for rank, vec in enumerate(ordered, start=1):
        act = activity.get(vec.developer, ActivityCounts())
        rows.append(
            RatingRow(
                rank=rank,
                developer=vec.developer,
                rating=vec.rating,
                band=band_for(vec.rating),
                commit_count=act.commit_count,
                repo_count=act.repo_count,
                collaborator_count=act.collaborator_count,
                raw=dict(vec.raw),
            )
        )
    return rows


def top_share_commit_involvement(rows: Sequence[RatingRow], events: Iterable, fraction: float = 0.1) -> float:
    """Share of human-authored commits whose author or a reviewer is in the
    top ``fraction`` of the rating table."""
    from .ingest import commit_participants

    cutoff = int(math.ceil(len(rows) * fraction))
    top = {r.developer for r in rows[:cutoff]}
    total = hit = 0
    for _commit, people in commit_participants(events):
        total += 1
        if people & top:
            hit += 1
    return hit / total if total else 0.0


# ---------------------------------------------------------------------------
# output

CSV_COLUMNS = (
    "rank", "developer", "rating", "band", *METRICS,
    "commit_count", "repo_count", "collaborator_count",
)


def write_ratings_csv(rows: Iterable[RatingRow], fh: IO[str]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow(
            [r.rank, r.developer, f"{r.rating:.9f}", r.band.value]
            + [f"{r.raw[m]:.9f}" for m in METRICS]
            + [r.commit_count, r.repo_count, r.collaborator_count]
        )


def rows_to_json(rows: Iterable[RatingRow]) -> list[dict]:
    return [
        {
            "rank": r.rank,
            "developer": r.developer,
            "rating": r.rating,
            "band": r.band.value,
            **{m: r.raw[m] for m in METRICS},
            "commit_count": r.commit_count,
            "repo_count": r.repo_count,
            "collaborator_count": r.collaborator_count,
        }
        for r in rows
    ]


def write_ratings_json(rows: Iterable[RatingRow], fh: IO[str]) -> None:
    json.dump(rows_to_json(rows), fh, indent=1)
    fh.write("\n")


def read_ratings(path: str) -> list[float]:
    """Ratings column from a ratings CSV or JSON file."""
    if path.endswith(".json"):
        with open(path) as fh:
            return [float(r["rating"]) for r in json.load(fh)]
    with open(path, newline="") as fh:
        return [float(r["rating"]) for r in csv.DictReader(fh)]


def rating_histogram(ratings: Sequence[float], bins: int) -> list[tuple[float, float, int]]:
    """Equal-width bin counts over [0, 1]; the last bin includes 1.0."""
    if bins < 1:
        raise ValueError("bins must be >= 1")
    counts, edges = np.histogram(np.asarray(ratings, dtype=float), bins=bins, range=(0.0, 1.0))
    return [(float(edges[i]), float(edges[i + 1]), int(counts[i])) for i in range(bins)]


def write_histogram_csv(hist: Iterable[tuple[float, float, int]], fh: IO[str]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(("bin_start", "bin_end", "count"))
    for lo, hi, count in hist:
        writer.writerow((f"{lo:.6f}", f"{hi:.6f}", count))
