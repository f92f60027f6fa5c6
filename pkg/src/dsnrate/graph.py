"""Weighted developer network and its structural statistics."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import asdict, dataclass, field
from typing import IO, Iterable

from .ingest import CollaborationInstance, CollaborationKind


@dataclass(frozen=True)
class EdgeWeight:
    co_edition_count: int = 0
    review_count: int = 0

    @property
    def total(self) -> int:
        return self.co_edition_count + self.review_count


class DevNetwork:
    """Undirected developer graph; edges keyed by the sorted developer pair.

    Treat instances as immutable once built. ``nodes`` is the lexicographic
    node order used as ``node_index`` everywhere else.
    """

    def __init__(self, nodes: Iterable[str] = (), edges: dict[tuple[str, str], EdgeWeight] | None = None):
        edges = dict(edges or {})
        node_set = set(nodes)
        for a, b in edges:
            if a == b:
                raise ValueError(f"self-loop on {a!r}")
            if not a < b:
                raise ValueError(f"edge key {(a, b)!r} is not ordered")
            node_set.update((a, b))
        for key, w in edges.items():
            if w.total < 1 or w.co_edition_count < 0 or w.review_count < 0:
                raise ValueError(f"invalid weight on {key!r}: {w}")
        self.nodes: list[str] = sorted(node_set)
        self.index: dict[str, int] = {v: i for i, v in enumerate(self.nodes)}
        self.edges: dict[tuple[str, str], EdgeWeight] = dict(sorted(edges.items()))
        self._adj: list[dict[int, int]] = [dict() for _ in self.nodes]
        for (a, b), w in self.edges.items():
            i, j = self.index[a], self.index[b]
            self._adj[i][j] = w.total
            self._adj[j][i] = w.total
        for nbrs in self._adj:
            # neighbour iteration in node_index order
            items = sorted(nbrs.items())
            nbrs.clear()
            nbrs.update(items)

    def __len__(self) -> int:
        return len(self.nodes)

    def __repr__(self) -> str:
        return f"DevNetwork(nodes={len(self.nodes)}, edges={len(self.edges)})"

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def weight(self, u: str, v: str) -> EdgeWeight | None:
        key = (u, v) if u < v else (v, u)
        return self.edges.get(key)

    def neighbors(self, v: str) -> list[str]:
        return [self.nodes[j] for j in self._adj[self.index[v]]]

    def degree(self, v: str) -> int:
        return len(self._adj[self.index[v]])

    def adjacency(self) -> list[dict[int, int]]:
        """Index-based adjacency: ``adj[i][j]`` is the total weight of edge i-j."""
        return self._adj

    def subgraph(self, keep: Iterable[str]) -> "DevNetwork":
        keep = set(keep)
        edges = {k: w for k, w in self.edges.items() if k[0] in keep and k[1] in keep}
        return DevNetwork(keep, edges)

    def to_json(self) -> dict:
        return {
            "nodes": list(self.nodes),
            "edges": [
                {"a": a, "b": b, "co_edition": w.co_edition_count, "review": w.review_count}
                for (a, b), w in self.edges.items()
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "DevNetwork":
        edges = {}
        for e in obj.get("edges", []):
            a, b = e["a"], e["b"]
            if a > b:
                a, b = b, a
            edges[(a, b)] = EdgeWeight(int(e.get("co_edition", 0)), int(e.get("review", 0)))
        return cls(obj.get("nodes", []), edges)


def build_network(
    instances: Iterable[CollaborationInstance], roster: Iterable[str] = ()
) -> DevNetwork:
    """Collapse collaboration instances into weighted edges.

    Developers listed in ``roster`` are added even without any collaboration,
    which is how isolates enter the graph.
    """
    counts: dict[tuple[str, str], list[int]] = {}
    for inst in instances:
        if inst.a == inst.b:
            raise ValueError(f"self-collaboration instance for {inst.a!r}")
        key = (inst.a, inst.b) if inst.a < inst.b else (inst.b, inst.a)
        c = counts.setdefault(key, [0, 0])
        if inst.kind is CollaborationKind.CO_EDITION:
            c[0] += 1
        else:
            c[1] += 1
    edges = {k: EdgeWeight(co, rv) for k, (co, rv) in counts.items()}
    return DevNetwork(roster, edges)


def dump_network(net: DevNetwork, fh: IO[str]) -> None:
    json.dump(net.to_json(), fh, indent=1)
    fh.write("\n")


def load_network(fh: IO[str]) -> DevNetwork:
    return DevNetwork.from_json(json.load(fh))


# ---------------------------------------------------------------------------
# structure


def components(net: DevNetwork) -> list[list[str]]:
    """Connected components, largest first; equal sizes ordered by smallest member.

    Each component is returned as a sorted list.
    """
    adj = net.adjacency()
    seen = [False] * len(net)
    comps: list[list[int]] = []
    for s in range(len(net)):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    queue.append(w)
        comp.sort()
        comps.append(comp)
    comps.sort(key=lambda c: (-len(c), c[0]))
    return [[net.nodes[i] for i in c] for c in comps]


def largest_component(net: DevNetwork) -> list[str]:
    comps = components(net)
    return comps[0] if comps else []


def local_clustering(net: DevNetwork) -> dict[str, float]:
    adj = net.adjacency()
    out = {}
    for i, v in enumerate(net.nodes):
        nbrs = list(adj[i])
        k = len(nbrs)
        if k < 2:
            out[v] = 0.0
            continue
        links = 0
        for x in range(k):
            ax = adj[nbrs[x]]
            for y in range(x + 1, k):
                if nbrs[y] in ax:
                    links += 1
        out[v] = 2.0 * links / (k * (k - 1))
    return out


def avg_clustering(net: DevNetwork) -> float:
    """Mean unweighted local clustering coefficient; 0 for an empty network."""
    if not len(net):
        return 0.0
    values = local_clustering(net)
    return sum(values[v] for v in net.nodes) / len(net)


def bfs_hops(net: DevNetwork, source: str) -> dict[str, int]:
    adj = net.adjacency()
    s = net.index[source]
    dist = {s: 0}
    queue = deque([s])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return {net.nodes[i]: d for i, d in dist.items()}


def hop_distances(net: DevNetwork) -> dict[str, dict[str, int]]:
    """All-pairs unweighted hop distances between mutually reachable nodes."""
    return {v: bfs_hops(net, v) for v in net.nodes}


class UndefinedPathLength(ValueError):
    pass


def avg_shortest_path_hops(net: DevNetwork, within: Iterable[str] | None = None) -> float:
    """Mean hop distance over all unordered pairs of a connected node set."""
    members = sorted(set(net.nodes if within is None else within))
    if len(members) < 2:
        raise UndefinedPathLength("undefined: fewer than 2 nodes")
    sub = net.subgraph(members)
    total = 0
    for v in sub.nodes:
        dist = bfs_hops(sub, v)
        if len(dist) != len(sub):
            raise UndefinedPathLength("undefined: node set is not connected")
        total += sum(dist.values())
    pairs = len(members) * (len(members) - 1)
    return total / pairs


def density(net: DevNetwork) -> float:
    n = len(net)
    if n < 2:
        return 0.0
    return 2.0 * net.edge_count / (n * (n - 1))


# ---------------------------------------------------------------------------
# summary


@dataclass
class ComponentStats:
    node_count: int = 0
    edge_count: int = 0
    avg_shortest_path_hops: float | None = None


@dataclass
class NetworkStats:
    node_count: int
    edge_count: int
    component_count: int
    isolate_count: int
    density: float
    avg_clustering: float
    largest_component: ComponentStats = field(default_factory=ComponentStats)
    community_count: int = 0
    large_community_count: int = 0
    seed: int = 42

    def to_json(self) -> dict:
        return asdict(self)

    def table(self) -> str:
        lc = self.largest_component
        pct = f" ({100.0 * lc.node_count / self.node_count:.1f}%)" if self.node_count else ""
        asp = "undefined" if lc.avg_shortest_path_hops is None else f"{lc.avg_shortest_path_hops:.3f}"
        rows = [
            ("Nodes", f"{self.node_count:,}"),
            ("Edges", f"{self.edge_count:,}"),
            ("Components", f"{self.component_count:,}"),
            ("Isolates", f"{self.isolate_count:,}"),
            ("Network density", f"{self.density:.3f}"),
            ("Avg. clustering coefficient", f"{self.avg_clustering:.3f}"),
            ("Total communities", f"{self.community_count:,}"),
            ("Communities with >= 100 nodes", f"{self.large_community_count:,}"),
            ("Largest component nodes", f"{lc.node_count:,}{pct}"),
            ("Largest component edges", f"{lc.edge_count:,}"),
            ("Avg. shortest path length", asp),
        ]
        width = max(len(k) for k, _ in rows)
        return "\n".join(f"{k:<{width}}  {v:>12}" for k, v in rows)


LARGE_COMMUNITY = 100


def stats(net: DevNetwork, seed: int = 42) -> NetworkStats:
    from .louvain import louvain_communities

    comps = components(net)
    isolates = sum(1 for v in net.nodes if net.degree(v) == 0)
    lc = ComponentStats()
    if comps:
        big = comps[0]
        sub = net.subgraph(big)
        lc = ComponentStats(
            node_count=len(big),
            edge_count=sub.edge_count,
            avg_shortest_path_hops=avg_shortest_path_hops(sub) if len(big) >= 2 else None,
        )
    communities = louvain_communities(net, seed=seed)
    return NetworkStats(
        node_count=net.node_count,
        edge_count=net.edge_count,
        component_count=len(comps),
        isolate_count=isolates,
        density=density(net),
        avg_clustering=avg_clustering(net),
        largest_component=lc,
        community_count=len(communities),
        large_community_count=sum(1 for c in communities if len(c) >= LARGE_COMMUNITY),
        seed=seed,
    )
