"""Seeded Louvain community detection on a :class:`DevNetwork`."""

from __future__ import annotations

import numpy as np

from .graph import DevNetwork


def modularity(net: DevNetwork, communities: list[list[str]], resolution: float = 1.0) -> float:
    """Weighted Newman modularity of a partition of ``net``."""
    m = sum(w.total for w in net.edges.values())
    if m == 0:
        return 0.0
    label = {}
    for c, members in enumerate(communities):
        for v in members:
            label[v] = c
    internal = [0.0] * len(communities)
    degree_sum = [0.0] * len(communities)
    for (a, b), w in net.edges.items():
        degree_sum[label[a]] += w.total
        degree_sum[label[b]] += w.total
        if label[a] == label[b]:
            internal[label[a]] += w.total
    return sum(
        internal[c] / m - resolution * (degree_sum[c] / (2.0 * m)) ** 2
        for c in range(len(communities))
    )


def _one_level(adj, degrees, m, resolution, rng):
    """Local moving phase. Returns (community label per node, moved?)."""
    n = len(adj)
    comm = list(range(n))
    tot = list(degrees)
    order = rng.permutation(n)
    moved_any = False
    while True:
        moved = False
        for i in order:
            i = int(i)
            ki = degrees[i]
            ci = comm[i]
            links: dict[int, float] = {}
            for j, w in adj[i].items():
                if j != i:
                    links[comm[j]] = links.get(comm[j], 0.0) + w
            tot[ci] -= ki
            best = ci
            best_gain = links.get(ci, 0.0) - resolution * tot[ci] * ki / (2.0 * m)
            for c, w in links.items():
                gain = w - resolution * tot[c] * ki / (2.0 * m)
                if gain > best_gain:
                    best, best_gain = c, gain
            tot[best] += ki
            if best != ci:
                comm[i] = best
                moved = True
                moved_any = True
        if not moved:
            break
    return comm, moved_any


def _aggregate(adj, comm):
    labels = {}
    for c in comm:
        if c not in labels:
            labels[c] = len(labels)
    new_adj: list[dict[int, float]] = [dict() for _ in labels]
    for i, nbrs in enumerate(adj):
        ci = labels[comm[i]]
        for j, w in nbrs.items():
            if j < i:
                continue
            cj = labels[comm[j]]
            new_adj[ci][cj] = new_adj[ci].get(cj, 0.0) + w
            if ci != cj:
                new_adj[cj][ci] = new_adj[cj].get(ci, 0.0) + w
    return new_adj, [labels[c] for c in comm]


def louvain_communities(net: DevNetwork, seed: int = 42, resolution: float = 1.0) -> list[list[str]]:
    """Partition ``net`` by greedy two-phase modularity optimisation.

    Nodes are visited in ``node_index`` order shuffled by ``seed``, and every
    later level reshuffles with the same generator, so a fixed seed always
    gives the same partition. Communities come back sorted internally and
    ordered largest first, ties by smallest member.
    """
    n = len(net)
    if n == 0:
        return []
    m = float(sum(w.total for w in net.edges.values()))
    membership = list(range(n))
    if m > 0:
        rng = np.random.default_rng(seed)
        # adj[i][i] holds the self-loop weight of an aggregated node
        adj: list[dict[int, float]] = [
            {j: float(w) for j, w in nbrs.items()} for nbrs in net.adjacency()
        ]
        while True:
            degrees = [sum(nbrs.values()) + nbrs.get(i, 0.0) for i, nbrs in enumerate(adj)]
            comm, moved = _one_level(adj, degrees, m, resolution, rng)
            if not moved:
                break
            adj, relabel = _aggregate(adj, comm)
            membership = [relabel[c] for c in membership]
    groups: dict[int, list[str]] = {}
    for i, c in enumerate(membership):
        groups.setdefault(c, []).append(net.nodes[i])
    out = [sorted(g) for g in groups.values()]
    out.sort(key=lambda c: (-len(c), c[0]))
    return out
