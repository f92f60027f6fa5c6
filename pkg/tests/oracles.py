"""Brute-force reference computations used only by the tests.

Everything here works from a plain ``{(a, b): weight}`` edge dict and never
touches the package's own traversal code.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from dsnrate.graph import DevNetwork, EdgeWeight


def random_weighted_edges(rng: np.random.Generator, n_min=5, n_max=10, p=0.4, w_min=1, w_max=5):
    n = int(rng.integers(n_min, n_max + 1))
    nodes = [f"d{i:03d}" for i in range(n)]
    edges = {}
    for a, b in itertools.combinations(nodes, 2):
        if rng.random() < p:
            edges[(a, b)] = int(rng.integers(w_min, w_max + 1))
    return nodes, edges


def to_network(nodes, edges) -> DevNetwork:
    # split each weight across the two kinds; only the total matters downstream
    return DevNetwork(nodes, {k: EdgeWeight(w // 2, w - w // 2) for k, w in edges.items()})


def floyd_warshall(nodes, edges, length=lambda w: Fraction(1, w)):
    """Exact all-pairs distances; ``None`` where unreachable."""
    INF = None
    d = {u: {v: (Fraction(0) if u == v else INF) for v in nodes} for u in nodes}
    for (a, b), w in edges.items():
        ln = length(w)
        d[a][b] = d[b][a] = ln
    for k in nodes:
        for i in nodes:
            if d[i][k] is None:
                continue
            for j in nodes:
                if d[k][j] is None:
                    continue
                cand = d[i][k] + d[k][j]
                if d[i][j] is None or cand < d[i][j]:
                    d[i][j] = cand
    return d


def hop_matrix(nodes, edges):
    return floyd_warshall(nodes, edges, length=lambda w: 1)


def degree_oracle(nodes, edges):
    n = len(nodes)
    if n < 2:
        return {v: 0.0 for v in nodes}
    count = {v: 0 for v in nodes}
    for a, b in edges:
        count[a] += 1
        count[b] += 1
    return {v: count[v] / (n - 1) for v in nodes}


def closeness_oracle(nodes, edges, length=lambda w: Fraction(1, w)):
    n = len(nodes)
    d = floyd_warshall(nodes, edges, length)
    out = {}
    for v in nodes:
        reach = [u for u in nodes if u != v and d[v][u] is not None]
        total = sum((d[v][u] for u in reach), Fraction(0))
        if not reach:
            out[v] = 0.0
        else:
            out[v] = float(Fraction(len(reach)) / total * Fraction(len(reach), n - 1))
    return out


def shortest_paths(nodes, edges, s, t, d, length=lambda w: Fraction(1, w)):
    """Enumerate every shortest s-t path by DFS pruned on the exact distance."""
    adj = {v: {} for v in nodes}
    for (a, b), w in edges.items():
        adj[a][b] = adj[b][a] = length(w)
    target = d[s][t]
    paths = []

    def walk(v, so_far, path):
        if so_far > target:
            return
        if v == t:
            if so_far == target:
                paths.append(list(path))
            return
        for u, ln in adj[v].items():
            if u not in path:
                path.append(u)
                walk(u, so_far + ln, path)
                path.pop()

    walk(s, Fraction(0), [s])
    return paths


def betweenness_oracle(nodes, edges, length=lambda w: Fraction(1, w)):
    n = len(nodes)
    if n < 3:
        return {v: 0.0 for v in nodes}
    d = floyd_warshall(nodes, edges, length)
    acc = {v: Fraction(0) for v in nodes}
    for s, t in itertools.combinations(nodes, 2):
        if d[s][t] is None:
            continue
        paths = shortest_paths(nodes, edges, s, t, d, length)
        for path in paths:
            for v in path[1:-1]:
                acc[v] += Fraction(1, len(paths))
    scale = Fraction(2, (n - 1) * (n - 2))
    return {v: float(acc[v] * scale) for v in nodes}


def components_oracle(nodes, edges):
    d = hop_matrix(nodes, edges)
    seen, comps = set(), []
    for v in sorted(nodes):
        if v in seen:
            continue
        comp = sorted(u for u in nodes if d[v][u] is not None)
        seen.update(comp)
        comps.append(comp)
    comps.sort(key=lambda c: (-len(c), c[0]))
    return comps


def eigenvector_oracle(nodes, edges, squarings=17):
    """Power iteration on A + I, 2**17 (> 1e5) steps done by repeated squaring,
    restricted to the largest component."""
    out = {v: 0.0 for v in nodes}
    if not edges:
        return out
    comp = components_oracle(nodes, edges)[0]
    pos = {v: i for i, v in enumerate(comp)}
    k = len(comp)
    m = np.eye(k)
    for (a, b), w in edges.items():
        if a in pos and b in pos:
            m[pos[a], pos[b]] += w
            m[pos[b], pos[a]] += w
    for _ in range(squarings):
        m = m @ m
        m /= np.abs(m).max()
    x = m @ np.ones(k)
    x /= np.linalg.norm(x)
    for v in comp:
        out[v] = float(x[pos[v]])
    return out


def pagerank_oracle(nodes, edges, alpha=0.85, iterations=5000):
    n = len(nodes)
    pos = {v: i for i, v in enumerate(nodes)}
    w = np.zeros((n, n))
    for (a, b), wt in edges.items():
        w[pos[a], pos[b]] = w[pos[b], pos[a]] = wt
    google = np.empty((n, n))
    for i in range(n):
        s = w[i].sum()
        row = w[i] / s if s > 0 else np.full(n, 1.0 / n)
        google[i] = alpha * row + (1 - alpha) / n
    x = np.full(n, 1.0 / n)
    for _ in range(iterations):
        x = x @ google
    x /= x.sum()
    return {v: float(x[pos[v]]) for v in nodes}


def triangles_clustering(nodes, edges):
    nbr = {v: set() for v in nodes}
    for a, b in edges:
        nbr[a].add(b)
        nbr[b].add(a)
    total = 0.0
    for v in nodes:
        k = len(nbr[v])
        if k < 2:
            continue
        tri = sum(1 for x, y in itertools.combinations(sorted(nbr[v]), 2) if y in nbr[x])
        total += tri / (k * (k - 1) / 2)
    return total / len(nodes) if nodes else 0.0


def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def modularity_oracle(nodes, edges, partition):
    m = sum(edges.values())
    deg = {v: 0 for v in nodes}
    for (a, b), w in edges.items():
        deg[a] += w
        deg[b] += w
    label = {v: i for i, c in enumerate(partition) for v in c}
    q = 0.0
    for c in partition:
        inside = sum(w for (a, b), w in edges.items() if label[a] == label[b] and a in c)
        dc = sum(deg[v] for v in c)
        q += inside / m - (dc / (2 * m)) ** 2
    return q
