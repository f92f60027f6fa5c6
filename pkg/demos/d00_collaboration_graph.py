"""
From raw events to a collaboration graph
========================================

"""

# the bundled corpus: three repos, eight people, one bot
from dsnrate.fixtures import bundled_corpus_path
from dsnrate.ingest import extract_instances, read_events

events, diagnostics = read_events([str(bundled_corpus_path())])
print(len(events), "events,", len(diagnostics), "diagnostics")

# every collaboration instance is a pair plus the evidence behind it
instances = extract_instances(events)
for inst in instances[:5]:
    print(inst.kind.value, inst.a, inst.b, inst.source_ids)

# edges carry both counts, the weight is their sum
from dsnrate.graph import build_network

net = build_network(instances)
for (a, b), w in list(net.edges.items())[:5]:
    print(f"{a:>6} -- {b:<6} co_edition={w.co_edition_count} review={w.review_count} total={w.total}")

# the weighted adjacency as a dense numpy matrix
import numpy as np

A = np.zeros((len(net), len(net)))
for i, nbrs in enumerate(net.adjacency()):
    for j, w in nbrs.items():
        A[i, j] = w
print(net.nodes)
print(A.astype(int))
