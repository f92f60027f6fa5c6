"""
Small-world structure and communities
=====================================

"""

from dsnrate.fixtures import generate_fixture_corpus
from dsnrate.graph import build_network, stats
from dsnrate.ingest import developer_roster, extract_instances
from dsnrate.louvain import louvain_communities, modularity

events = generate_fixture_corpus(seed=3, repos=8, devs=120, days=365)

# people who only ever worked alone stay in as isolates
net = build_network(extract_instances(events), roster=developer_roster(events))
s = stats(net, seed=42)
print(s.table())

# communities are seeded, so the same seed gives the same partition
parts = louvain_communities(net, seed=42)
print(len(parts), "communities, sizes", [len(p) for p in parts])
print("modularity", round(modularity(net, parts), 4))

# a different seed may reorder the greedy pass
other = louvain_communities(net, seed=7)
print("seed 7 modularity", round(modularity(net, other), 4))
