"""
Rating developers by centrality
===============================

"""

from dsnrate.centrality import compute_ratings, rating_histogram, rating_table
from dsnrate.fixtures import generate_fixture_corpus
from dsnrate.graph import build_network
from dsnrate.ingest import extract_instances

# a synthetic corpus large enough to spread the ratings out
events = generate_fixture_corpus(seed=7, repos=5, devs=40, days=180)
net = build_network(extract_instances(events))

vectors = compute_ratings(net)
table = rating_table(vectors)

# top of the leaderboard, with the five raw measures
for row in table[:5]:
    print(row.rank, row.developer, f"{row.rating:.3f}", row.band.value,
          " ".join(f"{k}={x:.3f}" for k, x in row.raw.items()))

# how the ratings distribute over [0, 1]
for lo, hi, n in rating_histogram([r.rating for r in table], bins=10):
    print(f"{lo:.1f} {'#' * n}")

# raw edge weights as path lengths change who sits "between" others
alt = rating_table(compute_ratings(net, distance="raw-weight"))
print("inverse  top 5:", [r.developer for r in table[:5]])
print("raw      top 5:", [r.developer for r in alt[:5]])
