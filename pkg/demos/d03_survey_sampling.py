"""
Choosing whom to ask about whom
===============================

"""

from collections import Counter

from dsnrate.centrality import compute_ratings, rating_table
from dsnrate.fixtures import generate_fixture_corpus
from dsnrate.graph import build_network
from dsnrate.ingest import extract_instances
from dsnrate.survey import eligible_respondents, sample_survey_targets

events = generate_fixture_corpus(seed=11, repos=6, devs=150, days=240)
net = build_network(extract_instances(events))
table = rating_table(compute_ratings(net))

# respondents need at least five collaborators
people = eligible_respondents(net)
print(len(people), "of", len(net), "developers can be surveyed")

# ten targets each: 3 top neighbours, 2 other neighbours, 3 top strangers, 2 other strangers
who = people[0]
sample = sample_survey_targets(net, table, who, seed=42)
for dev, stratum in sample.picks:
    print(f"{who} rates {dev:<12} {stratum.value}")

# when a stratum runs dry its slots are borrowed from elsewhere
shortfalls = Counter()
for i, p in enumerate(people):
    counts = sample_survey_targets(net, table, p, seed=i).counts()
    shortfalls[tuple(counts.values())] += 1
print(shortfalls.most_common(5))
