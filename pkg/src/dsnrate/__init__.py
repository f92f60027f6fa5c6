"""Developer collaboration networks and centrality-based trust ratings."""

__version__ = "0.1.0"

from .centrality import (
    aggregate_ratings,
    betweenness_centrality,
    closeness_centrality,
    compute_ratings,
    degree_centrality,
    eigenvector_centrality,
    pagerank,
    rating_table,
)
from .graph import DevNetwork, EdgeWeight, build_network, components, stats
from .ingest import (
    CollaborationInstance,
    EventRecord,
    classify_commit,
    extract_coedition_instances,
    extract_instances,
    extract_review_instances,
    is_bot,
    parse_events,
)
from .louvain import louvain_communities, modularity
from .survey import eligible_respondents, sample_survey_targets

__all__ = [
    "CollaborationInstance",
    "DevNetwork",
    "EdgeWeight",
    "EventRecord",
    "aggregate_ratings",
    "betweenness_centrality",
    "build_network",
    "classify_commit",
    "closeness_centrality",
    "components",
    "compute_ratings",
    "degree_centrality",
    "eigenvector_centrality",
    "eligible_respondents",
    "extract_coedition_instances",
    "extract_instances",
    "extract_review_instances",
    "is_bot",
    "louvain_communities",
    "modularity",
    "pagerank",
    "parse_events",
    "rating_table",
    "sample_survey_targets",
    "stats",
]
