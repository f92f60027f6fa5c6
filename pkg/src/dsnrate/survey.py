"""Survey target selection: ten developers per respondent, stratified by
direct collaboration and by membership in the top of the rating table."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .centrality import RatingRow
from .graph import DevNetwork

TOP_N = 50
MIN_COLLABORATORS = 5
SAMPLE_SIZE = 10


class Stratum(str, enum.Enum):
    NEIGHBOR_TOP = "NeighborTop50"
    NEIGHBOR_REST = "NeighborRest"
    NON_NEIGHBOR_TOP = "NonNeighborTop50"
    NON_NEIGHBOR_REST = "NonNeighborRest"


QUOTAS = {
    Stratum.NEIGHBOR_TOP: 3,
    Stratum.NEIGHBOR_REST: 2,
    Stratum.NON_NEIGHBOR_TOP: 3,
    Stratum.NON_NEIGHBOR_REST: 2,
}

# where a short stratum borrows from: sibling in the same neighbour class
# first, then the opposite class
BACKFILL = {
    Stratum.NEIGHBOR_TOP: (Stratum.NEIGHBOR_REST, Stratum.NON_NEIGHBOR_TOP, Stratum.NON_NEIGHBOR_REST),
    Stratum.NEIGHBOR_REST: (Stratum.NEIGHBOR_TOP, Stratum.NON_NEIGHBOR_REST, Stratum.NON_NEIGHBOR_TOP),
    Stratum.NON_NEIGHBOR_TOP: (Stratum.NON_NEIGHBOR_REST, Stratum.NEIGHBOR_TOP, Stratum.NEIGHBOR_REST),
    Stratum.NON_NEIGHBOR_REST: (Stratum.NON_NEIGHBOR_TOP, Stratum.NEIGHBOR_REST, Stratum.NEIGHBOR_TOP),
}


class InsufficientPopulation(ValueError):
    pass


@dataclass
class SurveySample:
    respondent: str
    picks: list[tuple[str, Stratum]] = field(default_factory=list)

    def counts(self) -> dict[Stratum, int]:
        out = {s: 0 for s in Stratum}
        for _, s in self.picks:
            out[s] += 1
        return out

    def to_json(self) -> dict:
        return {
            "respondent": self.respondent,
            "picks": [{"developer": d, "stratum": s.value} for d, s in self.picks],
        }


def eligible_respondents(net: DevNetwork, min_collaborators: int = MIN_COLLABORATORS) -> list[str]:
    return [v for v in net.nodes if net.degree(v) >= min_collaborators]


def strata(net: DevNetwork, table: Sequence[RatingRow], respondent: str, top_n: int = TOP_N) -> dict[Stratum, list[str]]:
    """Candidate pools for ``respondent``, each in node_index order."""
    top = {row.developer for row in table[:top_n]}
    neighbors = set(net.neighbors(respondent))
    pools: dict[Stratum, list[str]] = {s: [] for s in Stratum}
    for v in net.nodes:
        if v == respondent:
            continue
        if v in neighbors:
            pools[Stratum.NEIGHBOR_TOP if v in top else Stratum.NEIGHBOR_REST].append(v)
        else:
            pools[Stratum.NON_NEIGHBOR_TOP if v in top else Stratum.NON_NEIGHBOR_REST].append(v)
    return pools


def sample_survey_targets(
    net: DevNetwork,
    table: Sequence[RatingRow],
    respondent: str,
    seed: int | np.random.SeedSequence = 42,
    top_n: int = TOP_N,
) -> SurveySample:
    """Draw ten distinct developers (never the respondent) without replacement.

    Each stratum first gets its own quota (3/2/3/2). Any shortfall is then
    drawn from the fallback pools in :data:`BACKFILL` order, and every pick is
    labelled with the pool it actually came from.
    """
    if respondent not in net.index:
        raise KeyError(f"respondent {respondent!r} is not in the network")
    if len(net) < SAMPLE_SIZE + 1:
        raise InsufficientPopulation(
            f"insufficient population: {len(net)} nodes, need at least {SAMPLE_SIZE + 1}"
        )
    rng = np.random.default_rng(seed)
    pools = strata(net, table, respondent, top_n)
    sample = SurveySample(respondent)

    def draw(stratum: Stratum, k: int) -> int:
        pool = pools[stratum]
        k = min(k, len(pool))
        if k == 0:
            return 0
        idx = rng.choice(len(pool), size=k, replace=False)
        chosen = [pool[i] for i in idx]
        taken = set(int(i) for i in idx)
        pools[stratum] = [v for i, v in enumerate(pool) if i not in taken]
        sample.picks.extend((v, stratum) for v in chosen)
        return k

    short = {}
    for stratum, quota in QUOTAS.items():
        short[stratum] = quota - draw(stratum, quota)
    for stratum in QUOTAS:
        for donor in BACKFILL[stratum]:
            if short[stratum] == 0:
                break
            short[stratum] -= draw(donor, short[stratum])
    return sample
