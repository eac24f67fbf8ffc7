"""
Baselines - Local-neighborhood similarity scores for link prediction
"""

import math
from enum import Enum

from src.utils.errors import LinkPredictionError, UnknownNodeError


class ScoreKind(Enum):
    COMMON_NEIGHBORS = 'common_neighbors'
    JACCARD = 'jaccard'
    ADAMIC_ADAR = 'adamic_adar'
    PREFERENTIAL_ATTACHMENT = 'preferential_attachment'
    SORENSEN = 'sorensen'

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        for kind in cls:
            if kind.value == value:
                return kind
        choices = ', '.join(k.value for k in cls)
        raise ValueError(f"unknown score {value!r} (choose from {choices})")


def _common_neighbors(gu, gv, sets):
    return float(len(gu & gv))


def _jaccard(gu, gv, sets):
    union = len(gu | gv)
    return len(gu & gv) / union if union else 0.0


def _adamic_adar(gu, gv, sets):
    # Degree-1 shared neighbors are skipped (ln 1 = 0)
    return sum(1.0 / math.log(len(sets[z])) for z in sorted(gu & gv) if len(sets[z]) > 1)


def _preferential_attachment(gu, gv, sets):
    return float(len(gu) * len(gv))


def _sorensen(gu, gv, sets):
    total = len(gu) + len(gv)
    return 2.0 * len(gu & gv) / total if total else 0.0


SCORERS = {
    ScoreKind.COMMON_NEIGHBORS: _common_neighbors,
    ScoreKind.JACCARD: _jaccard,
    ScoreKind.ADAMIC_ADAR: _adamic_adar,
    ScoreKind.PREFERENTIAL_ATTACHMENT: _preferential_attachment,
    ScoreKind.SORENSEN: _sorensen,
}


def local_score(g, u, v, kind):
    """Unweighted score of pair (u, v) on undirected neighborhoods"""
    a, b = g.resolve(u), g.resolve(v)
    if a == b:
        raise LinkPredictionError(f"cannot score a node against itself ({u!r})")
    sets = g.neighbor_sets()
    return SCORERS[ScoreKind.parse(kind)](sets[a], sets[b], sets)


def score_pairs(g, pairs, kind):
    """Scores for many token pairs; pairs with a node unknown to g score 0"""
    kind = ScoreKind.parse(kind)
    scores = []
    for u, v in pairs:
        try:
            scores.append(local_score(g, u, v, kind))
        except UnknownNodeError:
            scores.append(0.0)
    return scores


def rank_pairs(scored):
    """Sort (u, v, score) triples by descending score, ties by (u, v)"""
    for u, v, s in scored:
        if math.isnan(s):
            raise LinkPredictionError(f"score for ({u!r}, {v!r}) is NaN")
    return [(u, v) for u, v, s in sorted(scored, key=lambda t: (-t[2], t[0], t[1]))]
