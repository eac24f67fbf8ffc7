"""
Evaluation - AUC of link scores, overall and by geodesic distance
"""

import logging

import networkx as nx
import numpy as np
from sklearn.metrics import roc_auc_score

from src.utils.errors import LinkPredictionError

logger = logging.getLogger(__name__)

DEFAULT_AUC_SAMPLES = 100_000

# Geodesic distance buckets for the breakdown table
DISTANCE_BUCKETS = ('1', '2', '3', '4+', 'unreachable')


def auc(positive_scores, negative_scores, mode='exact', samples=DEFAULT_AUC_SAMPLES, seed=0):
    """(n' + 0.5 n'') / n over positive/negative comparisons.

    `exact` compares every cross pair; `sampled` draws `samples` random pairs.
    """
    pos = np.asarray(positive_scores, dtype=float)
    neg = np.asarray(negative_scores, dtype=float)
    if len(pos) == 0 or len(neg) == 0:
        raise LinkPredictionError("AUC needs at least one positive and one negative score")

    if mode == 'exact':
        labels = np.concatenate([np.ones(len(pos)), np.zeros(len(neg))])
        return float(roc_auc_score(labels, np.concatenate([pos, neg])))
    if mode == 'sampled':
        if samples < 1:
            raise LinkPredictionError(f"sampled AUC needs samples >= 1, got {samples}")
        rng = np.random.default_rng(seed)
        p = pos[rng.integers(len(pos), size=samples)]
        q = neg[rng.integers(len(neg), size=samples)]
        higher = np.count_nonzero(p > q)
        equal = np.count_nonzero(p == q)
        return float((higher + 0.5 * equal) / samples)
    raise LinkPredictionError(f"unknown AUC mode {mode!r} (exact or sampled)")


def _bucket(distance):
    if distance is None:
        return 'unreachable'
    if distance >= 4:
        return '4+'
    return str(distance)


def geodesic_buckets(g, pairs):
    """Distance bucket of every pair in the undirected view of g"""
    nxg = g.to_networkx()
    component = {}
    for i, nodes in enumerate(nx.connected_components(nxg)):
        for node in nodes:
            component[node] = i
    buckets = []
    cache = {}
    for u, v in pairs:
        if not (g.has_node(u) and g.has_node(v)):
            buckets.append('unreachable')
            continue
        a, b = g.resolve(u), g.resolve(v)
        if component[a] != component[b]:
            buckets.append('unreachable')
            continue
        if a not in cache:
            cache[a] = nx.single_source_shortest_path_length(nxg, a, cutoff=3)
        # Same component but beyond the cutoff
        buckets.append(_bucket(cache[a].get(b, 4)))
    return buckets


def auc_by_distance(g, split, scores, mode='exact', samples=DEFAULT_AUC_SAMPLES, seed=0):
    """AUC of positives in each distance bucket against all negatives.

    `scores` maps a method name to its test-pair scores, ordered as
    `split.test_pairs()`. Returns {method: {bucket: auc}} plus bucket counts
    under the key '_count'.
    """
    pairs, labels = split.test_pairs()
    positives = [p for p, label in zip(pairs, labels) if label == 1]
    buckets = np.array(geodesic_buckets(g, positives))
    table = {'_count': {b: int(np.count_nonzero(buckets == b)) for b in DISTANCE_BUCKETS}}
    for method, values in scores.items():
        values = np.asarray(values, dtype=float)
        pos, neg = values[labels == 1], values[labels == 0]
        row = {}
        for b in DISTANCE_BUCKETS:
            mask = buckets == b
            if mask.any():
                row[b] = auc(pos[mask], neg, mode=mode, samples=samples, seed=seed)
        table[method] = row
    return table
