"""
Split - Train/test link sets for temporal and random-removal evaluation
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from src.utils.errors import NegativeSamplingExhausted, SplitError

logger = logging.getLogger(__name__)

SECTIONS = ('positive_train', 'negative_train', 'positive_test', 'negative_test')

# Rejection sampling gives up after this many draws per required negative
RETRY_FACTOR = 100


def pair_key(pair, directed):
    """Identity of a node pair: ordered when directed, unordered otherwise"""
    u, v = pair
    if directed or u <= v:
        return (u, v)
    return (v, u)


@dataclass
class DatasetSplit:
    """Four disjoint lists of (u, v) token pairs"""
    positive_train: list = field(default_factory=list)
    negative_train: list = field(default_factory=list)
    positive_test: list = field(default_factory=list)
    negative_test: list = field(default_factory=list)
    directed: bool = True
    dropped: int = 0

    def train_pairs(self):
        pairs = self.positive_train + self.negative_train
        labels = [1] * len(self.positive_train) + [0] * len(self.negative_train)
        return pairs, np.array(labels)

    def test_pairs(self):
        pairs = self.positive_test + self.negative_test
        labels = [1] * len(self.positive_test) + [0] * len(self.negative_test)
        return pairs, np.array(labels)

    def sizes(self):
        return {name: len(getattr(self, name)) for name in SECTIONS}

    def validate(self, *graphs):
        """Check disjointness, balanced sizes and that negatives are non-edges"""
        seen = {}
        for name in SECTIONS:
            for pair in getattr(self, name):
                key = pair_key(pair, self.directed)
                if key in seen:
                    raise SplitError(f"pair {pair} appears in both {seen[key]} and {name}")
                seen[key] = name
        if len(self.negative_train) != len(self.positive_train):
            raise SplitError("negative_train and positive_train differ in size")
        if len(self.negative_test) != len(self.positive_test):
            raise SplitError("negative_test and positive_test differ in size")
        for g in graphs:
            for pair in self.negative_train + self.negative_test:
                if _is_edge(g, pair):
                    raise SplitError(f"negative pair {pair} is an edge of the graph")

    def save(self, path):
        with open(path, 'w', encoding='utf-8') as f:
            for name in SECTIONS:
                f.write(f"# {name}\n")
                for u, v in getattr(self, name):
                    f.write(f"{u}\t{v}\n")

    @classmethod
    def load(cls, path, directed=True):
        sections = {name: [] for name in SECTIONS}
        current = None
        with open(path, 'r', encoding='utf-8') as f:
            for line_number, line in enumerate(f, 1):
                line = line.rstrip('\n')
                if not line.strip():
                    continue
                if line.startswith('# ') and line[2:].strip() in sections:
                    current = line[2:].strip()
                    continue
                parts = line.split('\t')
                if current is None or len(parts) != 2:
                    raise SplitError(f"{path}:{line_number}: expected 'u<TAB>v' inside a section")
                sections[current].append((parts[0], parts[1]))
        return cls(directed=directed, **sections)


def _is_edge(g, pair):
    u, v = pair
    if not (g.has_node(u) and g.has_node(v)):
        return False
    return g.has_edge(u, v) or (not g.directed and g.has_edge(v, u))


def _sample_negatives(tokens, forbidden, count, rng, directed):
    """Uniform non-edge pairs (u != v) avoiding `forbidden` keys; mutates forbidden"""
    n = len(tokens)
    if count == 0:
        return []
    if n < 2:
        raise NegativeSamplingExhausted("need at least two nodes to sample negatives")
    budget = RETRY_FACTOR * count
    drawn = 0
    result = []
    while len(result) < count:
        if drawn >= budget:
            raise NegativeSamplingExhausted(
                f"found only {len(result)} of {count} negative pairs after {drawn} draws; "
                "the graph is too dense")
        chunk = min(budget - drawn, max(64, 2 * (count - len(result))))
        us = rng.integers(n, size=chunk)
        vs = rng.integers(n, size=chunk)
        for u, v in zip(us, vs):
            drawn += 1
            if u == v:
                continue
            pair = (tokens[u], tokens[v])
            key = pair_key(pair, directed)
            if key in forbidden:
                continue
            forbidden.add(key)
            result.append(pair)
            if len(result) == count:
                break
    return result


def random_removal_split(g, test_fraction, seed=0):
    """Hide a random ceil(fraction * |E|) of the edges as positive test links"""
    if not 0.0 < test_fraction < 1.0:
        raise SplitError(f"test fraction must be in (0, 1), got {test_fraction}")
    edges = g.edge_pairs()
    if not edges:
        raise SplitError("graph has no edges to split")

    rng = np.random.default_rng(seed)
    n_test = math.ceil(round(test_fraction * len(edges), 9))
    order = rng.permutation(len(edges))
    test_idx = sorted(order[:n_test])
    train_idx = sorted(order[n_test:])
    if not train_idx:
        raise SplitError("test fraction leaves no training edges")

    positive_test = [edges[i] for i in test_idx]
    positive_train = [edges[i] for i in train_idx]
    forbidden = {pair_key(p, g.directed) for p in edges}
    negative_train = _sample_negatives(g.tokens, forbidden, len(positive_train), rng, g.directed)
    negative_test = _sample_negatives(g.tokens, forbidden, len(positive_test), rng, g.directed)

    split = DatasetSplit(positive_train, negative_train, positive_test, negative_test,
                         directed=g.directed)
    logger.info("Random-removal split: %s", split.sizes())
    return split


def temporal_split(g_t1, g_t2, seed=0, drop_unseen=False):
    """Links new in the second snapshot are the positive test set.

    By default the node universe is the union of both snapshots. With
    `drop_unseen`, new links touching nodes absent from the first snapshot are
    dropped (and counted) and negatives are drawn over the first snapshot only.
    """
    if g_t1.directed != g_t2.directed:
        raise SplitError("snapshots disagree on directedness")
    directed = g_t1.directed

    old = {pair_key(p, directed) for p in g_t1.edge_pairs()}
    positive_test = []
    dropped = 0
    new_edges = 0
    for pair in g_t2.edge_pairs():
        if pair_key(pair, directed) in old:
            continue
        new_edges += 1
        if not drop_unseen or (g_t1.has_node(pair[0]) and g_t1.has_node(pair[1])):
            positive_test.append(pair)
        else:
            dropped += 1
    if new_edges == 0:
        raise SplitError("second snapshot adds no new edges")
    if not positive_test:
        raise SplitError(f"all {dropped} new edges touch nodes unseen in the first snapshot")
    if dropped:
        logger.info("Dropped %d new edges with endpoints unseen in the first snapshot", dropped)

    rng = np.random.default_rng(seed)
    positive_train = g_t1.edge_pairs()
    forbidden = old | {pair_key(p, directed) for p in g_t2.edge_pairs()}
    if drop_unseen:
        universe = list(g_t1.tokens)
    else:
        universe = list(g_t1.tokens) + [t for t in g_t2.tokens if not g_t1.has_node(t)]
    negative_train = _sample_negatives(universe, forbidden, len(positive_train), rng, directed)
    negative_test = _sample_negatives(universe, forbidden, len(positive_test), rng, directed)

    split = DatasetSplit(positive_train, negative_train, positive_test, negative_test,
                         directed=directed, dropped=dropped)
    logger.info("Temporal split: %s", split.sizes())
    return split
