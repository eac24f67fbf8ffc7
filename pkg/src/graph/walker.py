"""
Walker - Community-aware, weight-biased random walks
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from tqdm import tqdm

from src.utils.errors import ConfigError, UnknownNodeError, WalkError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WalkParams:
    alpha: float = 0.2
    max_length: int = 80
    walks_per_node: int = 10
    seed: int = 42

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigError(f"alpha must be in [0, 1], got {self.alpha}")
        if self.max_length < 1:
            raise ConfigError(f"walk length must be >= 1, got {self.max_length}")
        if self.walks_per_node < 1:
            raise ConfigError(f"walks per node must be >= 1, got {self.walks_per_node}")
        if self.seed < 0:
            raise ConfigError(f"seed must be >= 0, got {self.seed}")


class WalkCorpus:
    """Walks over node indices, ordered by start node then walk index"""

    def __init__(self, walks, tokens):
        self.walks = [np.asarray(w, dtype=np.int64) for w in walks]
        self.tokens = tuple(tokens)

    def __len__(self):
        return len(self.walks)

    def __iter__(self):
        return iter(self.walks)

    def sentences(self):
        """Walks as token lists (word2vec-style sentences)"""
        return [[self.tokens[i] for i in walk] for walk in self.walks]

    def total_positions(self):
        return int(sum(len(w) for w in self.walks))

    def save(self, path):
        with open(path, 'w', encoding='utf-8') as f:
            for sentence in self.sentences():
                f.write(' '.join(sentence) + '\n')

    @classmethod
    def load(cls, graph, path):
        walks = []
        with open(path, 'r', encoding='utf-8') as f:
            for line_number, line in enumerate(f, 1):
                parts = line.split()
                if not parts:
                    continue
                try:
                    walks.append([graph.resolve(token) for token in parts])
                except UnknownNodeError as e:
                    raise WalkError(f"{path}:{line_number}: {e}") from None
        return cls(walks, graph.tokens)


class CommunityWalker:
    """Generates the custom paths: with probability alpha a weighted step to an
    out-neighbor, otherwise a uniform jump inside the current node's community.
    """

    def __init__(self, graph, assignment):
        if assignment.num_nodes != graph.num_nodes:
            raise WalkError(f"assignment covers {assignment.num_nodes} nodes, "
                            f"graph has {graph.num_nodes}")
        self.graph = graph
        self.assignment = assignment

        # Cumulative out-weights for proportional neighbor draws
        self._cumulative = [np.cumsum(graph.out_weights(u)) for u in range(graph.num_nodes)]

    def _neighbor_step(self, current, rng):
        targets = self.graph.out_targets(current)
        if len(targets) == 0:
            return None
        cumulative = self._cumulative[current]
        x = rng.random() * cumulative[-1]
        idx = int(np.searchsorted(cumulative, x, side='right'))
        return int(targets[min(idx, len(targets) - 1)])

    def _community_step(self, current, rng):
        members = self.assignment.members_of(self.assignment.community_of(current))
        if len(members) <= 1:
            return None
        # Uniform over members other than current
        pick = int(rng.integers(len(members) - 1))
        if pick >= self.assignment.position[current]:
            pick += 1
        return int(members[pick])

    def step(self, current, alpha, rng):
        """Next node index, or None when both branches are empty"""
        current = self.graph.resolve(current)
        if rng.random() <= alpha:
            branches = (self._neighbor_step, self._community_step)
        else:
            branches = (self._community_step, self._neighbor_step)
        for branch in branches:
            nxt = branch(current, rng)
            if nxt is not None:
                return nxt
        return None

    def generate_walk(self, start, params, rng):
        start = self.graph.resolve(start)
        walk = [start]
        while len(walk) < params.max_length:
            nxt = self.step(walk[-1], params.alpha, rng)
            if nxt is None:
                break
            walk.append(nxt)
        return np.array(walk, dtype=np.int64)

    def walk_rng(self, seed, start, walk_index):
        """Independent stream per (seed, start node, walk index)"""
        return np.random.default_rng([seed, start, walk_index])

    def _walks_from(self, start, params):
        return [self.generate_walk(start, params, self.walk_rng(params.seed, start, k))
                for k in range(params.walks_per_node)]

    def generate_corpus(self, params, threads=1, progress=False):
        """mu walks from every node; the ordering never depends on `threads`"""
        starts = range(self.graph.num_nodes)
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                per_start = list(pool.map(lambda s: self._walks_from(s, params), starts))
        else:
            per_start = [self._walks_from(s, params)
                         for s in tqdm(starts, desc="walks", disable=not progress)]

        walks = [walk for group in per_start for walk in group]
        corpus = WalkCorpus(walks, self.graph.tokens)
        logger.info("Generated %d walks (%d positions), alpha=%.2f, length<=%d",
                    len(corpus), corpus.total_positions(), params.alpha, params.max_length)
        return corpus
