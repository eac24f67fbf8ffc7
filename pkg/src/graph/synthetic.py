"""
Synthetic - Planted-partition graphs and attributed graphs for experiments
"""

import json
import logging

import networkx as nx
import numpy as np

from src.graph.graph_core import Graph

logger = logging.getLogger(__name__)


def _from_networkx(nxg, directed, prefix='n'):
    tokens = [f"{prefix}{i}" for i in range(nxg.number_of_nodes())]
    arcs = {}
    for u, v in nxg.edges():
        if u == v:
            continue
        arcs[(u, v)] = 1.0
        if not directed:
            arcs[(v, u)] = 1.0
    return Graph(tokens, arcs, directed=directed)


def stochastic_block_model(sizes, p_in, p_out, seed=0, directed=False):
    """SBM graph with uniform within/between-block probabilities; returns (graph, blocks)"""
    k = len(sizes)
    probs = np.full((k, k), p_out)
    np.fill_diagonal(probs, p_in)
    nxg = nx.stochastic_block_model(list(sizes), probs.tolist(), seed=seed, directed=directed)
    blocks = np.repeat(np.arange(k), sizes)
    graph = _from_networkx(nxg, directed)
    logger.info("Generated SBM: %r with blocks %s", graph, list(sizes))
    return graph, blocks


def attributed_block_model(n_blocks=8, block_size=20, n_topics=2, p_block=0.3,
                           topic_edges=None, vocab_per_topic=50, posts_per_node=5,
                           words_per_post=20, shared_vocab=20, shared_fraction=0.2, seed=0):
    """Graph whose links come from two independent mechanisms.

    Block links join members of the same structural block; topic links join
    nodes of the same topic in different blocks and are matched in number to
    the block links, so half the planted links are explained only by shared
    vocabulary. Returns (graph, content_records, blocks, topics).
    """
    rng = np.random.default_rng(seed)
    n = n_blocks * block_size
    blocks = np.repeat(np.arange(n_blocks), block_size)
    # Topics cut across blocks evenly
    topics = np.concatenate([rng.permutation(np.arange(block_size) % n_topics)
                             for _ in range(n_blocks)])

    block_pairs, topic_pairs = [], []
    for u in range(n):
        for v in range(u + 1, n):
            if blocks[u] == blocks[v]:
                block_pairs.append((u, v))
            elif topics[u] == topics[v]:
                topic_pairs.append((u, v))

    chosen = [block_pairs[i] for i in np.flatnonzero(rng.random(len(block_pairs)) < p_block)]
    count = len(chosen) if topic_edges is None else topic_edges
    picks = rng.choice(len(topic_pairs), size=min(count, len(topic_pairs)), replace=False)
    chosen += [topic_pairs[i] for i in sorted(picks)]

    tokens = [f"n{i}" for i in range(n)]
    arcs = {}
    for u, v in chosen:
        arcs[(u, v)] = 1.0
        arcs[(v, u)] = 1.0
    graph = Graph(tokens, arcs, directed=False)

    vocab = [[f"t{t}w{j}" for j in range(vocab_per_topic)] for t in range(n_topics)]
    common = [f"common{j}" for j in range(shared_vocab)]
    records = []
    for i in range(n):
        for _ in range(posts_per_node):
            words = []
            for _ in range(words_per_post):
                if common and rng.random() < shared_fraction:
                    words.append(common[rng.integers(len(common))])
                else:
                    pool = vocab[topics[i]]
                    words.append(pool[rng.integers(len(pool))])
            records.append({'node': tokens[i], 'text': ' '.join(words)})

    logger.info("Generated attributed graph: %r, %d posts", graph, len(records))
    return graph, records, blocks, topics


def write_content(records, path):
    """Write content records as JSON-lines"""
    with open(path, 'w', encoding='utf-8') as f:
        for record in records:
            f.write(json.dumps(record, ensure_ascii=False) + '\n')
