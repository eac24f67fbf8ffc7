"""
Shared fixtures for the test suite
"""

import io
import json

import pytest

from src.graph.graph_core import parse_edge_list
from src.graph.synthetic import attributed_block_model, stochastic_block_model


def graph_from_text(text, directed=True, default_weight=1.0):
    return parse_edge_list(io.StringIO(text), directed=directed, default_weight=default_weight)


def clique_edges(nodes):
    return [(u, v) for i, u in enumerate(nodes) for v in nodes[i + 1:]]


def graph_from_pairs(pairs, directed=False):
    text = ''.join(f"{u}\t{v}\n" for u, v in pairs)
    return graph_from_text(text, directed=directed)


@pytest.fixture
def two_triangles():
    pairs = clique_edges(['a', 'b', 'c']) + clique_edges(['x', 'y', 'z'])
    return graph_from_pairs(pairs)


@pytest.fixture
def two_cliques():
    """Two disjoint 5-cliques"""
    pairs = (clique_edges([f"p{i}" for i in range(5)])
             + clique_edges([f"q{i}" for i in range(5)]))
    return graph_from_pairs(pairs)


@pytest.fixture
def weighted_star():
    return graph_from_text("a\tb\t2\na\tc\t1\n")


@pytest.fixture
def sbm_files(tmp_path):
    """Sparse 4-block SBM written as an edge list"""
    graph, _ = stochastic_block_model([50, 50, 50, 50], 0.12, 0.002, seed=7)
    path = tmp_path / 'sbm.tsv'
    with open(path, 'w', encoding='utf-8') as f:
        for u, v in graph.edge_pairs():
            f.write(f"{u}\t{v}\n")
    return path


@pytest.fixture
def attributed_files(tmp_path):
    """Block links plus vocabulary-only topic links, with JSON-lines posts"""
    graph, records, _, _ = attributed_block_model(seed=3)
    edges = tmp_path / 'attributed.tsv'
    content = tmp_path / 'posts.jsonl'
    with open(edges, 'w', encoding='utf-8') as f:
        for u, v in graph.edge_pairs():
            f.write(f"{u}\t{v}\n")
    with open(content, 'w', encoding='utf-8') as f:
        for record in records:
            f.write(json.dumps(record) + '\n')
    return edges, content


# Small settings that keep end-to-end runs fast
FAST_SETTINGS = {
    'directed': 'false',
    'walk_length': '20',
    'walks_per_node': '5',
    'struct_dim': '16',
    'struct_window': '5',
    'struct_epochs': '2',
    'content_dim': '16',
    'content_window': '2',
    'content_epochs': '8',
    'classifier_epochs': '200',
}


@pytest.fixture
def fast_settings():
    return dict(FAST_SETTINGS)
