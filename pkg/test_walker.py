"""
Tests for community-aware random walks
"""

import numpy as np
import pytest

from conftest import graph_from_text
from src.graph.community import CommunityAssignment, louvain
from src.graph.walker import CommunityWalker, WalkCorpus, WalkParams
from src.utils.errors import ConfigError, UnknownNodeError, WalkError


def walker_for(g, labels=None):
    labels = list(range(g.num_nodes)) if labels is None else labels
    return CommunityWalker(g, CommunityAssignment(labels))


class TestStep:
    def test_weighted_neighbor_frequencies(self, weighted_star):
        walker = walker_for(weighted_star)
        rng = np.random.default_rng(0)
        b = weighted_star.resolve('b')
        draws = 100_000
        hits = sum(walker.step('a', 1.0, rng) == b for _ in range(draws))
        assert abs(hits / draws - 2 / 3) < 0.03

    def test_branch_frequency_matches_alpha(self):
        # a has one out-neighbor x outside its community {a, m}
        g = graph_from_text("a\tx\nm\ta\n")
        labels = [0 if t in ('a', 'm') else 1 for t in g.tokens]
        walker = walker_for(g, labels)
        rng = np.random.default_rng(1)
        x = g.resolve('x')
        draws = 50_000
        alpha = 0.3
        hits = sum(walker.step('a', alpha, rng) == x for _ in range(draws))
        assert abs(hits / draws - alpha) < 0.02

    def test_no_candidates(self):
        g = graph_from_text("b\ta\n")
        walker = walker_for(g)
        assert walker.step('a', 0.0, np.random.default_rng(0)) is None

    def test_single_community_candidate(self):
        g = graph_from_text("x\ta\nx\tb\n")
        labels = [0 if t in ('a', 'b') else 1 for t in g.tokens]
        walker = walker_for(g, labels)
        rng = np.random.default_rng(2)
        b = g.resolve('b')
        assert all(walker.step('a', 0.0, rng) == b for _ in range(50))

    def test_empty_branch_falls_back(self):
        # a has a neighbor but is alone in its community
        g = graph_from_text("a\tb\n")
        walker = walker_for(g)
        rng = np.random.default_rng(3)
        assert all(walker.step('a', 0.0, rng) == g.resolve('b') for _ in range(20))


class TestGenerateWalk:
    def test_forced_chain(self):
        g = graph_from_text("a\tb\nb\tc\n")
        walker = walker_for(g)
        params = WalkParams(alpha=1.0, max_length=3)
        walk = walker.generate_walk('a', params, np.random.default_rng(0))
        assert [g.tokens[i] for i in walk] == ['a', 'b', 'c']

    def test_isolated_node(self):
        g = graph_from_text("a\ta\nb\tc\n")
        walker = walker_for(g)
        for alpha in (0.0, 0.5, 1.0):
            walk = walker.generate_walk('a', WalkParams(alpha=alpha), np.random.default_rng(0))
            assert walk.tolist() == [g.resolve('a')]

    def test_unknown_start(self, weighted_star):
        with pytest.raises(UnknownNodeError):
            walker_for(weighted_star).generate_walk('q', WalkParams(), np.random.default_rng(0))

    def test_consecutive_nodes_share_edge_or_community(self, two_cliques):
        assignment = louvain(two_cliques)
        walker = CommunityWalker(two_cliques, assignment)
        walk = walker.generate_walk(0, WalkParams(max_length=50), np.random.default_rng(5))
        for u, v in zip(walk[:-1], walk[1:]):
            same_community = assignment.community_of(u) == assignment.community_of(v)
            assert two_cliques.has_edge(int(u), int(v)) or same_community


class TestCorpus:
    def test_walk_count(self):
        pairs = ''.join(f"n{i}\tn{(i + 1) % 10}\n" for i in range(10))
        g = graph_from_text(pairs)
        corpus = walker_for(g).generate_corpus(WalkParams(walks_per_node=10))
        assert len(corpus) == 100

    def test_singleton_walks(self, two_cliques):
        walker = CommunityWalker(two_cliques, louvain(two_cliques))
        corpus = walker.generate_corpus(WalkParams(walks_per_node=1, max_length=1))
        assert len(corpus) == two_cliques.num_nodes
        assert [w.tolist() for w in corpus] == [[i] for i in range(two_cliques.num_nodes)]

    def test_deterministic(self, two_cliques):
        walker = CommunityWalker(two_cliques, louvain(two_cliques))
        params = WalkParams(walks_per_node=3, max_length=10, seed=9)
        first = walker.generate_corpus(params)
        second = walker.generate_corpus(params)
        assert [w.tolist() for w in first] == [w.tolist() for w in second]

    def test_threads_do_not_change_walks(self, two_cliques):
        walker = CommunityWalker(two_cliques, louvain(two_cliques))
        params = WalkParams(walks_per_node=3, max_length=10, seed=9)
        single = walker.generate_corpus(params, threads=1)
        pooled = walker.generate_corpus(params, threads=3)
        assert [w.tolist() for w in single] == [w.tolist() for w in pooled]

    def test_save_and_load(self, two_cliques, tmp_path):
        walker = CommunityWalker(two_cliques, louvain(two_cliques))
        corpus = walker.generate_corpus(WalkParams(walks_per_node=2, max_length=6))
        path = tmp_path / 'walks.txt'
        corpus.save(path)
        loaded = WalkCorpus.load(two_cliques, path)
        assert [w.tolist() for w in loaded] == [w.tolist() for w in corpus]

    def test_load_unknown_token(self, two_cliques, tmp_path):
        path = tmp_path / 'walks.txt'
        path.write_text("p0 p1 nobody\n", encoding='utf-8')
        with pytest.raises(WalkError):
            WalkCorpus.load(two_cliques, path)

    def test_assignment_must_cover_graph(self, two_cliques):
        with pytest.raises(WalkError):
            CommunityWalker(two_cliques, CommunityAssignment([0, 1]))


class TestWalkParams:
    @pytest.mark.parametrize('kwargs', [{'alpha': 1.5}, {'max_length': 0}, {'walks_per_node': 0},
                                        {'seed': -1}])
    def test_invalid(self, kwargs):
        with pytest.raises(ConfigError):
            WalkParams(**kwargs)
