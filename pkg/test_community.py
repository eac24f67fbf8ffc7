"""
Tests for Louvain community detection and modularity
"""

import networkx as nx
import numpy as np
import pytest

from conftest import clique_edges, graph_from_pairs, graph_from_text
from src.graph.community import CommunityAssignment, louvain, modularity
from src.utils.errors import CommunityError


def set_partitions(n):
    """Every partition of range(n) as a label list (restricted growth strings)"""
    labels = [0] * n

    def grow(i, used):
        if i == n:
            yield list(labels)
            return
        for label in range(used + 1):
            labels[i] = label
            yield from grow(i + 1, max(used, label + 1))

    yield from grow(1, 1) if n else iter([[]])


def best_modularity(g):
    return max(modularity(g, CommunityAssignment(p)) for p in set_partitions(g.num_nodes))


def node_groups(g, assignment):
    groups = {}
    for node, community in enumerate(assignment.membership):
        groups.setdefault(int(community), set()).add(g.tokens[node])
    return sorted(sorted(group) for group in groups.values())


class TestModularity:
    def test_single_community_is_zero(self, two_triangles):
        assert modularity(two_triangles, CommunityAssignment([0] * 6)) == pytest.approx(0.0)

    def test_two_triangles_by_hand(self, two_triangles):
        labels = [0 if t in 'abc' else 1 for t in two_triangles.tokens]
        assert modularity(two_triangles, CommunityAssignment(labels)) == pytest.approx(0.5)

    def test_size_mismatch(self, two_triangles):
        with pytest.raises(CommunityError):
            modularity(two_triangles, CommunityAssignment([0, 0, 1]))

    def test_directed_graph_uses_undirected_view(self):
        g = graph_from_text("a\tb\nb\ta\nc\td\n")
        q = modularity(g, CommunityAssignment([0, 0, 1, 1]))
        # a-b has weight 2 after summing both arcs, c-d weight 1
        assert q == pytest.approx((4 / 6 - (4 / 6) ** 2) + (2 / 6 - (2 / 6) ** 2))


class TestLouvain:
    def test_two_triangles(self, two_triangles):
        assignment = louvain(two_triangles, seed=0)
        assert assignment.num_communities == 2
        assert node_groups(two_triangles, assignment) == [['a', 'b', 'c'], ['x', 'y', 'z']]

    def test_two_cliques(self, two_cliques):
        assignment = louvain(two_cliques, seed=3)
        assert assignment.num_communities == 2
        assert modularity(two_cliques, assignment) == pytest.approx(0.5)

    def test_isolated_node(self):
        g = graph_from_text("a\ta\n")
        assignment = louvain(g)
        assert assignment.num_communities == 1

    def test_empty_graph(self):
        with pytest.raises(CommunityError):
            louvain(graph_from_text(""))

    def test_path_never_worse_than_one_community(self):
        g = graph_from_pairs([('a', 'b'), ('b', 'c'), ('c', 'd'), ('d', 'e'), ('e', 'f')])
        assert modularity(g, louvain(g, seed=1)) >= 0.0

    def test_same_seed_same_partition(self, two_cliques):
        first = louvain(two_cliques, seed=11)
        second = louvain(two_cliques, seed=11)
        assert np.array_equal(first.membership, second.membership)

    def test_near_brute_force_optimum(self):
        checked = 0
        for i in range(100):
            n = 4 + i % 4
            nxg = nx.gnp_random_graph(n, 0.5, seed=i)
            if not nx.is_connected(nxg):
                continue
            g = graph_from_pairs([(f"v{u}", f"v{v}") for u, v in nxg.edges()])
            if g.num_nodes != n:
                continue
            best = best_modularity(g)
            found = max(modularity(g, louvain(g, seed=s)) for s in range(5))
            assert found >= best - 0.05
            assert found <= best + 1e-9
            checked += 1
        assert checked > 30

    def test_relabelling_nodes_keeps_partition(self):
        cliques = [[f"n{5 * c + i}" for i in range(5)] for c in range(3)]
        pairs = [p for clique in cliques for p in clique_edges(clique)]
        pairs += [('n4', 'n5'), ('n9', 'n10'), ('n14', 'n0')]
        g = graph_from_pairs(pairs)
        expected = node_groups(g, louvain(g, seed=0))
        assert expected == sorted(sorted(clique) for clique in cliques)

        rng = np.random.default_rng(8)
        for _ in range(5):
            names = {token: f"m{i}" for token, i in zip(g.tokens, rng.permutation(g.num_nodes))}
            back = {name: token for token, name in names.items()}
            order = rng.permutation(len(pairs))
            relabelled = graph_from_pairs([(names[pairs[i][0]], names[pairs[i][1]])
                                           for i in order])
            assignment = louvain(relabelled, seed=0)
            groups = [sorted(back[t] for t in group)
                      for group in node_groups(relabelled, assignment)]
            assert sorted(groups) == expected
            assert modularity(relabelled, assignment) == pytest.approx(
                modularity(g, louvain(g, seed=0)))


class TestCommunityAssignment:
    def test_canonical_ids(self):
        a = CommunityAssignment([5, 5, 2, 7, 2])
        assert a.membership.tolist() == [0, 0, 1, 2, 1]
        assert a.num_communities == 3
        assert a.members_of(1).tolist() == [2, 4]
        assert a.sizes() == [2, 2, 1]

    def test_membership_is_read_only(self):
        a = CommunityAssignment([0, 1])
        with pytest.raises(ValueError):
            a.membership[0] = 1

    def test_save_and_load(self, two_triangles, tmp_path):
        assignment = louvain(two_triangles)
        path = tmp_path / 'communities.tsv'
        assignment.save(two_triangles, path)
        loaded = CommunityAssignment.load(two_triangles, path)
        assert np.array_equal(loaded.membership, assignment.membership)

    def test_load_missing_node(self, two_triangles, tmp_path):
        path = tmp_path / 'partial.tsv'
        path.write_text("a\t0\nb\t0\n", encoding='utf-8')
        with pytest.raises(CommunityError):
            CommunityAssignment.load(two_triangles, path)

    def test_clique_members(self):
        g = graph_from_pairs(clique_edges(['a', 'b', 'c', 'd']))
        assignment = louvain(g)
        assert assignment.num_communities == 1
