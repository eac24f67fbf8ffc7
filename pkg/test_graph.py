"""
Tests for edge-list parsing, adjacency queries and synthetic graphs
"""

import io

import numpy as np
import pytest

from conftest import graph_from_text
from src.graph.graph_core import parse_edge_list, undirected_view, write_edge_list
from src.graph.synthetic import attributed_block_model, stochastic_block_model
from src.utils.errors import GraphFormatError, UnknownNodeError


class TestParseEdgeList:
    def test_weighted_lines(self):
        g = parse_edge_list(io.BytesIO(b"a\tb\t2\nb\tc\t1"))
        assert g.num_nodes == 3
        assert g.num_edges == 2
        assert g.weight('a', 'b') == 2.0
        assert g.weight('b', 'a') is None

    def test_empty_stream(self):
        g = parse_edge_list(io.BytesIO(b""))
        assert g.num_nodes == 0
        assert g.num_edges == 0

    def test_comments_and_default_weight(self):
        g = graph_from_text("# header\na\tb\n\nb\tc\t3\n", default_weight=0.5)
        assert g.weight('a', 'b') == 0.5
        assert g.weight('b', 'c') == 3.0

    def test_whitespace_separated_lines(self):
        g = graph_from_text("a b 2\nb c\n")
        assert g.weight('a', 'b') == 2.0
        assert g.has_edge('b', 'c')

    def test_duplicates_merged_by_sum(self):
        g = graph_from_text("a\tb\t1\na\tb\t3\n")
        assert g.out_neighbors('a') == [('b', 4.0)]
        assert g.load_report.merged_duplicates == 1

    def test_self_loop_dropped_but_node_registered(self):
        g = graph_from_text("a\ta\na\tb\n")
        assert g.num_nodes == 2
        assert g.num_edges == 1
        assert g.load_report.self_loops == 1
        assert 'self_loops_dropped=1' in g.load_report.summary()

    def test_single_self_loop_gives_isolated_node(self):
        g = graph_from_text("a\ta\n")
        assert g.num_nodes == 1
        assert g.num_edges == 0

    def test_malformed_line_reports_line_number(self):
        with pytest.raises(GraphFormatError) as info:
            graph_from_text("a\tb\nc\n")
        assert info.value.line_number == 2

    def test_node_id_with_inner_space_rejected(self):
        with pytest.raises(GraphFormatError) as info:
            graph_from_text("a\tb\t1\nnew york\tcity\t3\n")
        assert info.value.line_number == 2
        assert 'new york' in str(info.value)

    @pytest.mark.parametrize('weight', ['0', '-1', 'nan', 'heavy'])
    def test_bad_weight(self, weight):
        with pytest.raises(GraphFormatError):
            graph_from_text(f"a\tb\t{weight}\n")

    def test_invalid_utf8(self):
        with pytest.raises(GraphFormatError):
            parse_edge_list(io.BytesIO(b"a\t\xff\n"))

    def test_undirected_merges_both_orientations(self):
        g = graph_from_text("a\tb\t1\nb\ta\t2\n", directed=False)
        assert g.num_edges == 1
        assert g.weight('a', 'b') == 3.0
        assert g.weight('b', 'a') == 3.0


class TestAdjacency:
    def test_out_neighbors(self, weighted_star):
        assert weighted_star.out_neighbors('a') == [('b', 2.0), ('c', 1.0)]

    def test_sink_node(self, weighted_star):
        assert weighted_star.out_neighbors('c') == []

    def test_unknown_node(self, weighted_star):
        with pytest.raises(UnknownNodeError):
            weighted_star.out_neighbors('zzz')

    def test_in_neighbors(self, weighted_star):
        assert weighted_star.in_neighbors('b') == [('a', 2.0)]

    def test_weight_matrix_matches_arcs(self, weighted_star):
        m = weighted_star.weight_matrix().toarray()
        a, b, c = (weighted_star.resolve(t) for t in 'abc')
        assert m[a, b] == 2.0
        assert m[a, c] == 1.0
        assert m[b, a] == 0.0

    def test_neighbor_sets_are_undirected(self, weighted_star):
        sets = weighted_star.neighbor_sets()
        assert sets[weighted_star.resolve('b')] == {weighted_star.resolve('a')}


class TestUndirectedView:
    def test_single_arc(self):
        view = undirected_view(graph_from_text("a\tb\t2\n"))
        assert view.weight('a', 'b') == 2.0
        assert view.weight('b', 'a') == 2.0

    def test_opposite_arcs_sum(self):
        view = undirected_view(graph_from_text("a\tb\t2\nb\ta\t3\n"))
        assert view.weight('a', 'b') == 5.0
        assert view.num_edges == 1

    def test_empty_graph(self):
        view = undirected_view(graph_from_text(""))
        assert view.num_nodes == 0
        assert view.num_edges == 0


class TestDerivedGraphs:
    def test_reserialisation_is_idempotent(self):
        g = graph_from_text("a\tb\t0.1\nb\tc\t2\nc\ta\t1\na\tb\t0.2\n")
        first = io.StringIO()
        write_edge_list(g, first)
        again = graph_from_text(first.getvalue())
        second = io.StringIO()
        write_edge_list(again, second)
        assert first.getvalue() == second.getvalue()
        assert again.weight('a', 'b') == g.weight('a', 'b')

    def test_remove_edges_keeps_indexing(self, two_triangles):
        smaller = two_triangles.remove_edges([('a', 'b')])
        assert smaller.tokens == two_triangles.tokens
        assert not smaller.has_edge('a', 'b')
        assert not smaller.has_edge('b', 'a')
        assert smaller.num_edges == two_triangles.num_edges - 1

    def test_with_nodes_appends_isolated(self, two_triangles):
        bigger = two_triangles.with_nodes(['a', 'new'])
        assert bigger.num_nodes == 7
        assert bigger.resolve('new') == 6
        assert bigger.out_neighbors('new') == []

    def test_to_networkx(self, two_triangles):
        nxg = two_triangles.to_networkx()
        assert nxg.number_of_nodes() == 6
        assert nxg.number_of_edges() == 6


class TestSynthetic:
    def test_sbm_shape(self):
        g, blocks = stochastic_block_model([30, 20], 0.3, 0.0, seed=1)
        assert g.num_nodes == 50
        assert not g.directed
        for u, v, _ in g.edges():
            assert blocks[u] == blocks[v]

    def test_sbm_is_seeded(self):
        first, _ = stochastic_block_model([20, 20], 0.2, 0.05, seed=4)
        second, _ = stochastic_block_model([20, 20], 0.2, 0.05, seed=4)
        assert first.edge_pairs() == second.edge_pairs()

    def test_attributed_model_splits_links_evenly(self):
        g, records, blocks, topics = attributed_block_model(seed=2)
        block_links = sum(1 for u, v, _ in g.edges() if blocks[u] == blocks[v])
        topic_links = g.num_edges - block_links
        assert topic_links == block_links
        for u, v, _ in g.edges():
            if blocks[u] != blocks[v]:
                assert topics[u] == topics[v]
        assert len(records) == g.num_nodes * 5
        assert np.bincount(topics).tolist() == [80, 80]

    def test_attributed_vocabularies_are_disjoint(self):
        _, records, _, topics = attributed_block_model(seed=2)
        for record in records:
            topic = topics[int(record['node'][1:])]
            for word in record['text'].split():
                assert word.startswith(f"t{topic}w") or word.startswith('common')
