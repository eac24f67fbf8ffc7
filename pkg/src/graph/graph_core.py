"""
Graph Core - Weighted directed graphs loaded from edge-list files
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as ssp

from src.utils.errors import GraphFormatError, UnknownNodeError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LoadReport:
    """What happened while an edge list was parsed"""
    nodes: int
    edges: int
    self_loops: int = 0
    merged_duplicates: int = 0

    def summary(self):
        return (f"nodes={self.nodes} edges={self.edges} "
                f"self_loops_dropped={self.self_loops} "
                f"duplicates_merged={self.merged_duplicates}")


class Graph:
    """Immutable weighted graph over dense integer node indices.

    External node tokens are kept alongside; `resolve` accepts either a token
    (str) or an internal index (int). Undirected graphs store both arcs of
    every edge, so adjacency queries behave the same in both modes.
    """

    def __init__(self, tokens, arcs, directed=True, load_report=None):
        self.directed = bool(directed)
        self._tokens = tuple(tokens)
        self._index = {token: i for i, token in enumerate(self._tokens)}
        if len(self._index) != len(self._tokens):
            raise GraphFormatError("duplicate node tokens")

        n = len(self._tokens)
        self._weights = {}
        buckets = [[] for _ in range(n)]
        for (u, v), w in sorted(arcs.items()):
            if u == v:
                raise GraphFormatError(f"self-loop on {self._tokens[u]!r}")
            if not w > 0:
                raise GraphFormatError(f"non-positive weight {w} on ({u}, {v})")
            self._weights[(u, v)] = float(w)
            buckets[u].append((v, float(w)))

        # Per-node adjacency, ascending by target index
        self._out_targets = [np.array([v for v, _ in b], dtype=np.int64) for b in buckets]
        self._out_weights = [np.array([w for _, w in b], dtype=float) for b in buckets]
        self._in_targets = None
        self._neighbor_sets = None
        self._weight_matrix = None

        self.load_report = load_report or LoadReport(n, self.num_edges)

    # Size and identity

    @property
    def num_nodes(self):
        return len(self._tokens)

    @property
    def num_arcs(self):
        """Total length of all out-adjacency lists"""
        return len(self._weights)

    @property
    def num_edges(self):
        return self.num_arcs if self.directed else self.num_arcs // 2

    @property
    def tokens(self):
        return self._tokens

    def has_node(self, node):
        try:
            self.resolve(node)
        except UnknownNodeError:
            return False
        return True

    def resolve(self, node):
        """Map a token or index to the internal index"""
        if isinstance(node, (int, np.integer)) and not isinstance(node, bool):
            if 0 <= node < self.num_nodes:
                return int(node)
            raise UnknownNodeError(f"node index {node} out of range [0, {self.num_nodes})")
        if isinstance(node, str):
            try:
                return self._index[node]
            except KeyError:
                raise UnknownNodeError(f"unknown node {node!r}") from None
        raise UnknownNodeError(f"not a node reference: {node!r}")

    def token_of(self, index):
        return self._tokens[self.resolve(index)]

    # Adjacency

    def out_neighbors(self, node):
        """All (token, weight) out-neighbors, ascending by internal index"""
        u = self.resolve(node)
        return [(self._tokens[v], float(w))
                for v, w in zip(self._out_targets[u], self._out_weights[u])]

    def out_targets(self, u):
        return self._out_targets[u]

    def out_weights(self, u):
        return self._out_weights[u]

    def out_degree(self, node):
        return len(self._out_targets[self.resolve(node)])

    def in_neighbors(self, node):
        u = self.resolve(node)
        if self._in_targets is None:
            mirror = [[] for _ in range(self.num_nodes)]
            for (a, b), w in self._weights.items():
                mirror[b].append((a, w))
            self._in_targets = mirror
        return [(self._tokens[v], w) for v, w in self._in_targets[u]]

    def weight(self, u, v):
        """Stored weight of arc (u, v), or None"""
        return self._weights.get((self.resolve(u), self.resolve(v)))

    def has_edge(self, u, v):
        return self.weight(u, v) is not None

    def edges(self):
        """Yield (u, v, weight) over internal indices, each edge once"""
        for (u, v), w in self._weights.items():
            if self.directed or u < v:
                yield u, v, w

    def edge_pairs(self):
        """Edges as token pairs, each edge once"""
        return [(self._tokens[u], self._tokens[v]) for u, v, _ in self.edges()]

    def neighbor_sets(self):
        """Undirected neighborhoods (union of in and out) per node index"""
        if self._neighbor_sets is None:
            sets = [set() for _ in range(self.num_nodes)]
            for (u, v) in self._weights:
                sets[u].add(v)
                sets[v].add(u)
            self._neighbor_sets = [frozenset(s) for s in sets]
        return self._neighbor_sets

    def weight_matrix(self):
        """Sparse CSR matrix of arc weights (zero where no arc)"""
        if self._weight_matrix is None:
            n = self.num_nodes
            if self._weights:
                rows, cols = zip(*self._weights.keys())
                data = list(self._weights.values())
            else:
                rows, cols, data = (), (), ()
            self._weight_matrix = ssp.csr_matrix(
                (np.asarray(data, dtype=float), (np.asarray(rows, dtype=np.int64),
                                                 np.asarray(cols, dtype=np.int64))),
                shape=(n, n))
        return self._weight_matrix

    # Derived graphs

    def remove_edges(self, pairs):
        """Copy of the graph without the given edges; node indexing is preserved"""
        drop = set()
        for u, v in pairs:
            a, b = self.resolve(u), self.resolve(v)
            drop.add((a, b))
            if not self.directed:
                drop.add((b, a))
        arcs = {k: w for k, w in self._weights.items() if k not in drop}
        return Graph(self._tokens, arcs, directed=self.directed)

    def with_nodes(self, tokens):
        """Copy with any missing tokens appended as isolated nodes"""
        extra = [t for t in dict.fromkeys(tokens) if t not in self._index]
        if not extra:
            return self
        return Graph(self._tokens + tuple(extra), self._weights, directed=self.directed)

    def undirected_view(self):
        return undirected_view(self)

    def to_networkx(self):
        """networkx graph over internal indices (undirected view)"""
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(range(self.num_nodes))
        for u, v, w in undirected_view(self).edges():
            g.add_edge(u, v, weight=w)
        return g

    def __repr__(self):
        kind = "directed" if self.directed else "undirected"
        return f"Graph({kind}, nodes={self.num_nodes}, edges={self.num_edges})"


def _decode(raw, line_number):
    if isinstance(raw, bytes):
        try:
            return raw.decode('utf-8')
        except UnicodeDecodeError as e:
            raise GraphFormatError(f"invalid UTF-8 ({e.reason})", line_number) from None
    return raw


def parse_edge_list(stream, directed=True, default_weight=1.0):
    """Parse `src<TAB>dst[<TAB>weight]` lines into a Graph.

    Self-loops are dropped and duplicate edges merged by summing weights;
    both are counted in `graph.load_report`.
    """
    if not (math.isfinite(default_weight) and default_weight > 0):
        raise GraphFormatError(f"default weight must be positive, got {default_weight}")

    index = {}
    tokens = []
    weights = {}
    self_loops = 0
    merged = 0

    def register(token):
        if token not in index:
            index[token] = len(tokens)
            tokens.append(token)
        return index[token]

    for line_number, raw in enumerate(stream, 1):
        line = _decode(raw, line_number).strip()
        if not line or line.startswith('#'):
            continue
        parts = line.split('\t') if '\t' in line else line.split()
        parts = [p.strip() for p in parts]
        if len(parts) not in (2, 3) or not parts[0] or not parts[1]:
            raise GraphFormatError(f"expected 'src<TAB>dst[<TAB>weight]', got {line!r}",
                                   line_number)
        for token in parts[:2]:
            if len(token.split()) != 1:
                raise GraphFormatError(f"node id {token!r} contains whitespace", line_number)

        if len(parts) == 3:
            try:
                w = float(parts[2])
            except ValueError:
                raise GraphFormatError(f"weight {parts[2]!r} is not a number",
                                       line_number) from None
            if not (math.isfinite(w) and w > 0):
                raise GraphFormatError(f"weight must be positive, got {parts[2]}", line_number)
        else:
            w = float(default_weight)

        u = register(parts[0])
        v = register(parts[1])
        if u == v:
            self_loops += 1
            continue

        key = (u, v) if directed else (min(u, v), max(u, v))
        if key in weights:
            merged += 1
            weights[key] += w
        else:
            weights[key] = w

    if directed:
        arcs = weights
    else:
        arcs = {}
        for (u, v), w in weights.items():
            arcs[(u, v)] = w
            arcs[(v, u)] = w

    report = LoadReport(len(tokens), len(weights), self_loops, merged)
    logger.info("Loaded edge list: %s", report.summary())
    return Graph(tokens, arcs, directed=directed, load_report=report)


def load_edge_list(path, directed=True, default_weight=1.0):
    with open(path, 'rb') as f:
        return parse_edge_list(f, directed=directed, default_weight=default_weight)


def write_edge_list(graph, stream):
    """Write each edge once as `src<TAB>dst<TAB>weight`"""
    for u, v, w in graph.edges():
        stream.write(f"{graph.tokens[u]}\t{graph.tokens[v]}\t{float(w)!r}\n")


def save_edge_list(graph, path):
    with open(path, 'w', encoding='utf-8') as f:
        write_edge_list(graph, f)


def undirected_view(g):
    """Symmetric graph whose weight(u, v) is the sum of both arc weights"""
    if not g.directed:
        return g
    summed = {}
    for u, v, w in g.edges():
        key = (min(u, v), max(u, v))
        summed[key] = summed.get(key, 0.0) + w
    arcs = {}
    for (u, v), w in summed.items():
        arcs[(u, v)] = w
        arcs[(v, u)] = w
    return Graph(g.tokens, arcs, directed=False)
