"""
Community - Louvain modularity maximization and community assignments
"""

import logging

import numpy as np

from src.graph.graph_core import undirected_view
from src.utils.errors import CommunityError, UnknownNodeError

logger = logging.getLogger(__name__)

# Minimum modularity gain for a node move to count as an improvement
_GAIN_EPSILON = 1e-12


class CommunityAssignment:
    """Partition of node indices into dense community ids [0, C)"""

    def __init__(self, labels):
        labels = np.asarray(labels, dtype=np.int64)
        # Canonical ids: communities numbered by their lowest node index
        remap = {}
        dense = np.empty(len(labels), dtype=np.int64)
        for i, label in enumerate(labels):
            if label not in remap:
                remap[label] = len(remap)
            dense[i] = remap[label]
        self.membership = dense
        self.membership.setflags(write=False)

        members = [[] for _ in range(len(remap))]
        for node, community in enumerate(dense):
            members[community].append(node)
        self.members = tuple(np.array(m, dtype=np.int64) for m in members)

        # Position of each node inside its member array
        self.position = np.empty(len(labels), dtype=np.int64)
        for nodes in self.members:
            self.position[nodes] = np.arange(len(nodes))

    @property
    def num_nodes(self):
        return len(self.membership)

    @property
    def num_communities(self):
        return len(self.members)

    def community_of(self, node):
        return int(self.membership[node])

    def members_of(self, community):
        return self.members[community]

    def sizes(self):
        return sorted((len(m) for m in self.members), reverse=True)

    def save(self, graph, path):
        """Write `node<TAB>community_id` lines"""
        with open(path, 'w', encoding='utf-8') as f:
            for node, community in enumerate(self.membership):
                f.write(f"{graph.tokens[node]}\t{community}\n")

    @classmethod
    def load(cls, graph, path):
        """Read a `node<TAB>community_id` dump; every graph node must be covered"""
        labels = {}
        with open(path, 'r', encoding='utf-8') as f:
            for line_number, line in enumerate(f, 1):
                line = line.strip()
                if not line or line.startswith('#'):
                    continue
                parts = line.split('\t') if '\t' in line else line.split()
                if len(parts) != 2:
                    raise CommunityError(f"{path}:{line_number}: expected 'node<TAB>community_id'")
                try:
                    labels[graph.resolve(parts[0])] = int(parts[1])
                except UnknownNodeError:
                    logger.warning("Ignoring community entry for unknown node %r", parts[0])
                except ValueError:
                    raise CommunityError(
                        f"{path}:{line_number}: community id {parts[1]!r} is not an integer"
                    ) from None
        missing = [graph.tokens[i] for i in range(graph.num_nodes) if i not in labels]
        if missing:
            raise CommunityError(f"{len(missing)} nodes missing from {path}, e.g. {missing[0]!r}")
        return cls([labels[i] for i in range(graph.num_nodes)])

    def __repr__(self):
        return f"CommunityAssignment(nodes={self.num_nodes}, communities={self.num_communities})"


class _LouvainLevel:
    """One aggregation level: symmetric weighted adjacency with self-loops"""

    def __init__(self, adjacency, self_loops):
        self.adjacency = adjacency  # list of {neighbor: weight}, no self entries
        self.self_loops = self_loops  # internal weight, already counted in both directions
        self.degree = np.array([sum(nbrs.values()) + loop
                                for nbrs, loop in zip(adjacency, self_loops)], dtype=float)
        self.total = float(self.degree.sum())

    def __len__(self):
        return len(self.adjacency)

    def move_nodes(self, rng):
        """Greedy local moves until no node improves modularity; returns labels"""
        n = len(self)
        community = np.arange(n)
        community_total = self.degree.copy()
        order = rng.permutation(n)
        moved_any = False

        improved = True
        while improved:
            improved = False
            for node in order:
                current = community[node]
                k_i = self.degree[node]

                # Weight from node into each neighboring community
                links = {}
                for nbr, w in self.adjacency[node].items():
                    c = community[nbr]
                    links[c] = links.get(c, 0.0) + w

                # Take the node out of its community
                community_total[current] -= k_i

                best = current
                best_gain = links.get(current, 0.0) - k_i * community_total[current] / self.total
                for c in sorted(links):
                    if c == current:
                        continue
                    gain = links[c] - k_i * community_total[c] / self.total
                    if gain > best_gain + _GAIN_EPSILON:
                        best, best_gain = c, gain

                community_total[best] += k_i
                if best != current:
                    community[node] = best
                    improved = True
                    moved_any = True

        return community, moved_any

    def aggregate(self, community):
        """Collapse communities into single nodes"""
        ids = {c: i for i, c in enumerate(sorted(set(community.tolist())))}
        m = len(ids)
        adjacency = [dict() for _ in range(m)]
        self_loops = [0.0] * m
        for node, nbrs in enumerate(self.adjacency):
            a = ids[community[node]]
            self_loops[a] += self.self_loops[node]
            for nbr, w in nbrs.items():
                b = ids[community[nbr]]
                if a == b:
                    self_loops[a] += w
                else:
                    adjacency[a][b] = adjacency[a].get(b, 0.0) + w
        return _LouvainLevel(adjacency, self_loops), np.array([ids[c] for c in community])


def louvain(g, seed=0):
    """Louvain community detection on the undirected weighted view of g"""
    if g.num_nodes == 0:
        raise CommunityError("cannot detect communities in an empty graph")

    view = undirected_view(g)
    rng = np.random.default_rng(seed)
    adjacency = [dict() for _ in range(view.num_nodes)]
    for u in range(view.num_nodes):
        for v, w in zip(view.out_targets(u), view.out_weights(u)):
            adjacency[u][int(v)] = float(w)

    level = _LouvainLevel(adjacency, [0.0] * view.num_nodes)
    labels = np.arange(view.num_nodes)
    if level.total == 0:
        logger.info("Graph has no edges; every node is its own community")
        return CommunityAssignment(labels)

    passes = 0
    while True:
        community, moved = level.move_nodes(rng)
        if not moved:
            break
        level, mapping = level.aggregate(community)
        labels = mapping[labels]
        passes += 1
        if len(level) == 1:
            break

    assignment = CommunityAssignment(labels)
    logger.info("Louvain finished after %d levels: %d communities, Q=%.4f",
                passes, assignment.num_communities, modularity(g, assignment))
    return assignment


def modularity(g, a):
    """Weighted modularity Q of assignment a on the undirected view of g"""
    if a.num_nodes != g.num_nodes:
        raise CommunityError(
            f"assignment covers {a.num_nodes} nodes but graph has {g.num_nodes}")
    view = undirected_view(g)
    degree = np.zeros(view.num_nodes)
    inside = np.zeros(a.num_communities)
    for u, v, w in view.edges():
        degree[u] += w
        degree[v] += w
        if a.membership[u] == a.membership[v]:
            inside[a.membership[u]] += 2 * w
    total = degree.sum()
    if total == 0:
        return 0.0
    community_degree = np.bincount(a.membership, weights=degree, minlength=a.num_communities)
    return float(np.sum(inside / total - (community_degree / total) ** 2))
