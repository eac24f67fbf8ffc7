"""
Structural Embedding - Edge-weighted skip-gram over community-aware walks
"""

import logging

import numpy as np
from scipy.special import expit

from src.embedding.base_embedder import BaseEmbedder, EmbeddingMatrix, MAX_EXP, sigmoid
from src.utils.errors import DimensionMismatchError, EmbeddingError

logger = logging.getLogger(__name__)


def edge_context_weight(g, u, v):
    """Stored weight of arc (u, v), 1 for any other pair"""
    w = g.weight(u, v)
    return 1.0 if w is None else float(w)


def pair_probability(f_u, f_v, weight):
    """Probability of v in u's context: sigmoid of the weighted dot product"""
    f_u = np.asarray(f_u, dtype=float)
    f_v = np.asarray(f_v, dtype=float)
    if f_u.shape != f_v.shape:
        raise DimensionMismatchError(f"vector shapes differ: {f_u.shape} vs {f_v.shape}")
    if not weight > 0:
        raise EmbeddingError(f"pair weight must be positive, got {weight}")
    return float(expit(np.dot(f_u, f_v) * weight))


def pair_loss_and_grad(f_u, c_v, weight, label):
    """-log P for one (center, context) pair and its gradients.

    label 1 is an observed pair, label 0 a negative sample; returns
    (loss, d loss / d f_u, d loss / d c_v).
    """
    f_u = np.asarray(f_u, dtype=float)
    c_v = np.asarray(c_v, dtype=float)
    sign = 1.0 if label else -1.0
    z = weight * np.dot(f_u, c_v)
    loss = float(np.logaddexp(0.0, -sign * z))
    # d loss / d z
    dz = -(float(label) - expit(z)) * weight
    return loss, dz * c_v, dz * f_u


class StructuralEmbedder(BaseEmbedder):
    """Skip-gram with negative sampling where each observed pair's score is
    multiplied by the edge weight between center and context.
    """

    def __init__(self, graph, corpus, cfg):
        super().__init__(cfg)
        if len(corpus) == 0:
            raise EmbeddingError("walk corpus is empty")
        for walk in corpus:
            if len(walk) and (walk.min() < 0 or walk.max() >= graph.num_nodes):
                raise EmbeddingError("walk corpus references a node missing from the graph")
        self.graph = graph
        self.corpus = corpus
        self.input = None
        self.context = None

    def _initialize(self):
        n, d = self.graph.num_nodes, self.cfg.dim
        self.input = self.rng.uniform(-0.5 / d, 0.5 / d, size=(n, d))
        self.context = np.zeros((n, d))
        counts = np.bincount(np.concatenate(self.corpus.walks), minlength=n)
        self.build_noise_distribution(counts)
        self._weights = self.graph.weight_matrix()
        self._total_work = max(1, self.corpus.total_positions() * self.cfg.epochs)

    def _batches(self, epoch_rng):
        for i in epoch_rng.permutation(len(self.corpus)):
            walk = self.corpus.walks[i]
            yield walk, len(walk)

    def window_pairs(self, walk):
        """All (center, context) index pairs with |i - j| <= window, truncated at walk ends"""
        centers, contexts = [], []
        for offset in range(1, min(self.cfg.window, len(walk) - 1) + 1):
            centers += [walk[:-offset], walk[offset:]]
            contexts += [walk[offset:], walk[:-offset]]
        if not centers:
            return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
        return np.concatenate(centers), np.concatenate(contexts)

    def _train_batch(self, walk, lr, rng):
        centers, contexts = self.window_pairs(walk)
        if len(centers) == 0:
            return 0.0

        # Context weights: stored arc weight, 1 for non-edges
        weights = np.asarray(self._weights[centers, contexts], dtype=float).ravel()
        weights[weights == 0] = 1.0

        F = self.input[centers]
        C = self.context[contexts]
        z = np.clip(weights * np.einsum('ij,ij->i', F, C), -MAX_EXP, MAX_EXP)
        g = (1.0 - sigmoid(z)) * weights
        loss = float(np.sum(np.logaddexp(0.0, -z)))
        grad_f = g[:, None] * C
        grad_c = g[:, None] * F

        k = self.cfg.negatives
        if k > 0:
            negatives = self.draw_negatives(rng, (len(centers), k))
            N = self.context[negatives]
            zn = np.clip(np.einsum('id,ikd->ik', F, N), -MAX_EXP, MAX_EXP)
            gn = -sigmoid(zn)
            # A negative equal to the observed context contributes nothing
            keep = negatives != contexts[:, None]
            gn = gn * keep
            loss += float(np.sum(np.logaddexp(0.0, zn) * keep))
            grad_f += np.einsum('ik,ikd->id', gn, N)
            grad_n = gn[:, :, None] * F[:, None, :]
            np.add.at(self.context, negatives.ravel(), lr * grad_n.reshape(-1, self.cfg.dim))

        np.add.at(self.input, centers, lr * grad_f)
        np.add.at(self.context, contexts, lr * grad_c)
        return loss


def train_structural(corpus, g, cfg, progress=False):
    """Learn structural vectors f(u) for every node of g from the walk corpus"""
    embedder = StructuralEmbedder(g, corpus, cfg)
    embedder.fit(progress=progress)
    logger.info("Structural embedding trained: %d nodes, d=%d, %d epochs",
                g.num_nodes, cfg.dim, cfg.epochs)
    return EmbeddingMatrix(g.tokens, embedder.input, context=embedder.context)
