"""
Features - Node vectors (structural + content) and Hadamard edge features
"""

from enum import Enum

import numpy as np

from src.utils.errors import DimensionMismatchError, EmbeddingError


class AblationMode(Enum):
    BOTH = 'both'
    STRUCTURAL_ONLY = 'structural-only'
    CONTENT_ONLY = 'content-only'

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        for mode in cls:
            if mode.value == value:
                return mode
        choices = ', '.join(m.value for m in cls)
        raise ValueError(f"unknown ablation mode {value!r} (choose from {choices})")

    @property
    def uses_structure(self):
        return self is not AblationMode.CONTENT_ONLY

    @property
    def uses_content(self):
        return self is not AblationMode.STRUCTURAL_ONLY


def concat_features(structural, content, node):
    """Structural vector followed by content vector (zeros if the node has no content)"""
    if node not in structural:
        raise EmbeddingError(f"node {node!r} has no structural vector")
    parts = [structural.vector(node)]
    if content is not None:
        parts.append(content.vector_or_zero(node))
    return np.concatenate(parts)


def hadamard_edge(f_u, f_v):
    """Component-wise product of two node vectors"""
    f_u = np.asarray(f_u, dtype=float)
    f_v = np.asarray(f_v, dtype=float)
    if f_u.shape != f_v.shape:
        raise DimensionMismatchError(f"node vectors differ in shape: {f_u.shape} vs {f_v.shape}")
    return f_u * f_v


class FeatureComposer:
    """Builds edge features for node pairs under an ablation mode"""

    def __init__(self, structural=None, content=None, mode=AblationMode.BOTH):
        self.mode = AblationMode.parse(mode)
        if self.mode.uses_structure and structural is None:
            raise EmbeddingError(f"mode {self.mode.value} needs structural vectors")
        if self.mode.uses_content and content is None:
            raise EmbeddingError(f"mode {self.mode.value} needs content vectors")
        self.structural = structural if self.mode.uses_structure else None
        self.content = content if self.mode.uses_content else None

    @property
    def dim(self):
        return ((self.structural.dim if self.structural is not None else 0)
                + (self.content.dim if self.content is not None else 0))

    def node_vector(self, node):
        if self.structural is not None:
            return concat_features(self.structural, self.content, node)
        return self.content.vector_or_zero(node)

    def edge_features(self, pairs):
        """(len(pairs), dim) matrix of Hadamard edge features"""
        if not pairs:
            return np.zeros((0, self.dim))
        return np.vstack([hadamard_edge(self.node_vector(u), self.node_vector(v))
                          for u, v in pairs])
