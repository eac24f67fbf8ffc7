"""
Classifier - Logistic regression trained by SGD on edge features
"""

import json
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from src.utils.errors import ClassifierError, DimensionMismatchError

logger = logging.getLogger(__name__)


@dataclass
class LogisticModel:
    weights: np.ndarray
    bias: float = 0.0
    # Standardization applied to inputs before the affine score
    offset: np.ndarray = None
    scale: np.ndarray = None
    losses: list = field(default_factory=list)

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        d = len(self.weights)
        self.offset = np.zeros(d) if self.offset is None else np.asarray(self.offset, dtype=float)
        self.scale = np.ones(d) if self.scale is None else np.asarray(self.scale, dtype=float)
        if not (np.all(np.isfinite(self.weights)) and np.isfinite(self.bias)):
            raise ClassifierError("model parameters must be finite")

    @property
    def dim(self):
        return len(self.weights)

    def decision(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.dim:
            raise DimensionMismatchError(
                f"feature dimension {X.shape[1]} does not match model dimension {self.dim}")
        return ((X - self.offset) / self.scale) @ self.weights + self.bias

    def predict_proba(self, X):
        return expit(self.decision(X))

    def save(self, path):
        summary = {
            'dim': self.dim,
            'bias': float(self.bias),
            'weights': [float(w) for w in self.weights],
            'offset': [float(x) for x in self.offset],
            'scale': [float(x) for x in self.scale],
            'final_loss': float(self.losses[-1]) if self.losses else None,
        }
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(summary, f, indent=2, sort_keys=True)
            f.write('\n')

    @classmethod
    def load(cls, path):
        with open(path, 'r', encoding='utf-8') as f:
            try:
                summary = json.load(f)
            except json.JSONDecodeError as e:
                raise ClassifierError(f"{path}: invalid model file ({e.msg})") from None
        return cls(np.array(summary['weights']), summary['bias'],
                   np.array(summary['offset']), np.array(summary['scale']))


def predict(m, x):
    """Probability that the edge feature vector x is a link"""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or len(x) != m.dim:
        raise DimensionMismatchError(f"expected a vector of dimension {m.dim}, got {x.shape}")
    return float(m.predict_proba(x)[0])


def logistic_loss_and_grad(weights, bias, X, y, l2):
    """Mean cross-entropy plus (l2 / 2) * ||w||^2, with gradients (dw, db)"""
    z = X @ weights + bias
    loss = float(np.mean(np.logaddexp(0.0, z) - y * z) + 0.5 * l2 * weights @ weights)
    residual = expit(z) - y
    grad_w = X.T @ residual / len(y) + l2 * weights
    grad_b = float(np.mean(residual))
    return loss, grad_w, grad_b


def train_classifier(features, labels, lr=0.1, epochs=300, l2=1e-4, batch_size=None,
                     standardize=True, seed=0):
    """Fit logistic regression by mini-batch SGD with 1/sqrt(t) step decay.

    An epoch that raises the full training loss is undone and the step size
    halved, so the recorded loss never increases.
    """
    X = np.asarray(features, dtype=float)
    y = np.asarray(labels, dtype=float)
    if X.ndim != 2 or len(X) != len(y):
        raise ClassifierError(f"features {X.shape} and labels {y.shape} do not line up")
    if not np.all(np.isin(y, (0.0, 1.0))):
        raise ClassifierError("labels must be 0 or 1")
    if len(np.unique(y)) < 2:
        raise ClassifierError("training labels contain a single class")

    d = X.shape[1]
    offset = np.zeros(d)
    scale = np.ones(d)
    if standardize:
        offset = X.mean(axis=0)
        scale = X.std(axis=0)
        scale[scale == 0] = 1.0
    Z = (X - offset) / scale

    rng = np.random.default_rng(seed)
    w = np.zeros(d)
    b = 0.0
    batch = len(y) if batch_size is None else max(1, int(batch_size))
    step_factor = 1.0
    loss, _, _ = logistic_loss_and_grad(w, b, Z, y, l2)
    losses = [loss]

    for epoch in range(epochs):
        step = step_factor * lr / np.sqrt(epoch + 1)
        w_new, b_new = w.copy(), b
        order = rng.permutation(len(y)) if batch < len(y) else np.arange(len(y))
        for start in range(0, len(y), batch):
            idx = order[start:start + batch]
            _, grad_w, grad_b = logistic_loss_and_grad(w_new, b_new, Z[idx], y[idx], l2)
            w_new -= step * grad_w
            b_new -= step * grad_b
        new_loss, _, _ = logistic_loss_and_grad(w_new, b_new, Z, y, l2)
        if new_loss > loss:
            step_factor *= 0.5
            continue
        w, b, loss = w_new, b_new, new_loss
        losses.append(loss)

    logger.info("Classifier trained on %d examples (dim %d): loss %.4f -> %.4f",
                len(y), d, losses[0], losses[-1])
    return LogisticModel(w, b, offset, scale, losses)
