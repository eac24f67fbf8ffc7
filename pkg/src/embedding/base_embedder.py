"""
Base Embedder - Common machinery for every SGD embedding trainer
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from tqdm import tqdm

from src.utils.errors import ConfigError, EmbeddingError

logger = logging.getLogger(__name__)

# Scores are clipped to this range before exponentiation
MAX_EXP = 6.0


@dataclass(frozen=True)
class TrainConfig:
    dim: int = 100
    window: int = 10
    epochs: int = 5
    negatives: int = 5
    initial_lr: float = 0.025
    final_lr: float = 0.0001
    min_count: int = 1
    seed: int = 42
    threads: int = 1

    def __post_init__(self):
        if self.dim < 1:
            raise ConfigError(f"dimension must be >= 1, got {self.dim}")
        if self.window < 1:
            raise ConfigError(f"window must be >= 1, got {self.window}")
        if self.epochs < 0:
            raise ConfigError(f"epochs must be >= 0, got {self.epochs}")
        if self.negatives < 0:
            raise ConfigError(f"negatives must be >= 0, got {self.negatives}")
        if not self.initial_lr > self.final_lr >= 0:
            raise ConfigError("learning rates must satisfy initial > final >= 0, "
                              f"got {self.initial_lr} -> {self.final_lr}")
        if self.threads < 1:
            raise ConfigError(f"threads must be >= 1, got {self.threads}")
        if self.seed < 0:
            raise ConfigError(f"seed must be >= 0, got {self.seed}")


def sigmoid(x):
    return 1.0 / (1.0 + np.exp(-np.clip(x, -MAX_EXP, MAX_EXP)))


class EmbeddingMatrix:
    """Dense vectors keyed by node token, all of one dimension"""

    def __init__(self, tokens, vectors, context=None):
        vectors = np.asarray(vectors, dtype=float)
        if vectors.ndim != 2 or vectors.shape[0] != len(tokens):
            raise EmbeddingError(f"expected {len(tokens)} vectors, got shape {vectors.shape}")
        if not np.all(np.isfinite(vectors)):
            raise EmbeddingError("embedding contains non-finite entries")
        self.tokens = tuple(tokens)
        self.vectors = vectors
        self.context = context
        self._index = {token: i for i, token in enumerate(self.tokens)}

    @property
    def dim(self):
        return self.vectors.shape[1]

    def __len__(self):
        return len(self.tokens)

    def __contains__(self, token):
        return token in self._index

    def vector(self, token):
        try:
            return self.vectors[self._index[token]]
        except KeyError:
            raise EmbeddingError(f"no vector for node {token!r}") from None

    def vector_or_zero(self, token):
        i = self._index.get(token)
        return np.zeros(self.dim) if i is None else self.vectors[i]

    def save_word2vec(self, path):
        """word2vec text format: header `count dim`, then `token v1 ... vd`"""
        with open(path, 'w', encoding='utf-8') as f:
            f.write(f"{len(self.tokens)} {self.dim}\n")
            for token, row in zip(self.tokens, self.vectors):
                f.write(token + ' ' + ' '.join(repr(float(x)) for x in row) + '\n')

    @classmethod
    def load_word2vec(cls, path):
        with open(path, 'r', encoding='utf-8') as f:
            header = f.readline().split()
            try:
                count, dim = int(header[0]), int(header[1])
            except (IndexError, ValueError):
                raise EmbeddingError(f"{path}: missing 'count dim' header") from None
            tokens, rows = [], []
            for line_number, line in enumerate(f, 2):
                parts = line.rstrip('\n').rsplit(' ', dim)
                if len(parts) != dim + 1:
                    raise EmbeddingError(
                        f"{path}:{line_number}: expected {dim} values, got {len(parts) - 1}")
                tokens.append(parts[0])
                try:
                    rows.append([float(x) for x in parts[1:]])
                except ValueError:
                    raise EmbeddingError(f"{path}:{line_number}: non-numeric value") from None
        if len(tokens) != count:
            raise EmbeddingError(f"{path}: header says {count} vectors, found {len(tokens)}")
        return cls(tokens, np.array(rows, dtype=float).reshape(count, dim))

    def __repr__(self):
        return f"EmbeddingMatrix(n={len(self)}, dim={self.dim})"


class BaseEmbedder:
    """Shared SGD loop: subclasses provide the parameters and per-batch update.

    Subclasses override `_initialize`, `_batches` and `_train_batch`; the base
    class owns the learning-rate schedule, noise distribution, progress and
    thread sharding.
    """

    def __init__(self, cfg):
        self.cfg = cfg
        self.rng = np.random.default_rng(cfg.seed)
        self.noise_probs = None
        self._noise_cdf = None
        self._processed = 0
        self._total_work = 1

    def build_noise_distribution(self, counts, power=0.75):
        """Unigram^power sampling distribution for negatives"""
        counts = np.asarray(counts, dtype=float)
        weights = counts ** power
        if weights.sum() == 0:
            weights = np.ones_like(weights)
        self.noise_probs = weights / weights.sum()
        self._noise_cdf = np.cumsum(self.noise_probs)
        self._noise_cdf[-1] = 1.0

    def draw_negatives(self, rng, shape):
        return np.searchsorted(self._noise_cdf, rng.random(shape), side='right')

    def learning_rate(self):
        """Linear decay over all updates of all epochs"""
        progress = min(1.0, self._processed / self._total_work)
        return self.cfg.initial_lr - (self.cfg.initial_lr - self.cfg.final_lr) * progress

    def _initialize(self):
        """Create parameters - to be overridden by subclasses"""
        raise NotImplementedError

    def _batches(self, epoch_rng):
        """Yield (batch, work units) for one epoch - to be overridden"""
        raise NotImplementedError

    def _train_batch(self, batch, lr, rng):
        """Apply one batch of updates, return the batch loss - to be overridden"""
        raise NotImplementedError

    def _run_epoch(self, epoch, progress):
        epoch_rng = np.random.default_rng([self.cfg.seed, epoch])
        batches = list(self._batches(epoch_rng))
        if self.cfg.threads > 1:
            loss = self._run_sharded(batches, epoch)
        else:
            loss = 0.0
            for batch, work in tqdm(batches, desc=f"epoch {epoch + 1}", disable=not progress):
                loss += self._train_batch(batch, self.learning_rate(), epoch_rng)
                self._processed += work
        logger.debug("%s epoch %d: loss=%.4f lr=%.5f",
                     self.__class__.__name__, epoch + 1, loss, self.learning_rate())
        return loss

    def _run_sharded(self, batches, epoch):
        """Unsynchronized updates from several threads on shared arrays"""
        shards = [batches[i::self.cfg.threads] for i in range(self.cfg.threads)]

        def work(shard_index):
            rng = np.random.default_rng([self.cfg.seed, epoch, shard_index])
            total = 0.0
            for batch, units in shards[shard_index]:
                total += self._train_batch(batch, self.learning_rate(), rng)
                self._processed += units
            return total

        with ThreadPoolExecutor(max_workers=self.cfg.threads) as pool:
            return float(sum(pool.map(work, range(self.cfg.threads))))

    def fit(self, progress=False):
        """Initialize then run cfg.epochs epochs; returns per-epoch losses"""
        self._initialize()
        self.losses = []
        for epoch in range(self.cfg.epochs):
            self.losses.append(self._run_epoch(epoch, progress))
        return self.losses
