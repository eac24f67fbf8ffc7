"""
Content Embedding - Node documents and paragraph vectors (PV-DM, concatenation)
"""

import json
import logging
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.special import expit, softmax

from src.embedding.base_embedder import BaseEmbedder, EmbeddingMatrix, MAX_EXP, sigmoid
from src.utils.errors import ContentFormatError, DimensionMismatchError, EmbeddingError

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def _is_separator(ch):
    # Punctuation, separators, symbols and control characters split tokens;
    # format characters such as ZWNJ stay inside words
    category = unicodedata.category(ch)
    return ch.isspace() or category[0] in 'PZS' or category == 'Cc'


def tokenize(text):
    """Lowercase and split on Unicode whitespace/punctuation; no stemming"""
    tokens = []
    current = []
    for ch in text.lower():
        if _is_separator(ch):
            if current:
                tokens.append(''.join(current))
                current = []
        else:
            current.append(ch)
    if current:
        tokens.append(''.join(current))
    return tokens


@dataclass
class NodeDocument:
    """All posts of one node; each post is one paragraph of tokens"""
    node: str
    paragraphs: list = field(default_factory=list)

    def num_tokens(self):
        return sum(len(p) for p in self.paragraphs)


def assemble_documents(stream):
    """Group JSON-lines records `{"node": ..., "text": ...}` into one document per node"""
    documents = {}
    for record_number, raw in enumerate(stream, 1):
        if isinstance(raw, bytes):
            try:
                raw = raw.decode('utf-8')
            except UnicodeDecodeError as e:
                raise ContentFormatError(f"invalid UTF-8 ({e.reason})", record_number) from None
        if not raw.strip():
            continue
        try:
            record = json.loads(raw)
        except json.JSONDecodeError as e:
            raise ContentFormatError(f"invalid JSON ({e.msg})", record_number) from None
        if not isinstance(record, dict):
            raise ContentFormatError("record must be a JSON object", record_number)
        node, text = record.get('node'), record.get('text')
        if isinstance(node, int) and not isinstance(node, bool):
            node = str(node)
        if not isinstance(node, str) or not node:
            raise ContentFormatError("missing or invalid 'node'", record_number)
        if not isinstance(text, str):
            raise ContentFormatError("missing or invalid 'text'", record_number)
        # Other attributes (timestamps, ids) are ignored
        documents.setdefault(node, NodeDocument(node)).paragraphs.append(tokenize(text))
    return list(documents.values())


def load_documents(path):
    with open(path, 'rb') as f:
        return assemble_documents(f)


class Vocabulary:
    """Token index over tokens whose count reaches the threshold"""

    def __init__(self, counts, min_count=2):
        kept = sorted((t for t, c in counts.items() if c >= min_count),
                      key=lambda t: (-counts[t], t))
        self.min_count = min_count
        self.tokens = tuple(kept)
        self.index = {t: i for i, t in enumerate(kept)}
        self.counts = np.array([counts[t] for t in kept], dtype=np.int64)

    @classmethod
    def build(cls, documents, min_count=2):
        counts = Counter(token for doc in documents for p in doc.paragraphs for token in p)
        return cls(counts, min_count)

    def __len__(self):
        return len(self.tokens)

    def __contains__(self, token):
        return token in self.index

    def encode(self, tokens):
        """Indices of retained tokens, dropping the rest"""
        return np.array([self.index[t] for t in tokens if t in self.index], dtype=np.int64)

    def lookup(self, token):
        try:
            return self.index[token]
        except KeyError:
            raise EmbeddingError(f"token {token!r} is not in the vocabulary") from None


def _hidden(paragraph_vector, word_vectors):
    parts = [np.asarray(paragraph_vector, dtype=float).ravel()]
    parts += [np.asarray(w, dtype=float).ravel() for w in word_vectors]
    return np.concatenate(parts)


def softmax_distribution(word_vectors, paragraph_vector, output_weights, bias=None):
    """Full softmax over the vocabulary for the concatenated context"""
    h = _hidden(paragraph_vector, word_vectors)
    U = np.asarray(output_weights, dtype=float)
    if U.ndim != 2 or U.shape[1] != h.shape[0]:
        raise DimensionMismatchError(
            f"output weights {U.shape} do not match context dimension {h.shape[0]}")
    logits = U @ h
    if bias is not None:
        logits = logits + np.asarray(bias, dtype=float)
    return softmax(logits)


def context_score(word_vectors, paragraph_vector, output_weights, target, bias=None):
    """Probability of the target vocabulary index given the context window"""
    probs = softmax_distribution(word_vectors, paragraph_vector, output_weights, bias)
    if not 0 <= target < len(probs):
        raise EmbeddingError(f"target index {target} outside vocabulary of {len(probs)}")
    return float(probs[target])


def pvdm_loss_and_grad(paragraph_vector, word_vectors, output_weights, bias, target, negatives):
    """Negative-sampling loss for one center word and its gradients.

    Returns (loss, grads) with grads keyed 'paragraph', 'words', 'output', 'bias'.
    """
    d = len(paragraph_vector)
    h = _hidden(paragraph_vector, word_vectors)
    U = np.asarray(output_weights, dtype=float)
    b = np.asarray(bias, dtype=float)

    grad_h = np.zeros_like(h)
    grad_U = np.zeros_like(U)
    grad_b = np.zeros_like(b)

    z = U[target] @ h + b[target]
    loss = float(np.logaddexp(0.0, -z))
    dz = expit(z) - 1.0
    grad_h += dz * U[target]
    grad_U[target] += dz * h
    grad_b[target] += dz

    for n in negatives:
        zn = U[n] @ h + b[n]
        loss += float(np.logaddexp(0.0, zn))
        dzn = expit(zn)
        grad_h += dzn * U[n]
        grad_U[n] += dzn * h
        grad_b[n] += dzn

    grads = {
        'paragraph': grad_h[:d],
        'words': grad_h[d:].reshape(len(word_vectors), d) if len(word_vectors) else
                 np.zeros((0, d)),
        'output': grad_U,
        'bias': grad_b,
    }
    return loss, grads


class ParagraphVectorEmbedder(BaseEmbedder):
    """PV-DM: predict each word from its node's paragraph vector concatenated
    with the 2k surrounding word vectors; boundaries are padded with a null
    word whose vector stays zero.
    """

    def __init__(self, documents, cfg):
        super().__init__(cfg)
        if not documents:
            raise EmbeddingError("no documents to train on")
        if all(doc.num_tokens() == 0 for doc in documents):
            raise EmbeddingError("all documents are empty")
        self.documents = documents
        self.vocab = Vocabulary.build(documents, cfg.min_count)
        self.null_index = len(self.vocab)
        self.encoded = [[self.vocab.encode(p) for p in doc.paragraphs] for doc in documents]
        if len(self.vocab) == 0:
            logger.warning("No token reaches min_count=%d; content vectors stay untrained",
                           cfg.min_count)
        self.paragraph = None

    def _initialize(self):
        d, k = self.cfg.dim, self.cfg.window
        self.paragraph = self.rng.uniform(-0.5 / d, 0.5 / d, size=(len(self.documents), d))
        self.words = self.rng.uniform(-0.5 / d, 0.5 / d, size=(len(self.vocab) + 1, d))
        self.words[self.null_index] = 0.0
        self.output = np.zeros((len(self.vocab), (2 * k + 1) * d))
        self.bias = np.zeros(len(self.vocab))
        if len(self.vocab):
            self.build_noise_distribution(self.vocab.counts)
        total = sum(len(p) for doc in self.encoded for p in doc)
        self._total_work = max(1, total * self.cfg.epochs)

    def _batches(self, epoch_rng):
        items = [(d, p) for d, doc in enumerate(self.encoded) for p in doc if len(p)]
        for i in epoch_rng.permutation(len(items)):
            doc_index, tokens = items[i]
            yield (doc_index, tokens), len(tokens)

    def context_windows(self, tokens):
        """(P, 2k) context indices around every position, null-padded"""
        k = self.cfg.window
        pad = np.full(k, self.null_index, dtype=np.int64)
        windows = sliding_window_view(np.concatenate([pad, tokens, pad]), 2 * k + 1)
        return np.delete(windows, k, axis=1)

    def _train_batch(self, batch, lr, rng):
        doc_index, targets = batch
        d = self.cfg.dim
        ctx = self.context_windows(targets)
        P = len(targets)
        h = np.concatenate([np.broadcast_to(self.paragraph[doc_index], (P, d)),
                            self.words[ctx].reshape(P, -1)], axis=1)

        Ut = self.output[targets]
        z = np.clip(np.einsum('ih,ih->i', Ut, h) + self.bias[targets], -MAX_EXP, MAX_EXP)
        g = 1.0 - sigmoid(z)
        loss = float(np.sum(np.logaddexp(0.0, -z)))
        grad_h = g[:, None] * Ut
        np.add.at(self.output, targets, lr * g[:, None] * h)
        np.add.at(self.bias, targets, lr * g)

        kn = self.cfg.negatives
        if kn > 0:
            negatives = self.draw_negatives(rng, (P, kn))
            keep = negatives != targets[:, None]
            Un = self.output[negatives]
            zn = np.clip(np.einsum('ih,ikh->ik', h, Un) + self.bias[negatives],
                         -MAX_EXP, MAX_EXP)
            gn = -sigmoid(zn) * keep
            loss += float(np.sum(np.logaddexp(0.0, zn) * keep))
            grad_h += np.einsum('ik,ikh->ih', gn, Un)
            np.add.at(self.output, negatives.ravel(),
                      lr * (gn[:, :, None] * h[:, None, :]).reshape(-1, h.shape[1]))
            np.add.at(self.bias, negatives.ravel(), lr * gn.ravel())

        self.paragraph[doc_index] += lr * grad_h[:, :d].sum(axis=0)
        np.add.at(self.words, ctx.ravel(), lr * grad_h[:, d:].reshape(-1, d))
        self.words[self.null_index] = 0.0
        return loss

    def context_probability(self, doc_index, context_tokens, target):
        """Full-softmax probability of `target` given 2k context tokens"""
        if len(context_tokens) != 2 * self.cfg.window:
            raise DimensionMismatchError(
                f"expected {2 * self.cfg.window} context tokens, got {len(context_tokens)}")
        words = [self.words[self.null_index if t is None else self.vocab.lookup(t)]
                 for t in context_tokens]
        return context_score(words, self.paragraph[doc_index], self.output,
                             self.vocab.lookup(target), bias=self.bias)


def train_content(documents, cfg, progress=False):
    """Learn one content vector per document node"""
    embedder = ParagraphVectorEmbedder(documents, cfg)
    embedder.fit(progress=progress)
    logger.info("Content embedding trained: %d documents, vocabulary %d, d=%d",
                len(documents), len(embedder.vocab), cfg.dim)
    return EmbeddingMatrix([doc.node for doc in documents], embedder.paragraph)
