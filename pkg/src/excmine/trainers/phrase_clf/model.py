from typing import Optional, Sequence, Tuple

import numpy as np

from excmine.dataset import CATEGORIES, NUM_CATEGORIES, Category, KeywordIndex, Phrase, Sentence
from excmine.errors import WidthMismatch
from excmine.features.embeddings import EmbeddingTable
from excmine.features.template import phrase_feature_width, phrase_features


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - np.max(logits, axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / np.sum(exp, axis=-1, keepdims=True)


def balanced_sample_weights(labels: np.ndarray) -> np.ndarray:
    """n / (classes present * n_c) per example, so every present class carries equal total weight."""
    counts = np.bincount(labels, minlength=NUM_CATEGORIES)
    present = np.count_nonzero(counts)
    return len(labels) / (present * counts[labels])


def softmax_cross_entropy(
    weights: np.ndarray,
    bias: np.ndarray,
    features: np.ndarray,
    labels: np.ndarray,
    l2_lambda: float,
    sample_weight: Optional[np.ndarray] = None,
) -> Tuple[float, np.ndarray, np.ndarray]:
    """Mean (optionally weighted) cross-entropy plus (l2/2)|W|^2, with gradients for W and b."""
    n = features.shape[0]
    if sample_weight is None:
        sample_weight = np.ones(n, dtype=np.float64)
    logits = features @ weights.T + bias
    shifted = logits - np.max(logits, axis=1, keepdims=True)
    log_norm = np.log(np.sum(np.exp(shifted), axis=1))
    log_probs = shifted - log_norm[:, None]
    loss = -np.sum(sample_weight * log_probs[np.arange(n), labels]) / n + 0.5 * l2_lambda * np.sum(weights * weights)

    delta = np.exp(log_probs)
    delta[np.arange(n), labels] -= 1.0
    delta *= (sample_weight / n)[:, None]
    grad_weights = delta.T @ features + l2_lambda * weights
    grad_bias = delta.sum(axis=0)
    return float(loss), grad_weights, grad_bias


class SoftmaxModel:
    """Linear softmax over the eleven categories, rows in canonical category order."""

    def __init__(
        self,
        weights: np.ndarray,
        bias: np.ndarray,
        keyword_index: Optional[KeywordIndex] = None,
        embeddings: Optional[EmbeddingTable] = None,
    ):
        weights = np.array(weights, dtype=np.float64)
        bias = np.array(bias, dtype=np.float64)
        if weights.ndim != 2 or weights.shape[0] != NUM_CATEGORIES or bias.shape != (NUM_CATEGORIES,):
            raise ValueError(f"expected {NUM_CATEGORIES} x F weights and {NUM_CATEGORIES} biases")
        if not np.all(np.isfinite(weights)) or not np.all(np.isfinite(bias)):
            raise ValueError("softmax weights must be finite")
        weights.setflags(write=False)
        bias.setflags(write=False)
        self.weights = weights
        self.bias = bias
        self.keyword_index = keyword_index if keyword_index is not None else KeywordIndex({})
        self.embeddings = embeddings
        self.metadata: dict = {}
        # per-epoch training losses, empty for loaded models
        self.history: Tuple[float, ...] = ()

    @property
    def width(self) -> int:
        return self.weights.shape[1]

    @property
    def dim(self) -> int:
        return self.width - phrase_feature_width(0)

    def with_embeddings(self, embeddings: EmbeddingTable) -> "SoftmaxModel":
        return SoftmaxModel(self.weights, self.bias, self.keyword_index, embeddings)

    def featurize(self, sentence: Sentence, phrase: Phrase) -> np.ndarray:
        if self.embeddings is None:
            raise ValueError("model has no embedding table attached")
        return phrase_features(self.embeddings, self.keyword_index, sentence, phrase.span)


def predict(model: SoftmaxModel, features: np.ndarray) -> Tuple[Category, np.ndarray]:
    features = np.asarray(features, dtype=np.float64)
    if features.shape != (model.width,):
        raise WidthMismatch(f"feature vector has shape {features.shape}, model expects width {model.width}")
    probs = softmax(model.weights @ features + model.bias)
    # argmax returns the first maximum, i.e. the lowest canonical index
    return CATEGORIES[int(np.argmax(probs))], probs


def classify_phrases(model: SoftmaxModel, sentences, phrases: Sequence[Phrase]) -> list:
    """Fill in the predicted category of each phrase; `sentences` maps sentence id to Sentence."""
    return [p.with_category(predict(model, model.featurize(sentences[p.sentence_id], p))[0]) for p in phrases]
